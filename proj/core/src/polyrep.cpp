#include "stabpair/polyrep.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace stabpair {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

int TorusCharacter::total() const { return std::accumulate(raw.begin(), raw.end(), 0); }

RationalVector TorusCharacter::projected() const {
  Rational shift(total(), static_cast<long>(raw.size()));
  shift.canonicalize();
  RationalVector out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = Rational(raw[i]) - shift;
  return out;
}

TorusCharacter column_degrees(const Exponent& e, const MatrixShape& shape) {
  TorusCharacter c{std::vector<int>(static_cast<std::size_t>(shape.cols), 0)};
  for (int r = 0; r < shape.rows; ++r) {
    for (int k = 0; k < shape.cols; ++k) c.raw[static_cast<std::size_t>(k)] += e[static_cast<std::size_t>(r * shape.cols + k)];
  }
  return c;
}

namespace {

struct ExponentHash {
  std::size_t operator()(const Exponent& e) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto x : e) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

using HashTerms = std::unordered_map<Exponent, Complex, ExponentHash>;

int exponent_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

void check_shape(const MatrixShape& s) {
  if (s.rows < 1 || s.cols < 1) throw std::invalid_argument("MatrixShape: rows and cols must be positive");
}

// Neumaier-compensated accumulator for one real component.
struct CompensatedSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + c; }
};

HashTerms multiply_terms(const HashTerms& a, const HashTerms& b) {
  HashTerms out;
  out.reserve(a.size() * b.size());
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
      out[std::move(e)] += ca * cb;
    }
  }
  return out;
}

}  // namespace

SparsePolynomial::SparsePolynomial(MatrixShape shape, int degree) : shape_(shape), degree_(degree) {
  check_shape(shape_);
  if (degree_ < 0) throw std::invalid_argument("SparsePolynomial: negative degree");
}

SparsePolynomial::SparsePolynomial(MatrixShape shape, int degree, TermMap terms)
    : SparsePolynomial(shape, degree) {
  for (auto& [e, c] : terms) {
    if (e.size() != static_cast<std::size_t>(shape_.size())) {
      throw std::invalid_argument("SparsePolynomial: exponent matrix has wrong shape");
    }
    if (exponent_degree(e) != degree_) {
      throw std::invalid_argument("SparsePolynomial: term degree " + std::to_string(exponent_degree(e)) +
                                  " differs from declared degree " + std::to_string(degree_));
    }
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("SparsePolynomial: non-finite coefficient");
    }
    if (c != Complex(0.0)) terms_.emplace(e, c);
  }
}

SparsePolynomial SparsePolynomial::constant(MatrixShape shape, Complex c) {
  TermMap t;
  t[Exponent(static_cast<std::size_t>(shape.size()), 0)] = c;
  return SparsePolynomial(shape, 0, std::move(t));
}

SparsePolynomial SparsePolynomial::variable(MatrixShape shape, int row, int col) {
  if (row < 0 || row >= shape.rows || col < 0 || col >= shape.cols) {
    throw std::out_of_range("SparsePolynomial::variable: entry outside shape");
  }
  Exponent e(static_cast<std::size_t>(shape.size()), 0);
  e[static_cast<std::size_t>(row * shape.cols + col)] = 1;
  return monomial(shape, e);
}

SparsePolynomial SparsePolynomial::monomial(MatrixShape shape, const Exponent& e, Complex c) {
  TermMap t;
  t[e] = c;
  return SparsePolynomial(shape, exponent_degree(e), std::move(t));
}

SparsePolynomial& SparsePolynomial::operator+=(const SparsePolynomial& o) {
  if (!(shape_ == o.shape_)) throw std::invalid_argument("SparsePolynomial +: shape mismatch");
  if (o.is_zero()) return *this;
  if (is_zero()) degree_ = o.degree_;
  if (degree_ != o.degree_) throw std::invalid_argument("SparsePolynomial +: degree mismatch");
  for (const auto& [e, c] : o.terms_) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == Complex(0.0)) terms_.erase(it);
    }
  }
  return *this;
}

SparsePolynomial& SparsePolynomial::operator-=(const SparsePolynomial& o) {
  SparsePolynomial neg = o;
  neg *= -1.0;
  return *this += neg;
}

SparsePolynomial& SparsePolynomial::operator*=(Complex c) {
  if (c == Complex(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b) {
  if (!(a.shape_ == b.shape_)) throw std::invalid_argument("SparsePolynomial *: shape mismatch");
  HashTerms ha(a.terms_.begin(), a.terms_.end());
  HashTerms hb(b.terms_.begin(), b.terms_.end());
  auto prod = multiply_terms(ha, hb);
  SparsePolynomial::TermMap t(prod.begin(), prod.end());
  return SparsePolynomial(a.shape_, a.degree_ + b.degree_, std::move(t));
}

Complex SparsePolynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

nlohmann::json SparsePolynomial::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : terms_) {
    nlohmann::json exps = nlohmann::json::array();
    for (int r = 0; r < shape_.rows; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int k = 0; k < shape_.cols; ++k) row.push_back(e[static_cast<std::size_t>(r * shape_.cols + k)]);
      exps.push_back(std::move(row));
    }
    terms.push_back({{"exps", std::move(exps)}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"shape", {shape_.rows, shape_.cols}}, {"degree", degree_}, {"terms", std::move(terms)}};
}

SparsePolynomial SparsePolynomial::from_json(const nlohmann::json& j) {
  const auto& sh = j.at("shape");
  if (!sh.is_array() || sh.size() != 2) throw std::invalid_argument("polynomial JSON: shape must be [k, m]");
  MatrixShape shape{sh[0].get<int>(), sh[1].get<int>()};
  check_shape(shape);
  const int degree = j.at("degree").get<int>();
  TermMap terms;
  std::size_t index = 0;
  for (const auto& t : j.at("terms")) {
    const auto& exps = t.at("exps");
    if (exps.size() != static_cast<std::size_t>(shape.rows)) {
      throw std::invalid_argument("polynomial JSON: term " + std::to_string(index) + " has wrong row count");
    }
    Exponent e;
    for (const auto& row : exps) {
      if (row.size() != static_cast<std::size_t>(shape.cols)) {
        throw std::invalid_argument("polynomial JSON: term " + std::to_string(index) + " has wrong column count");
      }
      for (const auto& x : row) {
        const int v = x.get<int>();
        if (v < 0) throw std::invalid_argument("polynomial JSON: negative exponent in term " + std::to_string(index));
        e.push_back(static_cast<std::uint16_t>(v));
      }
    }
    const Complex c(t.value("re", 0.0), t.value("im", 0.0));
    terms[e] += c;
    ++index;
  }
  return SparsePolynomial(shape, degree, std::move(terms));
}

double relative_distance(const SparsePolynomial& a, const SparsePolynomial& b) {
  double scale = 0.0, diff = 0.0;
  for (const auto& [e, c] : a.terms()) {
    scale = std::max(scale, std::abs(c));
    diff = std::max(diff, std::abs(c - b.coefficient(e)));
  }
  for (const auto& [e, c] : b.terms()) {
    scale = std::max(scale, std::abs(c));
    diff = std::max(diff, std::abs(c - a.coefficient(e)));
  }
  return scale == 0.0 ? diff : diff / scale;
}

// ---------------------------------------------------------------------------

GroupElement::GroupElement(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw std::invalid_argument("GroupElement: matrix must be square");
  det_ = m_.determinant();
  if (std::abs(det_) == 0.0 || !std::isfinite(std::abs(det_))) {
    throw std::invalid_argument("GroupElement: singular matrix");
  }
}

GroupElement GroupElement::identity(int n) { return GroupElement(ComplexMatrix::Identity(n, n)); }

GroupElement GroupElement::diagonal(const std::vector<Complex>& entries) {
  const int n = static_cast<int>(entries.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return GroupElement(std::move(m));
}

GroupElement GroupElement::permutation(const std::vector<int>& image) {
  const int n = static_cast<int>(image.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(image[static_cast<std::size_t>(i)], i) = 1.0;
  return GroupElement(std::move(m));
}

GroupElement GroupElement::random_integer_sl(int n, Rng& rng, int steps) {
  if (steps <= 0) steps = 3 * n;
  ComplexMatrix m = ComplexMatrix::Identity(n, n);
  if (n == 1) return GroupElement(std::move(m));
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int s = 0; s < steps; ++s) {
    const int i = pick(rng);
    int j = pick(rng);
    while (j == i) j = pick(rng);
    const double c = sign(rng) ? 1.0 : -1.0;
    m.col(j) += c * m.col(i);
  }
  return GroupElement(std::move(m));
}

GroupElement GroupElement::random_unitary(int n, Rng& rng) {
  ComplexMatrix z = gaussian_sample(MatrixShape{n, n}, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const Complex phase = std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
    q.col(i) *= phase;
  }
  return GroupElement(std::move(q));
}

GroupElement GroupElement::random_sl(int n, Rng& rng) {
  ComplexMatrix z = gaussian_sample(MatrixShape{n, n}, rng);
  const Complex det = z.determinant();
  z /= std::pow(det, 1.0 / n);
  return GroupElement(std::move(z));
}

bool GroupElement::is_diagonal() const {
  for (int i = 0; i < m_.rows(); ++i) {
    for (int j = 0; j < m_.cols(); ++j) {
      if (i != j && m_(i, j) != Complex(0.0)) return false;
    }
  }
  return true;
}

nlohmann::json GroupElement::to_json() const {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int i = 0; i < m_.rows(); ++i) {
    nlohmann::json rr = nlohmann::json::array(), ii = nlohmann::json::array();
    for (int j = 0; j < m_.cols(); ++j) {
      rr.push_back(m_(i, j).real());
      ii.push_back(m_(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

GroupElement GroupElement::from_json(const nlohmann::json& j) {
  const auto& re = j.at("re");
  const int n = static_cast<int>(re.size());
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    if (re[static_cast<std::size_t>(i)].size() != static_cast<std::size_t>(n)) {
      throw std::invalid_argument("GroupElement JSON: matrix must be square");
    }
    for (int k = 0; k < n; ++k) {
      double imv = 0.0;
      if (j.contains("im")) imv = j["im"][static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
      m(i, k) = Complex(re[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>(), imv);
    }
  }
  return GroupElement(std::move(m));
}

OnePSG::OnePSG(std::vector<long> exponents) : exponents_(std::move(exponents)) {
  if (exponents_.empty()) throw std::invalid_argument("OnePSG: empty exponent vector");
  if (std::accumulate(exponents_.begin(), exponents_.end(), 0L) != 0) {
    throw std::invalid_argument("OnePSG: exponents must sum to zero");
  }
}

GroupElement OnePSG::at(double t) const {
  std::vector<Complex> d;
  d.reserve(exponents_.size());
  for (long e : exponents_) d.emplace_back(std::pow(t, static_cast<double>(e)));
  return GroupElement::diagonal(d);
}

// ---------------------------------------------------------------------------

BlackBoxPolynomial::BlackBoxPolynomial(MatrixShape shape, int degree, Evaluator evaluator, std::uint64_t check_seed)
    : shape_(shape), degree_(degree), evaluator_(std::move(evaluator)) {
  check_shape(shape_);
  if (degree_ < 0) throw std::invalid_argument("BlackBoxPolynomial: negative degree");
  if (!evaluator_) throw std::invalid_argument("BlackBoxPolynomial: missing evaluator");
  Rng rng(derive_seed(check_seed, 0xB1ACB0));
  std::uniform_real_distribution<double> radius(0.5, 1.5), angle(0.0, 2.0 * M_PI);
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix a = gaussian_sample(shape_, rng);
    const Complex t = std::polar(radius(rng), angle(rng));
    const Complex lhs = evaluator_(t * a);
    const Complex rhs = std::pow(t, degree_) * evaluator_(a);
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (!std::isfinite(scale)) throw std::invalid_argument("BlackBoxPolynomial: non-finite value in homogeneity check");
    if (scale > 0 && std::abs(lhs - rhs) > 1e-8 * scale) {
      throw std::invalid_argument("BlackBoxPolynomial: evaluator is not homogeneous of degree " +
                                  std::to_string(degree_));
    }
  }
}

const MatrixShape& shape_of(const Polynomial& p) {
  return std::visit([](const auto& x) -> const MatrixShape& { return x.shape(); }, p);
}

int degree_of(const Polynomial& p) {
  return std::visit([](const auto& x) { return x.degree(); }, p);
}

FormalPower::FormalPower(Polynomial b, int k) : base(std::move(b)), exponent(k) {
  if (exponent < 1) throw std::invalid_argument("FormalPower: exponent must be >= 1");
}

// ---------------------------------------------------------------------------

std::set<TorusCharacter> support(const SparsePolynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("support: zero polynomial");
  std::set<TorusCharacter> out;
  for (const auto& [e, c] : p.terms()) out.insert(column_degrees(e, p.shape()));
  return out;
}

SparsePolynomial act(const GroupElement& sigma, const SparsePolynomial& p) {
  const MatrixShape& shape = p.shape();
  if (sigma.size() != shape.cols) throw std::invalid_argument("act: group element size differs from column count");
  const auto& s = sigma.matrix();
  const std::size_t nvars = static_cast<std::size_t>(shape.size());

  // x_{ij} -> sum_k s_{kj} x_{ik}
  std::vector<HashTerms> linear(nvars);
  for (int i = 0; i < shape.rows; ++i) {
    for (int j = 0; j < shape.cols; ++j) {
      auto& l = linear[static_cast<std::size_t>(i * shape.cols + j)];
      for (int k = 0; k < shape.cols; ++k) {
        if (s(k, j) == Complex(0.0)) continue;
        Exponent e(nvars, 0);
        e[static_cast<std::size_t>(i * shape.cols + k)] = 1;
        l[std::move(e)] = s(k, j);
      }
    }
  }
  std::map<std::pair<std::size_t, int>, HashTerms> powers;
  auto power_of = [&](std::size_t var, int e) -> const HashTerms& {
    int have = 1;
    while (have < e && powers.count({var, have + 1})) ++have;
    if (have == 1 && !powers.count({var, 1})) powers.emplace(std::make_pair(var, 1), linear[var]);
    for (int k = have + 1; k <= e; ++k) {
      powers.emplace(std::make_pair(var, k), multiply_terms(powers.at({var, k - 1}), linear[var]));
    }
    return powers.at({var, e});
  };

  HashTerms acc;
  for (const auto& [e, c] : p.terms()) {
    HashTerms prod;
    prod[Exponent(nvars, 0)] = c;
    for (std::size_t v = 0; v < nvars; ++v) {
      if (e[v] == 0) continue;
      prod = multiply_terms(prod, power_of(v, e[v]));
    }
    for (auto& [pe, pc] : prod) acc[pe] += pc;
  }
  SparsePolynomial::TermMap out;
  for (auto& [e, c] : acc) {
    if (c != Complex(0.0)) out.emplace(e, c);
  }
  return SparsePolynomial(shape, p.degree(), std::move(out));
}

BlackBoxPolynomial act(const GroupElement& sigma, const BlackBoxPolynomial& p) {
  if (sigma.size() != p.shape().cols) throw std::invalid_argument("act: group element size differs from column count");
  ComplexMatrix s = sigma.matrix();
  auto base = p;
  return BlackBoxPolynomial(p.shape(), p.degree(),
                            [s = std::move(s), base = std::move(base)](const ComplexMatrix& a) { return base(a * s); });
}

Polynomial act(const GroupElement& sigma, const Polynomial& p) {
  return std::visit([&](const auto& x) -> Polynomial { return act(sigma, x); }, p);
}

Complex evaluate(const SparsePolynomial& p, const ComplexMatrix& a) {
  const MatrixShape& shape = p.shape();
  if (a.rows() != shape.rows || a.cols() != shape.cols) throw std::invalid_argument("evaluate: shape mismatch");
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) {
        throw std::invalid_argument("evaluate: non-finite matrix entry");
      }
    }
  }
  const std::size_t nvars = static_cast<std::size_t>(shape.size());
  const int maxpow = p.degree();
  std::vector<Complex> pw(nvars * static_cast<std::size_t>(maxpow + 1));
  for (std::size_t v = 0; v < nvars; ++v) {
    const Complex x = a(static_cast<int>(v) / shape.cols, static_cast<int>(v) % shape.cols);
    Complex cur = 1.0;
    for (int k = 0; k <= maxpow; ++k) {
      pw[v * static_cast<std::size_t>(maxpow + 1) + static_cast<std::size_t>(k)] = cur;
      cur *= x;
    }
  }
  CompensatedSum re, im;
  for (const auto& [e, c] : p.terms()) {
    Complex term = c;
    for (std::size_t v = 0; v < nvars; ++v) {
      if (e[v]) term *= pw[v * static_cast<std::size_t>(maxpow + 1) + e[v]];
    }
    re.add(term.real());
    im.add(term.imag());
  }
  return {re.value(), im.value()};
}

Complex evaluate(const BlackBoxPolynomial& p, const ComplexMatrix& a) {
  if (a.rows() != p.shape().rows || a.cols() != p.shape().cols) throw std::invalid_argument("evaluate: shape mismatch");
  if (!a.allFinite()) throw std::invalid_argument("evaluate: non-finite matrix entry");
  return p(a);
}

Complex evaluate(const Polynomial& p, const ComplexMatrix& a) {
  return std::visit([&](const auto& x) { return evaluate(x, a); }, p);
}

std::set<TorusCharacter> tensor_support(const SparsePolynomial& v, const SparsePolynomial& w) {
  if (v.shape().cols != w.shape().cols) throw std::invalid_argument("tensor_support: ambient dimension mismatch");
  const auto sv = support(v);
  const auto sw = support(w);
  std::set<TorusCharacter> out;
  for (const auto& a : sv) {
    for (const auto& b : sw) {
      TorusCharacter c{a.raw};
      for (std::size_t i = 0; i < c.raw.size(); ++i) c.raw[i] += b.raw[i];
      out.insert(std::move(c));
    }
  }
  return out;
}

ComplexMatrix gaussian_sample(const MatrixShape& shape, Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  ComplexMatrix z(shape.rows, shape.cols);
  for (int i = 0; i < shape.rows; ++i) {
    for (int j = 0; j < shape.cols; ++j) {
      const double re = n(rng);
      const double im = n(rng);
      z(i, j) = Complex(re, im);
    }
  }
  return z;
}

}  // namespace stabpair
