#include "stabpair/varieties.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "stabpair/energy.hpp"

namespace stabpair {

namespace {

struct Entry {
  int row;
  int col;
  double scale;
};

using EntryFn = std::function<std::optional<Entry>(int, int)>;

// Laplace expansion along rows with memoized column-subset minors.
SparsePolynomial symbolic_determinant(int size, const MatrixShape& shape, const EntryFn& entry) {
  if (size > 30) throw std::invalid_argument("symbolic_determinant: matrix too large");
  std::unordered_map<std::uint32_t, SparsePolynomial> memo;
  std::function<const SparsePolynomial&(std::uint32_t)> minor = [&](std::uint32_t mask) -> const SparsePolynomial& {
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    const int remaining = std::popcount(mask);
    const int r = size - remaining;
    SparsePolynomial acc(shape, remaining);
    if (remaining == 0) {
      acc = SparsePolynomial::constant(shape, 1.0);
    } else {
      int pos = 0;
      for (int c = 0; c < size; ++c) {
        if (!(mask >> c & 1u)) continue;
        const auto e = entry(r, c);
        if (e) {
          const SparsePolynomial& sub = minor(mask & ~(1u << c));
          if (!sub.is_zero()) {
            const double sign = pos % 2 ? -1.0 : 1.0;
            acc += SparsePolynomial::variable(shape, e->row, e->col) * sub * Complex(sign * e->scale);
          }
        }
        ++pos;
      }
    }
    return memo.emplace(mask, std::move(acc)).first->second;
  };
  return minor((1u << size) - 1u);
}

ComplexMatrix sylvester_matrix(const std::vector<Complex>& f, const std::vector<Complex>& g) {
  const int m = static_cast<int>(f.size()) - 1;
  ComplexMatrix s = ComplexMatrix::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k <= m; ++k) {
      s(i, i + k) = f[static_cast<std::size_t>(k)];
      s(m + i, i + k) = g[static_cast<std::size_t>(k)];
    }
  }
  return s;
}

void require_degree(int d) {
  if (d < 2) throw std::invalid_argument("rational normal curve needs d >= 2");
}

std::vector<Complex> row_of(const ComplexMatrix& a, int r) {
  std::vector<Complex> out(static_cast<std::size_t>(a.cols()));
  for (int k = 0; k < a.cols(); ++k) out[static_cast<std::size_t>(k)] = a(r, k);
  return out;
}

}  // namespace

Complex sylvester_resultant(const std::vector<Complex>& f, const std::vector<Complex>& g) {
  if (f.size() != g.size() || f.size() < 2) throw std::invalid_argument("sylvester_resultant: forms must share degree >= 1");
  return sylvester_matrix(f, g).partialPivLu().determinant();
}

double discriminant_normalizer(int d) {
  require_degree(d);
  const double sign = ((d * (d - 1) / 2) % 2) ? -1.0 : 1.0;
  return sign * std::pow(static_cast<double>(d), d - 2);
}

Complex binary_discriminant(const std::vector<Complex>& a) {
  const int d = static_cast<int>(a.size()) - 1;
  require_degree(d);
  std::vector<Complex> fs(static_cast<std::size_t>(d)), ft(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    fs[static_cast<std::size_t>(k)] = static_cast<double>(d - k) * a[static_cast<std::size_t>(k)];
    ft[static_cast<std::size_t>(k)] = static_cast<double>(k + 1) * a[static_cast<std::size_t>(k + 1)];
  }
  return sylvester_resultant(fs, ft) / discriminant_normalizer(d);
}

SparsePolynomial rnc_resultant_symbolic(int d) {
  require_degree(d);
  const MatrixShape shape{2, d + 1};
  return symbolic_determinant(2 * d, shape, [d](int r, int c) -> std::optional<Entry> {
    const int row = r < d ? 0 : 1;
    const int k = c - (r < d ? r : r - d);
    if (k < 0 || k > d) return std::nullopt;
    return Entry{row, k, 1.0};
  });
}

SparsePolynomial rnc_hyperdiscriminant_symbolic(int d) {
  require_degree(d);
  const MatrixShape shape{1, d + 1};
  const int m = d - 1;
  auto res = symbolic_determinant(2 * m, shape, [d, m](int r, int c) -> std::optional<Entry> {
    const bool first = r < m;
    const int k = c - (first ? r : r - m);
    if (k < 0 || k > m) return std::nullopt;
    if (first) return Entry{0, k, static_cast<double>(d - k)};
    return Entry{0, k + 1, static_cast<double>(k + 1)};
  });
  res *= Complex(1.0 / discriminant_normalizer(d));
  const Complex lead = res.terms().begin()->second;
  if (std::abs(lead - Complex(1.0)) > 1e-9) {
    throw std::logic_error("rnc_hyperdiscriminant: normalization constant does not give a unit leading coefficient");
  }
  // Coefficients are integers; remove rounding from the division.
  SparsePolynomial::TermMap rounded;
  for (const auto& [e, c] : res.terms()) rounded.emplace(e, Complex(std::round(c.real()), 0.0));
  return SparsePolynomial(shape, res.degree(), std::move(rounded));
}

BlackBoxPolynomial rnc_resultant_blackbox(int d) {
  require_degree(d);
  return BlackBoxPolynomial({2, d + 1}, 2 * d,
                            [](const ComplexMatrix& a) { return sylvester_resultant(row_of(a, 0), row_of(a, 1)); });
}

BlackBoxPolynomial rnc_hyperdiscriminant_blackbox(int d) {
  require_degree(d);
  return BlackBoxPolynomial({1, d + 1}, 2 * d - 2, [](const ComplexMatrix& a) { return binary_discriminant(row_of(a, 0)); });
}

Polynomial rnc_resultant(int d) {
  require_degree(d);
  if (d <= resultant_symbolic_max) return rnc_resultant_symbolic(d);
  return rnc_resultant_blackbox(d);
}

Polynomial rnc_hyperdiscriminant(int d) {
  require_degree(d);
  if (d <= discriminant_symbolic_max) return rnc_hyperdiscriminant_symbolic(d);
  return rnc_hyperdiscriminant_blackbox(d);
}

int measured_degree(const Polynomial& p, std::uint64_t seed) {
  if (const auto* sp = std::get_if<SparsePolynomial>(&p)) return sp->degree();
  Rng rng(derive_seed(seed, 0xde9));
  std::optional<long> found;
  for (int trial = 0; trial < 3; ++trial) {
    const ComplexMatrix a = gaussian_sample(shape_of(p), rng);
    const double v1 = std::abs(evaluate(p, a));
    const double v2 = std::abs(evaluate(p, ComplexMatrix(2.0 * a)));
    if (v1 == 0) continue;
    const double x = std::log2(v2 / v1);
    const long k = std::lround(x);
    if (std::abs(x - k) > 1e-6 || (found && *found != k)) {
      throw std::runtime_error("measured_degree: polynomial is not homogeneous at sampled points");
    }
    found = k;
  }
  if (!found) throw std::runtime_error("measured_degree: polynomial vanished at every sample");
  return static_cast<int>(*found);
}

double VarietyExample::mu_backsolved() const {
  return (static_cast<double>(n) * (n + 1) * d - deg_delta) / d;
}

nlohmann::json VarietyExample::summary() const {
  return {{"family", family},
          {"n", n},
          {"N", N},
          {"d", d},
          {"deg_R", deg_R},
          {"deg_delta", deg_delta},
          {"R_representation", std::holds_alternative<SparsePolynomial>(R) ? "sparse" : "black-box"},
          {"Delta_representation", std::holds_alternative<SparsePolynomial>(Delta) ? "sparse" : "black-box"},
          {"mu_backsolved", mu_backsolved()},
          {"mu_note", "inferred from deg_delta = n(n+1)d - d*mu; mu is not defined upstream"}};
}

VarietyExample rational_normal_curve(int d) {
  require_degree(d);
  VarietyExample x{"rnc", 1, d, d, rnc_resultant(d), rnc_hyperdiscriminant(d), 0, 0};
  x.deg_R = measured_degree(x.R, static_cast<std::uint64_t>(d));
  x.deg_delta = measured_degree(x.Delta, static_cast<std::uint64_t>(d) + 1);
  return x;
}

NormalizedPair normalized_pair(const VarietyExample& x) {
  return {FormalPower(x.R, x.deg_delta), FormalPower(x.Delta, x.deg_R)};
}

PairSpec normalized_pair_spec(const VarietyExample& x) {
  return PairSpec(PairVector(x.R, x.deg_delta), PairVector(x.Delta, x.deg_R));
}

VarietyHeights variety_heights(const VarietyExample& x, const HeightOptions& options) {
  HeightOptions o_r = options, o_d = options;
  o_r.mc.seed = derive_seed(options.mc.seed, 0);
  o_d.mc.seed = derive_seed(options.mc.seed, 1);
  return {height(x.R, o_r), height(x.Delta, o_d)};
}

nlohmann::json DiscrepancyTable::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) {
    rs.push_back({{"d", r.d},
                  {"deg_R", r.deg_R},
                  {"deg_delta", r.deg_delta},
                  {"hF", r.hF.to_json()},
                  {"hDelta", r.hDelta.to_json()},
                  {"delta", r.delta},
                  {"delta_ci", r.delta_ci},
                  {"delta_over_d2", r.delta_over_d2}});
  }
  return {{"rows", rs}, {"fitted_exponent", fitted_exponent}, {"exponent_stderr", exponent_stderr}};
}

DiscrepancyTable discrepancy_table(int d_min, int d_max, const HeightOptions& options) {
  if (d_min < 2 || d_max < d_min) throw std::invalid_argument("discrepancy_table: need 2 <= d_min <= d_max");
  DiscrepancyTable table;
  for (int d = d_min; d <= d_max; ++d) {
    const auto x = rational_normal_curve(d);
    HeightOptions o = options;
    o.mc.seed = derive_seed(options.mc.seed, static_cast<std::uint64_t>(d));
    const auto h = variety_heights(x, o);
    DiscrepancyRow row;
    row.d = d;
    row.deg_R = x.deg_R;
    row.deg_delta = x.deg_delta;
    row.hF = h.hF;
    row.hDelta = h.hDelta;
    row.delta = std::abs(x.deg_delta * h.hF.h - x.deg_R * h.hDelta.h);
    row.delta_ci = 3 * std::hypot(x.deg_delta * h.hF.std_error, x.deg_R * h.hDelta.std_error);
    row.delta_over_d2 = row.delta / (static_cast<double>(d) * d);
    table.rows.push_back(row);
  }
  const std::size_t n = table.rows.size();
  if (n >= 2) {
    double mx = 0, my = 0;
    for (const auto& r : table.rows) {
      mx += std::log(r.d);
      my += std::log(r.delta);
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (const auto& r : table.rows) {
      sxx += (std::log(r.d) - mx) * (std::log(r.d) - mx);
      sxy += (std::log(r.d) - mx) * (std::log(r.delta) - my);
    }
    table.fitted_exponent = sxy / sxx;
    if (n > 2) {
      double rss = 0;
      for (const auto& r : table.rows) {
        const double e = std::log(r.delta) - my - table.fitted_exponent * (std::log(r.d) - mx);
        rss += e * e;
      }
      table.exponent_stderr = std::sqrt(rss / (n - 2) / sxx);
    }
  }
  return table;
}

OptimalConstantProbe optimal_constant_probe(const VarietyExample& x, const std::vector<GroupElement>& sigmas,
                                            const HeightOptions& options) {
  if (sigmas.empty()) throw std::invalid_argument("optimal_constant_probe: need at least one sigma");
  OptimalConstantProbe probe;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    VarietyExample moved = x;
    moved.R = act(sigmas[i], x.R);
    moved.Delta = act(sigmas[i], x.Delta);
    HeightOptions o = options;
    if (i > 0) o.mc.seed = derive_seed(options.mc.seed, i);
    const auto h = variety_heights(moved, o);
    probe.values.push_back(std::abs(x.deg_delta * h.hF.h - x.deg_R * h.hDelta.h));
    probe.lower_bound = std::max(probe.lower_bound, probe.values.back());
  }
  return probe;
}

}  // namespace stabpair
