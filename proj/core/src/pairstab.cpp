#include "stabpair/pairstab.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "stabpair/parallel.hpp"

namespace stabpair {

PairVector::PairVector(Polynomial b, int power_, int identity_power_)
    : base(std::move(b)), power(power_), identity_power(identity_power_) {
  if (power < 0 || identity_power < 0) throw std::invalid_argument("PairVector: negative exponent");
  if (const auto* sp = std::get_if<SparsePolynomial>(&base); sp && sp->is_zero()) {
    throw std::invalid_argument("PairVector: zero polynomial");
  }
}

const SparsePolynomial& PairVector::sparse_base() const {
  const auto* sp = std::get_if<SparsePolynomial>(&base);
  if (!sp) {
    throw std::invalid_argument(
        "weight polytopes need an expanded polynomial; black-box polynomials only support evaluation");
  }
  return *sp;
}

PairSpec::PairSpec(PairVector v_, PairVector w_) : v(std::move(v_)), w(std::move(w_)) {
  if (v.ambient() != w.ambient()) throw std::invalid_argument("PairSpec: v and w have different ambient N+1");
}

LatticePolytope simplex_qn(int ambient) {
  if (ambient < 1) throw std::invalid_argument("simplex_qn: ambient must be positive");
  std::vector<LatticePoint> pts;
  for (int i = 0; i < ambient; ++i) {
    TorusCharacter c{std::vector<int>(static_cast<std::size_t>(ambient), 0)};
    c.raw[static_cast<std::size_t>(i)] = 1;
    pts.push_back(c.projected());
  }
  return convex_hull(pts);
}

LatticePolytope weight_polytope(const SparsePolynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("weight_polytope: zero polynomial");
  std::vector<LatticePoint> pts;
  for (const auto& c : support(p)) pts.push_back(c.projected());
  return convex_hull(pts);
}

LatticePolytope weight_polytope(const FormalPower& p) {
  const auto* sp = std::get_if<SparsePolynomial>(&p.base);
  if (!sp) throw std::invalid_argument("weight_polytope: black-box base has no expanded support");
  return dilate(weight_polytope(*sp), Rational(p.exponent));
}

LatticePolytope weight_polytope(const PairVector& p) {
  const int n = p.ambient();
  LatticePolytope poly = convex_hull(std::vector<LatticePoint>{LatticePoint(static_cast<std::size_t>(n), Rational(0))});
  if (p.power > 0) poly = dilate(weight_polytope(p.sparse_base()), Rational(p.power));
  if (p.identity_power > 0) {
    auto q = dilate(simplex_qn(n), Rational(p.identity_power));
    poly = p.power > 0 ? minkowski_sum(poly, q) : q;
  }
  return poly;
}

Rational ops_weight(const SparsePolynomial& p, const OnePSG& lambda) {
  if (p.shape().cols != lambda.size()) throw std::invalid_argument("ops_weight: dimension mismatch");
  if (p.is_zero()) throw std::invalid_argument("ops_weight: zero polynomial");
  std::optional<long> best;
  for (const auto& c : support(p)) {
    long v = 0;
    for (std::size_t i = 0; i < c.raw.size(); ++i) v += c.raw[i] * lambda.exponents()[i];
    if (!best || v < *best) best = v;
  }
  return Rational(*best);
}

Rational ops_weight(const PairVector& p, const OnePSG& lambda) {
  Rational total = 0;
  if (p.power > 0) total += ops_weight(p.sparse_base(), lambda) * p.power;
  if (p.identity_power > 0) {
    const long lo = *std::min_element(lambda.exponents().begin(), lambda.exponents().end());
    total += Rational(lo) * p.identity_power;
  }
  return total;
}

bool semistable_diagonal(const PairSpec& pair) {
  return contains(weight_polytope(pair.w), weight_polytope(pair.v));
}

std::string to_string(StabilityStatus s) {
  switch (s) {
    case StabilityStatus::semistable_on_probed_tori:
      return "semistable-certified-on-diagonal-torus";
    case StabilityStatus::destabilized:
      return "destabilized";
    case StabilityStatus::stable_with_exponent:
      return "stable-with-exponent";
  }
  return "unknown";
}

namespace {

PairVector acted(const PairVector& p, const GroupElement& g) {
  if (p.power == 0) return p;
  return PairVector(act(g, p.sparse_base()), p.power, p.identity_power);
}

std::string witness_hash(const Witness& w) {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < w.g.size(); ++i) {
    for (int j = 0; j < w.g.size(); ++j) os << w.g.matrix()(i, j).real() << ',' << w.g.matrix()(i, j).imag() << ';';
  }
  os << '|';
  for (long e : w.lambda.exponents()) os << e << ',';
  os << '|' << w.weight_v.get_str() << '|' << w.weight_w.get_str();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// A 1-PS separating a vertex of N(v) from N(w), or nullopt if contained.
std::optional<OnePSG> destabilizing_direction(const LatticePolytope& nw, const LatticePolytope& nv) {
  const auto viol = find_violation(nw, nv);
  if (!viol) return std::nullopt;
  const Halfspace& h = nw.halfspaces()[viol->halfspace_index];
  const Rational excess = h.excess(nv.vertices()[viol->vertex_index]);
  // The violated side of the halfspace points along `normal` when excess > 0;
  // lambda is the opposite direction so that min over N(w) exceeds min over N(v).
  RationalVector dir = h.normal;
  if (excess > 0) {
    for (auto& x : dir) x = -x;
  }
  Rational mean = 0;
  for (const auto& x : dir) mean += x;
  mean /= static_cast<long>(dir.size());
  for (auto& x : dir) x -= mean;
  const auto prim = primitive_integer_direction(dir);
  std::vector<long> coeffs;
  for (const auto& x : prim) {
    if (!x.fits_slong_p()) throw std::overflow_error("destabilizing 1-PS exponent out of range");
    coeffs.push_back(x.get_si());
  }
  return OnePSG(std::move(coeffs));
}

}  // namespace

nlohmann::json StabilityVerdict::to_json() const {
  nlohmann::json j{{"status", to_string(status)}, {"trials", trials}};
  if (exponent) j["exponent"] = *exponent;
  if (witness) {
    j["witness"] = {{"g", witness->g.to_json()},
                    {"lambda", witness->lambda.exponents()},
                    {"weight_v", witness->weight_v.get_str()},
                    {"weight_w", witness->weight_w.get_str()},
                    {"trial", witness->trial}};
    j["verification_hash"] = verification_hash;
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

StabilityVerdict semistable_probe(const PairSpec& pair, const ProbeOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("semistable_probe: trials must be >= 1");
  const int n = pair.ambient();
  const std::size_t total = options.trials + 1;  // identity plus conjugates
  std::vector<std::optional<Witness>> found(total);
  std::atomic<std::size_t> first_failure{std::numeric_limits<std::size_t>::max()};

  parallel_for(total, resolve_threads(options.threads), [&](std::size_t trial) {
    if (trial > first_failure.load()) return;
    GroupElement g = GroupElement::identity(n);
    if (trial > 0) {
      Rng rng(derive_seed(options.seed, trial));
      g = GroupElement::random_integer_sl(n, rng);
    }
    const PairVector v = acted(pair.v, g);
    const PairVector w = acted(pair.w, g);
    const auto nv = weight_polytope(v);
    const auto nw = weight_polytope(w);
    auto lambda = destabilizing_direction(nw, nv);
    if (!lambda) return;
    Witness wit{g, *lambda, ops_weight(v, *lambda), ops_weight(w, *lambda), trial};
    found[trial] = std::move(wit);
    std::size_t cur = first_failure.load();
    while (trial < cur && !first_failure.compare_exchange_weak(cur, trial)) {
    }
  });

  StabilityVerdict verdict;
  for (std::size_t t = 0; t < total; ++t) {
    if (!found[t]) continue;
    verdict.status = StabilityStatus::destabilized;
    verdict.witness = std::move(found[t]);
    verdict.trials = t + 1;
    verdict.verification_hash = witness_hash(*verdict.witness);
    if (!verify_witness(pair, *verdict.witness)) {
      throw std::logic_error("semistable_probe: extracted witness failed re-verification");
    }
    return verdict;
  }
  verdict.trials = total;
  return verdict;
}

bool verify_witness(const PairSpec& pair, const Witness& witness) {
  auto weight = [&](const PairVector& p) {
    Rational total = 0;
    if (p.power > 0) {
      const auto moved = act(witness.g, p.sparse_base());
      std::optional<long> best;
      for (const auto& [e, c] : moved.terms()) {
        const auto ch = column_degrees(e, moved.shape());
        long val = 0;
        for (std::size_t i = 0; i < ch.raw.size(); ++i) val += ch.raw[i] * witness.lambda.exponents()[i];
        if (!best || val < *best) best = val;
      }
      total += Rational(*best) * p.power;
    }
    if (p.identity_power > 0) {
      const long lo = *std::min_element(witness.lambda.exponents().begin(), witness.lambda.exponents().end());
      total += Rational(lo) * p.identity_power;
    }
    return total;
  };
  const Rational wv = weight(pair.v);
  const Rational ww = weight(pair.w);
  return ww > wv && wv == witness.weight_v && ww == witness.weight_w;
}

int module_degree(const SparsePolynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("module_degree: zero polynomial");
  const int n = p.shape().cols;
  const int d = p.degree();
  // Every pure power x_{0j}^D lies in C_D[M], so the module polytope is D Q_N.
  std::vector<LatticePoint> pts;
  for (int j = 0; j < n; ++j) {
    TorusCharacter c{std::vector<int>(static_cast<std::size_t>(n), 0)};
    c.raw[static_cast<std::size_t>(j)] = d;
    pts.push_back(c.projected());
  }
  const auto module_poly = convex_hull(pts);
  const auto qn = simplex_qn(n);
  int from_polytope = 1;
  while (!contains(dilate(qn, Rational(from_polytope)), module_poly)) ++from_polytope;
  const int closed_form = std::max(d, 1);
  if (from_polytope != closed_form) {
    throw std::logic_error("module_degree: polytope computation disagrees with closed form");
  }
  return closed_form;
}

int module_degree(const PairVector& p) {
  int deg = p.identity_power;
  if (p.power > 0) {
    const int base_deg = p.has_sparse_base() ? module_degree(p.sparse_base()) : std::max(degree_of(p.base), 1);
    deg += p.power * base_deg;
  }
  return std::max(deg, 1);
}

Rational vector_degree_bound(const SparsePolynomial& p) {
  // k Q_N = {x : sum x = 0, x_i >= -k/(N+1)}, so k >= -(N+1) min_i x_i.
  const long n = p.shape().cols;
  Rational worst = 0;
  for (const auto& c : support(p)) {
    for (const auto& x : c.projected()) {
      const Rational need = -x * n;
      if (need > worst) worst = need;
    }
  }
  return worst;
}

PairSpec twisted_pair(const PairSpec& pair, int q, int m, StableVariant variant) {
  if (q < 1) throw std::invalid_argument("stable_search: q must be >= 1");
  if (m < 1) throw std::invalid_argument("stable_search: m must be >= 1");
  const int v_exp = variant == StableVariant::pair ? m : m - 1;
  const int w_exp = variant == StableVariant::pair ? m + 1 : m;
  PairVector v(pair.v.base, pair.v.power * v_exp, pair.v.identity_power * v_exp + q);
  PairVector w(pair.w.base, pair.w.power * w_exp, pair.w.identity_power * w_exp);
  return PairSpec(std::move(v), std::move(w));
}

bool stable_at(const PairSpec& pair, int q, int m, StableVariant variant) {
  return semistable_diagonal(twisted_pair(pair, q, m, variant));
}

nlohmann::json StableSearchResult::to_json() const {
  nlohmann::json j{{"q", q},
                   {"m_max", m_max},
                   {"variant", variant == StableVariant::pair ? "pair" : "variety"},
                   {"m", m ? nlohmann::json(*m) : nlohmann::json(nullptr)},
                   {"status", m ? "stable-with-exponent" : "no-exponent-found"}};
  j["cross_check"] = cross_check ? cross_check->to_json() : nlohmann::json(nullptr);
  return j;
}

StableSearchResult stable_search(const PairSpec& pair, int q, int m_max, StableVariant variant,
                                 const ProbeOptions& cross_check) {
  if (q < 1) throw std::invalid_argument("stable_search: q must be >= 1");
  if (m_max < 1) throw std::invalid_argument("stable_search: m_max must be >= 1");
  StableSearchResult result;
  result.q = q;
  result.m_max = m_max;
  result.variant = variant;

  // Polytopes are reused across the sweep: each side is a dilate plus a fixed summand.
  const auto nv = pair.v.power > 0 ? std::optional(weight_polytope(pair.v)) : std::nullopt;
  const auto nw = weight_polytope(pair.w);
  const auto qq = dilate(simplex_qn(pair.ambient()), Rational(q));
  for (int m = 1; m <= m_max; ++m) {
    const int v_exp = variant == StableVariant::pair ? m : m - 1;
    const int w_exp = variant == StableVariant::pair ? m + 1 : m;
    LatticePolytope lhs = qq;
    if (nv && v_exp > 0) lhs = minkowski_sum(qq, dilate(*nv, Rational(v_exp)));
    if (!nv && pair.v.identity_power > 0 && v_exp > 0) {
      lhs = minkowski_sum(qq, dilate(simplex_qn(pair.ambient()), Rational(pair.v.identity_power * v_exp)));
    }
    if (contains(dilate(nw, Rational(w_exp)), lhs)) {
      result.m = m;
      break;
    }
  }
  if (result.m && cross_check.trials > 0) {
    result.cross_check = semistable_probe(twisted_pair(pair, q, *result.m, variant), cross_check);
  }
  return result;
}

}  // namespace stabpair
