#include "stabpair/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "stabpair/parallel.hpp"
#include "stabpair/special.hpp"

namespace stabpair {

namespace {

double log_factorial(const Exponent& e) {
  double s = 0;
  for (auto a : e) {
    if (a > 1) s += log_gamma(a + 1.0);
  }
  return s;
}

double log_sum_exp(const std::vector<double>& xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double s = 0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

double log_add_exp(double a, double b) {
  const double m = std::max(a, b);
  if (!std::isfinite(m)) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

bool is_identity(const GroupElement& g) { return g.matrix().isIdentity(0.0); }

std::vector<double> ray_log_moduli(const OnePSG& lambda, double x) {
  std::vector<double> lt;
  for (long e : lambda.exponents()) lt.push_back(-static_cast<double>(e) * x);
  return lt;
}

std::optional<GroupElement> ray_element(const OnePSG& lambda, double x) {
  const double t = std::exp(-x / 2);
  for (long e : lambda.exponents()) {
    const double v = std::pow(t, static_cast<double>(e));
    if (!std::isfinite(v) || v == 0.0 || v > 1e150 || v < 1e-150) return std::nullopt;
  }
  return lambda.at(t);
}

}  // namespace

double gaussian_norm_sq(const SparsePolynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("gaussian_norm_sq: zero polynomial");
  double s = 0;
  for (const auto& [e, c] : p.terms()) s += std::norm(c) * std::exp(log_factorial(e));
  return s;
}

double log_gaussian_norm_sq(const SparsePolynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("gaussian_norm_sq: zero polynomial");
  std::vector<double> logs;
  logs.reserve(p.size());
  for (const auto& [e, c] : p.terms()) logs.push_back(2 * std::log(std::abs(c)) + log_factorial(e));
  return log_sum_exp(logs);
}

Complex gaussian_inner(const SparsePolynomial& a, const SparsePolynomial& b) {
  if (!(a.shape() == b.shape())) throw std::invalid_argument("gaussian_inner: shape mismatch");
  if (a.degree() != b.degree()) return 0.0;
  Complex s = 0;
  for (const auto& [e, c] : a.terms()) {
    auto it = b.terms().find(e);
    if (it != b.terms().end()) s += c * std::conj(it->second) * std::exp(log_factorial(e));
  }
  return s;
}

NormEstimate gaussian_norm_sq(const Polynomial& p, const MonteCarloOptions& options) {
  if (const auto* sp = std::get_if<SparsePolynomial>(&p)) return {gaussian_norm_sq(*sp), 0.0, true};
  const auto m = gaussian_moments(p, 1.0, options);
  return {m.mean_power, m.stderr_power, false};
}

double log_norm_sq(const PairVector& v, const GroupElement& sigma, const MonteCarloOptions& options) {
  if (sigma.size() != v.ambient()) throw std::invalid_argument("log_norm_sq: dimension mismatch");
  double total = 0;
  if (v.power > 0) {
    double base_log;
    if (const auto* sp = std::get_if<SparsePolynomial>(&v.base)) {
      base_log = log_gaussian_norm_sq(is_identity(sigma) ? *sp : act(sigma, *sp));
    } else {
      const auto& bb = std::get<BlackBoxPolynomial>(v.base);
      const Polynomial moved = is_identity(sigma) ? Polynomial(bb) : Polynomial(act(sigma, bb));
      base_log = std::log(gaussian_moments(moved, 1.0, options).mean_power);
    }
    total += v.power * base_log;
  }
  if (v.identity_power > 0) total += v.identity_power * std::log(sigma.frobenius_sq());
  return total;
}

double log_norm_sq_diagonal(const PairVector& v, const std::vector<double>& lt) {
  if (static_cast<int>(lt.size()) != v.ambient()) throw std::invalid_argument("log_norm_sq_diagonal: dimension mismatch");
  double total = 0;
  if (v.power > 0) {
    const auto& p = v.sparse_base();
    std::vector<double> logs;
    logs.reserve(p.size());
    for (const auto& [e, c] : p.terms()) {
      const auto ch = column_degrees(e, p.shape());
      double l = 2 * std::log(std::abs(c)) + log_factorial(e);
      for (std::size_t j = 0; j < lt.size(); ++j) {
        if (ch.raw[j] != 0) l += ch.raw[j] * lt[j];
      }
      logs.push_back(l);
    }
    total += v.power * log_sum_exp(logs);
  }
  if (v.identity_power > 0) total += v.identity_power * log_sum_exp(lt);
  return total;
}

nlohmann::json EnergyReport::to_json() const {
  nlohmann::json j{{"nu", nu},
                   {"j", this->j},
                   {"w_component", w_component},
                   {"v_component", v_component},
                   {"trace_term", trace_term},
                   {"degree", degree}};
  j["sigma"] = sigma ? sigma->to_json() : nlohmann::json(nullptr);
  return j;
}

EnergyReport nu_pair(const PairSpec& pair, const GroupElement& sigma, const EnergyOptions& options) {
  const int n = pair.ambient();
  const auto id = GroupElement::identity(n);
  EnergyReport r;
  r.sigma = sigma;
  r.w_component = log_norm_sq(pair.w, sigma, options.mc) - log_norm_sq(pair.w, id, options.mc);
  r.v_component = log_norm_sq(pair.v, sigma, options.mc) - log_norm_sq(pair.v, id, options.mc);
  r.nu = r.w_component - r.v_component;
  r.degree = options.degree ? *options.degree : module_degree(pair.v);
  r.trace_term = std::log(sigma.frobenius_sq() / n);
  r.j = r.degree * r.trace_term - r.v_component;
  return r;
}

double j_aubin(const PairVector& v, const GroupElement& sigma, std::optional<int> degree,
               const MonteCarloOptions& options) {
  const int n = v.ambient();
  const int deg = degree ? *degree : module_degree(v);
  const double v_comp = log_norm_sq(v, sigma, options) - log_norm_sq(v, GroupElement::identity(n), options);
  return deg * std::log(sigma.frobenius_sq() / n) - v_comp;
}

EnergyReport nu_along_ray(const PairSpec& pair, const OnePSG& lambda, double x, std::optional<int> degree) {
  const int n = pair.ambient();
  if (lambda.size() != n) throw std::invalid_argument("nu_along_ray: dimension mismatch");
  const std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
  const auto lt = ray_log_moduli(lambda, x);
  EnergyReport r;
  r.sigma = ray_element(lambda, x);
  r.w_component = log_norm_sq_diagonal(pair.w, lt) - log_norm_sq_diagonal(pair.w, zero);
  r.v_component = log_norm_sq_diagonal(pair.v, lt) - log_norm_sq_diagonal(pair.v, zero);
  r.nu = r.w_component - r.v_component;
  r.degree = degree ? *degree : module_degree(pair.v);
  r.trace_term = log_sum_exp(lt) - std::log(static_cast<double>(n));
  r.j = r.degree * r.trace_term - r.v_component;
  return r;
}

RaySlope fit_ray_slope(const PairSpec& pair, const OnePSG& lambda, double first_decade, double last_decade,
                       int points) {
  if (points < 2 || !(last_decade > first_decade)) throw std::invalid_argument("fit_ray_slope: bad range");
  std::vector<double> xs, ys;
  for (int i = 0; i < points; ++i) {
    const double k = first_decade + (last_decade - first_decade) * i / (points - 1);
    const double x = 2 * k * std::log(10.0);
    xs.push_back(x);
    ys.push_back(nu_along_ray(pair, lambda, x, 1).nu);
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / points;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / points;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < points; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  RaySlope r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  for (int i = 0; i < points; ++i) {
    r.max_residual = std::max(r.max_residual, std::abs(ys[i] - r.intercept - r.slope * xs[i]));
  }
  return r;
}

OnePSG random_one_psg(int ambient, Rng& rng, int bound) {
  if (ambient < 2) throw std::invalid_argument("random_one_psg: need N + 1 >= 2");
  std::uniform_int_distribution<int> dist(-bound, bound);
  for (;;) {
    std::vector<long> e(static_cast<std::size_t>(ambient));
    for (auto& x : e) x = dist(rng);
    const long sum = std::accumulate(e.begin(), e.end(), 0L);
    long g = 0;
    for (auto& x : e) {
      x = ambient * x - sum;
      g = std::gcd(g, std::abs(x));
    }
    if (g == 0) continue;
    for (auto& x : e) x /= g;
    return OnePSG(std::move(e));
  }
}

nlohmann::json PropernessEstimate::to_json() const {
  nlohmann::json j{{"epsilon", epsilon}, {"b", b}, {"samples", samples}, {"min_margin", min_margin}};
  j["violated_at"] = violated_at ? violated_at->to_json() : nlohmann::json(nullptr);
  if (violation_nu) j["violation_nu"] = *violation_nu;
  if (violation_j) j["violation_j"] = *violation_j;
  return j;
}

PropernessEstimate properness_probe(const PairSpec& pair, double epsilon, double b, const PropernessOptions& options) {
  if (!(epsilon > 0)) throw std::invalid_argument("properness_probe: epsilon must be positive");
  const int n = pair.ambient();
  const int degree = module_degree(pair.v);
  struct RayResult {
    std::size_t samples = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    std::optional<GroupElement> violated_at;
    double nu = 0, j = 0;
  };
  std::vector<RayResult> results(options.rays);
  parallel_for(options.rays, resolve_threads(options.threads), [&](std::size_t r) {
    Rng rng(derive_seed(options.seed, r));
    const OnePSG lambda = random_one_psg(n, rng);
    const bool conj = options.conjugate && (r % 2 == 1);
    std::optional<GroupElement> g, g_inv;
    if (conj) {
      g = GroupElement::random_integer_sl(n, rng);
      g_inv = g->inverse();
    }
    RayResult& out = results[r];
    for (int k = 0; k <= options.decades; ++k) {
      EnergyReport rep;
      std::optional<GroupElement> sigma;
      if (!conj) {
        rep = nu_along_ray(pair, lambda, 2 * k * std::log(10.0), degree);
        sigma = rep.sigma;
      } else {
        const auto [lo, hi] = std::minmax_element(lambda.exponents().begin(), lambda.exponents().end());
        const double t = std::pow(10.0, -static_cast<double>(k) / static_cast<double>(*hi - *lo));
        sigma = *g * lambda.at(t) * *g_inv;
        EnergyOptions eo;
        eo.degree = degree;
        rep = nu_pair(pair, *sigma, eo);
      }
      ++out.samples;
      const double margin = rep.nu - epsilon * rep.j - b;
      out.min_margin = std::min(out.min_margin, margin);
      if (margin < 0 && !out.violated_at && sigma) {
        out.violated_at = sigma;
        out.nu = rep.nu;
        out.j = rep.j;
      }
    }
  });
  PropernessEstimate est;
  est.epsilon = epsilon;
  est.b = b;
  est.min_margin = std::numeric_limits<double>::infinity();
  for (auto& r : results) {
    est.samples += r.samples;
    est.min_margin = std::min(est.min_margin, r.min_margin);
    if (r.violated_at && !est.violated_at) {
      est.violated_at = std::move(r.violated_at);
      est.violation_nu = r.nu;
      est.violation_j = r.j;
    }
  }
  return est;
}

EnergyScan energy_scan(const PairSpec& pair, std::size_t rays, int decades, std::uint64_t seed) {
  if (decades < 0) throw std::invalid_argument("energy_scan: decades must be >= 0");
  const int n = pair.ambient();
  const int degree = module_degree(pair.v);
  EnergyScan scan;
  for (std::size_t r = 0; r < rays; ++r) {
    Rng rng(derive_seed(seed, r));
    scan.rays.push_back(random_one_psg(n, rng));
    for (int k = 0; k <= 4 * decades; ++k) {
      const double x = 2 * (k / 4.0) * std::log(10.0);
      const auto rep = nu_along_ray(pair, scan.rays.back(), x, degree);
      scan.rows.push_back({r, std::pow(10.0, -k / 4.0), rep.nu, rep.j});
    }
  }
  return scan;
}

double fs_distance(const PairSpec& pair) {
  const auto id = GroupElement::identity(pair.ambient());
  return std::atan(std::exp(0.5 * (log_norm_sq(pair.w, id) - log_norm_sq(pair.v, id))));
}

nlohmann::json OrbitDistanceReport::to_json() const {
  return {{"distance", distance}, {"log_tan_sq", log_tan_sq}, {"evaluations", evaluations}, {"stabilized", stabilized}};
}

namespace {

// Upper triangular, positive real diagonal, determinant one.
GroupElement upper_from_params(int n, const double* p) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  double last = 0;
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i) = std::exp(p[i]);
    last -= p[i];
  }
  m(n - 1, n - 1) = std::exp(last);
  int k = n - 1;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = Complex(p[k], p[k + 1]);
      k += 2;
    }
  }
  return GroupElement(m);
}

int upper_param_count(int n) { return (n - 1) + n * (n - 1); }

struct SearchResult {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> params;
  std::size_t evaluations = 0;
  bool stabilized = false;
};

using Objective = std::function<double(const std::vector<double>&)>;

SearchResult minimize(const Objective& f, std::size_t dim, const OrbitSearchOptions& options,
                      const std::function<std::vector<double>(Rng&)>& draw) {
  // Initial random sampling.
  std::vector<std::pair<double, std::vector<double>>> pool;
  {
    Rng rng(derive_seed(options.seed, 0x5eed));
    for (std::size_t i = 0; i < options.initial_samples; ++i) {
      auto x = draw(rng);
      const double v = f(x);
      pool.emplace_back(std::isfinite(v) ? v : std::numeric_limits<double>::infinity(), std::move(x));
    }
  }
  std::stable_sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  const std::size_t starts = std::min<std::size_t>(static_cast<std::size_t>(std::max(options.restarts, 1)), pool.size());

  std::vector<SearchResult> runs(starts);
  parallel_for(starts, resolve_threads(options.threads), [&](std::size_t r) {
    SearchResult& out = runs[r];
    std::vector<double> x = pool[r].second;
    double fx = f(x);
    double step = 0.5;
    for (int it = 0; it < options.iterations && step > 1e-9; ++it) {
      bool improved = false;
      for (std::size_t i = 0; i < dim; ++i) {
        for (double dir : {1.0, -1.0}) {
          auto y = x;
          y[i] += dir * step;
          const double fy = f(y);
          ++out.evaluations;
          if (fy < fx) {
            x = std::move(y);
            fx = fy;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    out.value = fx;
    out.params = x;
    out.stabilized = step <= 1e-9;
  });
  SearchResult best;
  best.evaluations = options.initial_samples;
  for (auto& r : runs) {
    best.evaluations += r.evaluations;
    if (r.value < best.value) {
      best.value = r.value;
      best.params = r.params;
      best.stabilized = r.stabilized;
    }
  }
  return best;
}

void require_small_sparse(const PairSpec& pair) {
  if (pair.ambient() < 2 || pair.ambient() > 4) throw std::invalid_argument("orbit search supports 2 <= N + 1 <= 4");
  if ((pair.v.power > 0 && !pair.v.has_sparse_base()) || (pair.w.power > 0 && !pair.w.has_sparse_base())) {
    throw std::invalid_argument("orbit search needs sparse polynomials");
  }
}

// log |<s1 . v, s2 . v>|^2 for I^q (x) base^k.
double log_abs_sq_inner(const PairVector& v, const GroupElement& s1, const GroupElement& s2) {
  double total = 0;
  if (v.power > 0) {
    const auto& p = v.sparse_base();
    total += v.power * std::log(std::norm(gaussian_inner(act(s1, p), act(s2, p))));
  }
  if (v.identity_power > 0) {
    total += v.identity_power * std::log(std::norm((s1.matrix() * s2.matrix().adjoint()).trace()));
  }
  return total;
}

}  // namespace

OrbitDistanceReport orbit_distance(const PairSpec& pair, const OrbitSearchOptions& options) {
  require_small_sparse(pair);
  const int n = pair.ambient();
  const std::size_t k = static_cast<std::size_t>(upper_param_count(n));
  const auto id = GroupElement::identity(n);
  const double lv0 = log_norm_sq(pair.v, id);
  const double lw0 = log_norm_sq(pair.w, id);

  // log tan^2 of the FS angle between (s1 v, s1 w) and (s2 v, 0), unit-norm v and w.
  auto objective = [&](const std::vector<double>& p) {
    const auto s1 = upper_from_params(n, p.data());
    const auto s2 = upper_from_params(n, p.data() + k);
    const double l1v = log_norm_sq(pair.v, s1) - lv0;
    const double l1w = log_norm_sq(pair.w, s1) - lw0;
    const double l2v = log_norm_sq(pair.v, s2) - lv0;
    const double li = log_abs_sq_inner(pair.v, s1, s2) - lv0;
    const double log_cos_sq = std::min(0.0, li - log_add_exp(l1v, l1w) - l2v);
    const double sin_sq = std::max(-std::expm1(log_cos_sq), 1e-300);
    return std::log(sin_sq) - log_cos_sq;
  };
  auto draw = [&](Rng& rng) {
    std::uniform_real_distribution<double> u(-options.box, options.box);
    std::normal_distribution<double> jitter(0.0, 0.3);
    std::vector<double> p(2 * k);
    for (std::size_t i = 0; i < k; ++i) {
      p[i] = u(rng);
      p[k + i] = p[i] + jitter(rng);
    }
    return p;
  };
  const auto best = minimize(objective, 2 * k, options, draw);
  OrbitDistanceReport rep;
  rep.log_tan_sq = best.value;
  rep.distance = std::atan(std::exp(0.5 * best.value));
  rep.evaluations = best.evaluations;
  rep.stabilized = best.stabilized;
  return rep;
}

InfNuReport sample_inf_nu(const PairSpec& pair, const OrbitSearchOptions& options) {
  require_small_sparse(pair);
  const int n = pair.ambient();
  const std::size_t k = static_cast<std::size_t>(upper_param_count(n));
  EnergyOptions eo;
  eo.degree = 1;
  auto objective = [&](const std::vector<double>& p) { return nu_pair(pair, upper_from_params(n, p.data()), eo).nu; };
  auto draw = [&](Rng& rng) {
    std::uniform_real_distribution<double> u(-options.box, options.box);
    std::vector<double> p(k);
    for (auto& x : p) x = u(rng);
    return p;
  };
  OrbitSearchOptions opts = options;
  opts.seed = derive_seed(options.seed, 0x1f);
  const auto best = minimize(objective, k, opts, draw);
  InfNuReport rep;
  rep.inf_nu = best.value;
  rep.argmin = upper_from_params(n, best.params.data());
  rep.evaluations = best.evaluations;
  rep.stabilized = best.stabilized;
  return rep;
}

}  // namespace stabpair
