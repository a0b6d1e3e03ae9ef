#include "stabpair/igusa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stabpair/energy.hpp"
#include "stabpair/special.hpp"

namespace stabpair {

DetConvention parse_convention(const std::string& tag) {
  if (tag == "standard") return DetConvention::standard;
  if (tag == "paper") return DetConvention::paper;
  throw std::invalid_argument("unknown determinant convention '" + tag + "' (expected standard or paper)");
}

std::string to_string(DetConvention c) { return c == DetConvention::standard ? "standard" : "paper"; }

std::string to_string(HeightMethod m) {
  switch (m) {
    case HeightMethod::closed_form:
      return "closed-form";
    case HeightMethod::monte_carlo:
      return "monte-carlo";
    case HeightMethod::mixed:
      return "mixed";
  }
  return "unknown";
}

namespace {

int ambient_dim(const Polynomial& p) { return shape_of(p).size(); }

double log_gamma_ratio(int big_d, int d, double s) { return log_gamma(big_d) - log_gamma(big_d + d * s); }

}  // namespace

MomentEstimate mc_moment(const Polynomial& p, double s, const MonteCarloOptions& options) {
  if (!(s >= 0)) throw std::invalid_argument("mc_moment: s must be >= 0");
  MomentEstimate m;
  if (s == 0) {
    m.mean = 1;
    m.exact = true;
    return m;
  }
  const auto g = gaussian_moments(p, s, options);
  m.mean = g.mean_power;
  m.std_error = g.stderr_power;
  m.samples = g.samples;
  m.resampled_zeros = g.resampled_zeros;
  m.tail_fraction = g.tail_fraction;
  m.tail_warning = g.tail_warning;
  return m;
}

nlohmann::json ZetaEstimate::to_json() const {
  return {{"s", s},           {"value", value},   {"log_value", log_value}, {"stderr", std_error},
          {"samples", samples}, {"seed", seed}, {"exact", exact},         {"tail_warning", tail_warning}};
}

ZetaEstimate zeta(const Polynomial& p, double s, const MonteCarloOptions& options) {
  ZetaEstimate z;
  z.s = s;
  z.seed = options.seed;
  const auto m = mc_moment(p, s, options);
  if (m.exact) {
    z.exact = true;
    return z;
  }
  const double factor = std::exp(log_gamma_ratio(ambient_dim(p), degree_of(p), s));
  z.value = factor * m.mean;
  z.log_value = std::log(z.value);
  z.std_error = factor * m.std_error;
  z.samples = m.samples;
  z.tail_warning = m.tail_warning;
  return z;
}

double log_det_moment(int n, double s, DetConvention convention) {
  if (n < 1) throw std::invalid_argument("det moment: n must be >= 1");
  if (!(s >= 0)) throw std::invalid_argument("det moment: s must be >= 0");
  double acc = 0;
  for (int k = 1; k <= n; ++k) {
    acc += convention == DetConvention::standard ? log_gamma(s + k) - log_gamma(k) : log_gamma(2 * s + k) - log_gamma(k);
  }
  if (convention == DetConvention::paper) acc -= n * s * std::log(2 * std::numbers::pi);
  return acc;
}

double zeta_det_closed(int n, double s, DetConvention convention) { return std::exp(log_det_moment(n, s, convention)); }

double det_moment_log_derivative(int n, DetConvention convention) {
  if (n < 1) throw std::invalid_argument("det moment: n must be >= 1");
  double acc = 0;
  for (int k = 1; k <= n; ++k) acc += digamma(k);
  if (convention == DetConvention::paper) acc = 2 * acc - n * std::log(2 * std::numbers::pi);
  return acc;
}

double log_zeta_minor(int rows, int cols, double s, DetConvention convention) {
  if (rows < 1 || cols < rows) throw std::invalid_argument("maximal minor needs 1 <= rows <= cols");
  return log_gamma_ratio(rows * cols, rows, s) + log_det_moment(rows, s, convention);
}

double zeta_prime_minor(int rows, int cols, DetConvention convention) {
  if (rows < 1 || cols < rows) throw std::invalid_argument("maximal minor needs 1 <= rows <= cols");
  return -rows * digamma(rows * cols) + det_moment_log_derivative(rows, convention);
}

PrimeEstimate zeta_prime_zero(const Polynomial& p, const MonteCarloOptions& options) {
  PrimeEstimate r;
  const int d = degree_of(p);
  if (d == 0) {
    const auto* sp = std::get_if<SparsePolynomial>(&p);
    const Complex c = sp ? sp->coefficient(Exponent(static_cast<std::size_t>(sp->shape().size()), 0))
                         : evaluate(p, ComplexMatrix::Zero(shape_of(p).rows, shape_of(p).cols));
    if (c == Complex(0.0)) throw std::invalid_argument("zeta_prime_zero: zero polynomial");
    r.value = std::log(std::norm(c));
    r.exact = true;
    return r;
  }
  const auto g = gaussian_moments(p, 1.0, options);
  r.value = g.mean_log - d * digamma(ambient_dim(p));
  r.std_error = g.stderr_log;
  r.samples = g.samples;
  r.resampled_zeros = g.resampled_zeros;
  return r;
}

nlohmann::json HeightReport::to_json() const {
  return {{"h", h},
          {"log_Z1", log_Z1},
          {"Zprime0", Zprime0},
          {"stderr", std_error},
          {"ci_halfwidth", ci_halfwidth},
          {"method", to_string(method)},
          {"samples", samples}};
}

std::optional<Complex> scaled_maximal_minor(const SparsePolynomial& p) {
  const int n = p.shape().rows;
  const int m = p.shape().cols;
  if (p.degree() != n || n > m || n > 8) return std::nullopt;
  std::size_t factorial = 1;
  for (int k = 2; k <= n; ++k) factorial *= static_cast<std::size_t>(k);
  if (p.size() != factorial) return std::nullopt;
  // Columns used by the first term fix the minor.
  std::vector<int> cols;
  {
    const auto ch = column_degrees(p.terms().begin()->first, p.shape());
    for (int j = 0; j < m; ++j) {
      if (ch.raw[static_cast<std::size_t>(j)] == 1) cols.push_back(j);
      else if (ch.raw[static_cast<std::size_t>(j)] != 0) return std::nullopt;
    }
  }
  if (static_cast<int>(cols.size()) != n) return std::nullopt;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::optional<Complex> scale;
  do {
    Exponent e(static_cast<std::size_t>(n * m), 0);
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i * m + cols[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])])] = 1;
    int inversions = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) inversions += perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)];
    }
    const Complex c = p.coefficient(e) * (inversions % 2 ? -1.0 : 1.0);
    if (c == Complex(0.0)) return std::nullopt;
    if (!scale) scale = c;
    else if (std::abs(c - *scale) > 1e-12 * std::abs(*scale)) return std::nullopt;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return scale;
}

namespace {

HeightReport assemble(double log_Z1, double zprime, double std_error, HeightMethod method, std::size_t samples) {
  HeightReport r;
  r.log_Z1 = log_Z1;
  r.Zprime0 = zprime;
  r.h = -log_Z1 + zprime;
  r.std_error = std_error;
  r.ci_halfwidth = 3 * std_error;
  r.method = method;
  r.samples = samples;
  return r;
}

}  // namespace

HeightReport height(const Polynomial& p, const HeightOptions& options) {
  const int big_d = ambient_dim(p);
  const int d = degree_of(p);
  const double gamma_term = log_gamma_ratio(big_d, d, 1.0);
  const auto* sp = std::get_if<SparsePolynomial>(&p);
  if (sp && sp->is_zero()) throw std::invalid_argument("height: zero polynomial");

  if (sp && !options.force_monte_carlo) {
    if (d == 0) {
      const double l = std::log(std::norm(sp->terms().begin()->second));
      return assemble(l, l, 0, HeightMethod::closed_form, 0);
    }
    if (sp->size() == 1) {
      const auto& [e, c] = *sp->terms().begin();
      const double log_c = std::log(std::norm(c));
      const double log_z1 = gamma_term + log_c + log_factorial_product(e);
      const double zp = log_c - euler_gamma * d - d * digamma(big_d);
      return assemble(log_z1, zp, 0, HeightMethod::closed_form, 0);
    }
    if (const auto c = scaled_maximal_minor(*sp)) {
      const double log_c = std::log(std::norm(*c));
      const double log_z1 = gamma_term + log_c + log_det_moment(d, 1.0, DetConvention::standard);
      const double zp = log_c + det_moment_log_derivative(d, DetConvention::standard) - d * digamma(big_d);
      return assemble(log_z1, zp, 0, HeightMethod::closed_form, 0);
    }
    const double log_z1 = gamma_term + log_gaussian_norm_sq(*sp);
    const auto zp = zeta_prime_zero(p, options.mc);
    return assemble(log_z1, zp.value, zp.std_error, HeightMethod::mixed, zp.samples);
  }

  if (d == 0) return assemble(0, 0, 0, HeightMethod::closed_form, 0);
  const auto g = gaussian_moments(p, 1.0, options.mc);
  const double log_z1 = gamma_term + std::log(g.mean_power);
  const double zp = g.mean_log - d * digamma(big_d);
  // Delta method for -log(mean_x) + mean_y.
  const double n = static_cast<double>(g.samples);
  const double var = g.stderr_power * g.stderr_power / (g.mean_power * g.mean_power) + g.stderr_log * g.stderr_log -
                     2 * g.covariance / n / g.mean_power;
  return assemble(log_z1, zp, std::sqrt(std::max(var, 0.0)), HeightMethod::monte_carlo, g.samples);
}

HeightReport height(const FormalPower& p, const HeightOptions& options) {
  HeightReport r = height(p.base, options);
  const double k = p.exponent;
  r.h *= k;
  r.log_Z1 *= k;
  r.Zprime0 *= k;
  r.std_error *= k;
  r.ci_halfwidth *= k;
  return r;
}

double height_projective_form(double mean_log, double mean_abs_sq, int ambient, int degree) {
  return mean_log - degree * digamma(ambient) - (log_gamma(ambient) + std::log(mean_abs_sq) - log_gamma(ambient + degree));
}

nlohmann::json BoundsAudit::to_json() const {
  return {{"h", h},
          {"ci_halfwidth", ci_halfwidth},
          {"lower_stated", lower_stated},
          {"lower_alternate", lower_alternate},
          {"upper", upper},
          {"within_stated", within_stated},
          {"within_alternate", within_alternate},
          {"upper_ok", upper_ok}};
}

BoundsAudit height_bounds_audit(const Polynomial& p, const HeightOptions& options) {
  const auto& shape = shape_of(p);
  if (shape.rows != 1) throw std::invalid_argument("height_bounds_audit: polynomial must live on C^{N+1} (one row)");
  const int big_n = shape.cols - 1;
  const int d = degree_of(p);
  const auto rep = height(p, options);
  BoundsAudit a;
  a.h = rep.h;
  a.ci_halfwidth = rep.ci_halfwidth;
  a.lower_stated = big_n >= 1 ? -d * harmonic(static_cast<unsigned>(big_n - 1)) : 0.0;
  a.lower_alternate = -d * harmonic(static_cast<unsigned>(big_n));
  a.upper = 0;
  const double tol = rep.ci_halfwidth + 1e-12;
  a.upper_ok = rep.h <= a.upper + tol;
  a.within_stated = a.upper_ok && rep.h >= a.lower_stated - tol;
  a.within_alternate = a.upper_ok && rep.h >= a.lower_alternate - tol;
  return a;
}

nlohmann::json DegenerationLimit::to_json() const {
  return {{"n", n},
          {"N", N},
          {"d", d},
          {"deg_R", deg_R},
          {"deg_delta", deg_delta},
          {"convention", to_string(convention)},
          {"log_Z_R", log_Z_R},
          {"Zprime_R", Zprime_R},
          {"log_Z_delta", log_Z_delta},
          {"Zprime_delta", Zprime_delta},
          {"hF_limit", hF},
          {"hDelta_limit", hDelta},
          {"delta_limit", delta},
          {"hF_leading", hF_leading},
          {"hF_remainder", hF_remainder()},
          {"hDelta_leading", hDelta_leading},
          {"hDelta_remainder", hDelta_remainder()}};
}

DegenerationLimit degeneration_limit_heights(int n, int N, int d, int deg_R, int deg_delta, DetConvention convention) {
  if (n < 1 || N < 1 || d < 1 || deg_R < 1 || deg_delta < 1) {
    throw std::invalid_argument("degeneration_limit_heights: all arguments must be positive");
  }
  if (n + 1 > N + 1) throw std::invalid_argument("degeneration_limit_heights: need n < N");
  DegenerationLimit r;
  r.n = n;
  r.N = N;
  r.d = d;
  r.deg_R = deg_R;
  r.deg_delta = deg_delta;
  r.convention = convention;
  r.log_Z_R = log_zeta_minor(n + 1, N + 1, d, convention);
  r.Zprime_R = zeta_prime_minor(n + 1, N + 1, convention);
  const double s_delta = static_cast<double>(deg_delta) / n;
  r.log_Z_delta = log_zeta_minor(n, N + 1, s_delta, convention);
  r.Zprime_delta = zeta_prime_minor(n, N + 1, convention);
  r.hF = static_cast<double>(deg_R) / (n + 1) * r.Zprime_R - r.log_Z_R;
  r.hDelta = s_delta * r.Zprime_delta - r.log_Z_delta;
  r.delta = std::abs(deg_delta * r.hF - deg_R * r.hDelta);
  r.hF_leading = -2.0 * deg_R * std::log(static_cast<double>(d));
  r.hDelta_leading = -2.0 * deg_delta * std::log(static_cast<double>(d));
  return r;
}

}  // namespace stabpair
