#pragma once

// Gaussian local zeta functions, heights of polynomials and the closed forms
// for determinants and their degenerations.
//
//   Z(P; s) = Gamma(D) / Gamma(D + d s) * E|P(Z)|^{2s},   D = rows * cols, d = deg P
//   Z'(P; 0) = E log|P(Z)|^2 - d psi(D)
//   h(P)     = -log Z(P; 1) + Z'(P; 0)

#include <json.hpp>

#include <optional>
#include <string>

#include "stabpair/montecarlo.hpp"
#include "stabpair/polyrep.hpp"

namespace stabpair {

/// Moment convention for E|det_n|^{2s}.
///   standard: prod_{k=1}^n Gamma(s + k) / Gamma(k)
///   paper:    (2 pi)^{-n s} prod_{k=1}^n Gamma(2 s + k) / Gamma(k)
enum class DetConvention { standard, paper };

DetConvention parse_convention(const std::string& tag);
std::string to_string(DetConvention c);

struct MomentEstimate {
  double mean = 0;
  double std_error = 0;
  std::size_t samples = 0;
  std::size_t resampled_zeros = 0;
  double tail_fraction = 0;
  bool tail_warning = false;
  bool exact = false;
};

/// E|P(Z)|^{2s}; s == 0 returns exactly 1 without sampling.
MomentEstimate mc_moment(const Polynomial& p, double s, const MonteCarloOptions& options);

struct ZetaEstimate {
  double s = 0;
  double value = 1;
  double log_value = 0;
  double std_error = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  bool exact = false;
  bool tail_warning = false;

  nlohmann::json to_json() const;
};

ZetaEstimate zeta(const Polynomial& p, double s, const MonteCarloOptions& options);

/// log E|det_n|^{2s} in the chosen convention.
double log_det_moment(int n, double s, DetConvention convention);
double zeta_det_closed(int n, double s, DetConvention convention);
/// d/ds log E|det_n|^{2s} at s = 0.
double det_moment_log_derivative(int n, DetConvention convention);

/// Normalized zeta of a maximal minor det_rows on M_{rows x cols}.
double log_zeta_minor(int rows, int cols, double s, DetConvention convention);
double zeta_prime_minor(int rows, int cols, DetConvention convention);

struct PrimeEstimate {
  double value = 0;
  double std_error = 0;
  std::size_t samples = 0;
  std::size_t resampled_zeros = 0;
  bool exact = false;
};

PrimeEstimate zeta_prime_zero(const Polynomial& p, const MonteCarloOptions& options);

enum class HeightMethod { closed_form, monte_carlo, mixed };
std::string to_string(HeightMethod m);

struct HeightReport {
  double h = 0;
  double log_Z1 = 0;
  double Zprime0 = 0;
  double std_error = 0;
  double ci_halfwidth = 0;  // 3 standard errors
  HeightMethod method = HeightMethod::closed_form;
  std::size_t samples = 0;

  nlohmann::json to_json() const;
};

struct HeightOptions {
  MonteCarloOptions mc;
  /// Estimate both E|P|^2 and E log|P|^2 from the same samples even when a
  /// closed form is available.
  bool force_monte_carlo = false;
};

/// Coefficient c when p == c * (a maximal minor of its matrix space).
std::optional<Complex> scaled_maximal_minor(const SparsePolynomial& p);

/// Closed form: monomials, scaled maximal minors, constants. Otherwise mixed
/// (exact norm, sampled log term) for sparse and pure Monte Carlo for black-box.
HeightReport height(const Polynomial& p, const HeightOptions& options);
/// Tensor powers scale every term by the exponent.
HeightReport height(const FormalPower& p, const HeightOptions& options);

/// E log|P|^2 - d psi(D) - log(Gamma(D) E|P|^2 / Gamma(D + d)), the direct
/// projective-integral form of the height.
double height_projective_form(double mean_log, double mean_abs_sq, int ambient_dim, int degree);

struct BoundsAudit {
  double h = 0;
  double ci_halfwidth = 0;
  double lower_stated = 0;      // -d * H_{N-1}
  double lower_alternate = 0;   // -d * H_N
  double upper = 0;
  bool within_stated = false;
  bool within_alternate = false;
  bool upper_ok = false;

  nlohmann::json to_json() const;
};

/// P must live on a single row (a vector space C^{N+1}). Reports, never throws on a failed bound.
BoundsAudit height_bounds_audit(const Polynomial& p, const HeightOptions& options);

struct DegenerationLimit {
  int n = 0, N = 0, d = 0, deg_R = 0, deg_delta = 0;
  DetConvention convention = DetConvention::standard;
  double log_Z_R = 0;       // log Z(det_{n+1}; d)
  double Zprime_R = 0;      // Z'(det_{n+1}; 0)
  double log_Z_delta = 0;   // log Z(det_n; deg_delta / n)
  double Zprime_delta = 0;  // Z'(det_n; 0)
  double hF = 0;
  double hDelta = 0;
  double delta = 0;
  double hF_leading = 0;      // -2 deg_R log d
  double hDelta_leading = 0;  // -2 deg_delta log d

  double hF_remainder() const { return hF - hF_leading; }
  double hDelta_remainder() const { return hDelta - hDelta_leading; }
  nlohmann::json to_json() const;
};

DegenerationLimit degeneration_limit_heights(int n, int N, int d, int deg_R, int deg_delta,
                                             DetConvention convention = DetConvention::standard);

}  // namespace stabpair
