#pragma once

// Finite-dimensional Mabuchi and Aubin functionals of a pair under the
// Gaussian (Bombieri) norm ||P||^2 = sum |c_a|^2 prod a!, properness probing
// along one-parameter subgroups, and the orbit-distance comparison.
//
//   nu(sigma) = log ||sigma w||^2/||w||^2 - log ||sigma v||^2/||v||^2
//   J(sigma)  = deg * log(||sigma||^2 / (N+1)) - log ||sigma v||^2/||v||^2
//
// Along lambda(t) with |t| -> 0, nu grows like
// (w_lambda(v) - w_lambda(w)) * log(1/|t|^2); `RaySlope::slope` is measured
// against that variable.

#include <json.hpp>

#include <optional>
#include <vector>

#include "stabpair/montecarlo.hpp"
#include "stabpair/pairstab.hpp"

namespace stabpair {

double gaussian_norm_sq(const SparsePolynomial& p);
/// Log-sum-exp form, safe for coefficients beyond double range after squaring.
double log_gaussian_norm_sq(const SparsePolynomial& p);
/// <a, b> = sum a_k conj(b_k) prod k!.
Complex gaussian_inner(const SparsePolynomial& a, const SparsePolynomial& b);

struct NormEstimate {
  double value = 0;
  double std_error = 0;
  bool exact = true;
};

/// Exact for sparse polynomials, Monte Carlo for black-box ones.
NormEstimate gaussian_norm_sq(const Polynomial& p, const MonteCarloOptions& options);

/// log ||sigma . v||^2 for I^q (x) base^k: k log||sigma base||^2 + q log Tr(sigma sigma^*).
double log_norm_sq(const PairVector& v, const GroupElement& sigma, const MonteCarloOptions& options = {});

/// Diagonal fast path: sigma = diag(t) given by log|t_j|^2.
double log_norm_sq_diagonal(const PairVector& v, const std::vector<double>& log_abs_sq_t);

struct EnergyReport {
  std::optional<GroupElement> sigma;  // absent when t under/overflows
  double nu = 0;
  double j = 0;
  double w_component = 0;
  double v_component = 0;
  double trace_term = 0;  // log(||sigma||^2 / (N+1))
  int degree = 1;

  nlohmann::json to_json() const;
};

struct EnergyOptions {
  MonteCarloOptions mc{200'000, 0, 0, 64};
  std::optional<int> degree;  // defaults to module_degree(v)
};

EnergyReport nu_pair(const PairSpec& pair, const GroupElement& sigma, const EnergyOptions& options = {});

double j_aubin(const PairVector& v, const GroupElement& sigma, std::optional<int> degree = std::nullopt,
               const MonteCarloOptions& options = {});

/// Energy at lambda(t) for |t| = exp(-x/2), i.e. x = log(1/|t|^2), computed in log space.
EnergyReport nu_along_ray(const PairSpec& pair, const OnePSG& lambda, double x, std::optional<int> degree = std::nullopt);

struct RaySlope {
  double slope = 0;
  double intercept = 0;
  double max_residual = 0;
};

/// Least-squares slope of nu against x = log(1/|t|^2) at t = 10^{-k}, k in [first, last].
RaySlope fit_ray_slope(const PairSpec& pair, const OnePSG& lambda, double first_decade = 20,
                       double last_decade = 40, int points = 21);

struct PropernessOptions {
  std::size_t rays = 32;
  int decades = 8;
  std::uint64_t seed = 0;
  /// Odd-numbered rays are conjugated by a random unimodular integer matrix;
  /// those stop when the eigenvalue ratio of lambda(t) reaches 10^decades,
  /// since the conjugated matrix loses its determinant to rounding beyond that.
  bool conjugate = true;
  int threads = 0;
};

struct PropernessEstimate {
  double epsilon = 0;
  double b = 0;
  std::size_t samples = 0;
  std::optional<GroupElement> violated_at;
  std::optional<double> violation_nu;
  std::optional<double> violation_j;
  double min_margin = 0;  // min of nu - epsilon J - b over all samples

  nlohmann::json to_json() const;
};

PropernessEstimate properness_probe(const PairSpec& pair, double epsilon, double b, const PropernessOptions& options);

/// Random primitive 1-PS with entries drawn from [-bound, bound] before centering.
OnePSG random_one_psg(int ambient, Rng& rng, int bound = 3);

struct EnergyScanRow {
  std::size_t ray = 0;
  double t = 0;
  double nu = 0;
  double j = 0;
};

struct EnergyScan {
  std::vector<OnePSG> rays;
  std::vector<EnergyScanRow> rows;
};

/// Diagonal rays, four points per decade from t = 1 to t = 10^{-decades}.
EnergyScan energy_scan(const PairSpec& pair, std::size_t rays, int decades, std::uint64_t seed);

/// Fubini-Study distance between [(v, w)] and [(v, 0)] at the identity: arctan(||w|| / ||v||).
double fs_distance(const PairSpec& pair);

struct OrbitSearchOptions {
  int restarts = 24;
  int iterations = 400;
  std::size_t initial_samples = 2000;
  double box = 3.0;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct OrbitDistanceReport {
  double distance = 0;
  double log_tan_sq = 0;
  std::size_t evaluations = 0;
  bool stabilized = false;

  nlohmann::json to_json() const;
};

/// Estimate of the FS distance between the orbits of [(v, w)] and [(v, 0)],
/// with v and w first scaled to unit norm. Minimizes over (sigma1, sigma2)
/// upper triangular with positive diagonal; an estimate, never a certificate.
/// Needs sparse bases and N + 1 <= 4.
OrbitDistanceReport orbit_distance(const PairSpec& pair, const OrbitSearchOptions& options);

struct InfNuReport {
  double inf_nu = 0;
  GroupElement argmin = GroupElement::identity(1);
  std::size_t evaluations = 0;
  bool stabilized = false;
};

/// Sampled infimum of nu over the same parametrization, searched independently.
InfNuReport sample_inf_nu(const PairSpec& pair, const OrbitSearchOptions& options);

}  // namespace stabpair
