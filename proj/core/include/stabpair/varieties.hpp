#pragma once

// Resultants and hyperdiscriminants of rational normal curves, the normalized
// pair (R, Delta), variety heights and the height discrepancy.
//
// A row (a_0, ..., a_d) stands for the binary form f = sum_k a_k s^{d-k} t^k.
// R_X on M_{2 x (d+1)} is the Sylvester resultant of the two row forms;
// Delta_X on M_{1 x (d+1)} is Res(df/ds, df/dt) divided by
// (-1)^{d(d-1)/2} d^{d-2}, which makes the coefficient of the lexicographically
// first monomial a_1^2 ... a_{d-1}^2 equal to +1.

#include <json.hpp>

#include <string>
#include <vector>

#include "stabpair/igusa.hpp"
#include "stabpair/pairstab.hpp"

namespace stabpair {

/// Numeric Sylvester resultant of two forms of degrees len-1.
Complex sylvester_resultant(const std::vector<Complex>& f, const std::vector<Complex>& g);

/// (-1)^{d(d-1)/2} d^{d-2}.
double discriminant_normalizer(int d);

/// Normalized discriminant of the form with coefficients a_0..a_d, numerically.
Complex binary_discriminant(const std::vector<Complex>& a);

/// Largest d for which the symbolic expansions are built.
inline constexpr int resultant_symbolic_max = 4;
inline constexpr int discriminant_symbolic_max = 5;

/// Symbolic expansion (any d >= 2; cost grows quickly beyond the defaults).
SparsePolynomial rnc_resultant_symbolic(int d);
SparsePolynomial rnc_hyperdiscriminant_symbolic(int d);
BlackBoxPolynomial rnc_resultant_blackbox(int d);
BlackBoxPolynomial rnc_hyperdiscriminant_blackbox(int d);

/// Symbolic up to the thresholds above, black-box beyond. Throws for d < 2.
Polynomial rnc_resultant(int d);
Polynomial rnc_hyperdiscriminant(int d);

/// Total degree read off the construction: the declared degree for sparse
/// polynomials, log2 |P(2A)| / |P(A)| at random points for black-box ones.
int measured_degree(const Polynomial& p, std::uint64_t seed = 0);

struct VarietyExample {
  std::string family = "rnc";
  int n = 1;
  int N = 0;
  int d = 0;
  Polynomial R;
  Polynomial Delta;
  int deg_R = 0;
  int deg_delta = 0;

  /// mu solving deg_delta = n(n+1)d - d mu; an inference, not a paper value.
  double mu_backsolved() const;
  nlohmann::json summary() const;
};

VarietyExample rational_normal_curve(int d);

struct NormalizedPair {
  FormalPower R;      // R_X^{deg_delta}
  FormalPower Delta;  // Delta_X^{deg_R}
};

NormalizedPair normalized_pair(const VarietyExample& x);

/// (R_X^{deg_delta}, Delta_X^{deg_R}) as a pair on SL(N+1).
PairSpec normalized_pair_spec(const VarietyExample& x);

struct VarietyHeights {
  HeightReport hF;
  HeightReport hDelta;
};

VarietyHeights variety_heights(const VarietyExample& x, const HeightOptions& options);

struct DiscrepancyRow {
  int d = 0;
  int deg_R = 0;
  int deg_delta = 0;
  HeightReport hF;
  HeightReport hDelta;
  double delta = 0;
  double delta_ci = 0;  // 3 combined standard errors
  double delta_over_d2 = 0;
};

struct DiscrepancyTable {
  std::vector<DiscrepancyRow> rows;
  double fitted_exponent = 0;  // slope of log delta against log d
  double exponent_stderr = 0;

  nlohmann::json to_json() const;
};

/// Rows for d in [d_min, d_max]; row d runs variety_heights with seed derive_seed(seed, d).
DiscrepancyTable discrepancy_table(int d_min, int d_max, const HeightOptions& options);

struct OptimalConstantProbe {
  double lower_bound = 0;  // max over the supplied sigmas
  std::vector<double> values;
};

/// |deg_delta h(sigma R_X) - deg_R h(sigma Delta_X)| maximized over sigmas:
/// a lower bound for the optimal constant. sigma i > 0 draws from a seed
/// derived from (seed, i); sigma 0 uses the seed as given, so a single
/// identity reproduces the discrepancy row computed with that seed.
OptimalConstantProbe optimal_constant_probe(const VarietyExample& x, const std::vector<GroupElement>& sigmas,
                                            const HeightOptions& options);

}  // namespace stabpair
