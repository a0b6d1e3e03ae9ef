#pragma once

// Gamma-function helpers for the zeta and height formulas.

#include "stabpair/rational.hpp"

namespace stabpair {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// psi(x) = Gamma'(x) / Gamma(x) for x > 0.
double digamma(double x);

/// H_k = 1 + 1/2 + ... + 1/k as an exact rational; H_0 = 0.
Rational harmonic_exact(unsigned k);

/// H_k in double precision, via psi(k + 1) + gamma for large k.
double harmonic(unsigned k);

/// log(prod_i alpha_i!) for a multi-index.
template <class Range>
double log_factorial_product(const Range& alpha) {
  double s = 0;
  for (auto a : alpha) s += log_gamma(static_cast<double>(a) + 1.0);
  return s;
}

}  // namespace stabpair
