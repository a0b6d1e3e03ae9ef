#include "stabpair/special.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <cmath>
#include <stdexcept>

namespace stabpair {

double log_gamma(double x) {
  if (!(x > 0)) throw std::domain_error("log_gamma: argument must be positive");
  return std::lgamma(x);
}

double digamma(double x) {
  if (!(x > 0)) throw std::domain_error("digamma: argument must be positive");
  return boost::math::digamma(x);
}

Rational harmonic_exact(unsigned k) {
  Rational h = 0;
  for (unsigned j = 1; j <= k; ++j) h += Rational(1, j);
  return h;
}

double harmonic(unsigned k) {
  if (k <= 64) {
    double h = 0;
    for (unsigned j = k; j >= 1; --j) h += 1.0 / j;
    return h;
  }
  return digamma(static_cast<double>(k) + 1.0) + euler_gamma;
}

}  // namespace stabpair
