#pragma once

// The weight form of the numerical criterion, evaluated independently of the
// polytope kernel: facet normals come from the brute-force oracle and weights
// from raw supports.

#include <random>
#include <vector>

#include "builders.hpp"
#include "oracles.hpp"
#include "stabpair/pairstab.hpp"

namespace stabpair::testing {

inline long raw_weight(const SparsePolynomial& p, const std::vector<long>& lambda) {
  long best = 0;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    const auto ch = column_degrees(e, p.shape());
    long v = 0;
    for (std::size_t i = 0; i < lambda.size(); ++i) v += ch.raw[i] * lambda[i];
    if (first || v < best) best = v;
    first = false;
  }
  return best;
}

inline std::vector<long> centered_primitive(RationalVector dir) {
  Rational mean = 0;
  for (const auto& x : dir) mean += x;
  mean /= static_cast<long>(dir.size());
  for (auto& x : dir) x -= mean;
  std::vector<long> out;
  for (const auto& x : primitive_integer_direction(dir)) out.push_back(x.get_si());
  return out;
}

inline std::vector<long> random_lambda(int n, Rng& rng, int bound = 5) {
  std::uniform_int_distribution<int> u(-bound, bound);
  std::vector<long> l(static_cast<std::size_t>(n));
  long sum = 0;
  for (int i = 0; i + 1 < n; ++i) sum += l[static_cast<std::size_t>(i)] = u(rng);
  l.back() = -sum;
  return l;
}

/// w_lambda(w) <= w_lambda(v) over every facet normal of N(w) and `extra`
/// random 1-PS.
inline bool weight_condition(const SparsePolynomial& v, const SparsePolynomial& w, Rng& rng, int extra) {
  std::vector<RationalVector> pts;
  for (const auto& c : support(w)) pts.push_back(c.projected());
  std::vector<std::vector<long>> lambdas;
  for (const auto& f : oracle::brute_facets(pts)) {
    RationalVector n = f.normal;
    for (auto& x : n) x = -x;
    auto l = centered_primitive(n);
    bool zero = true;
    for (long x : l) zero = zero && x == 0;
    if (zero) continue;
    lambdas.push_back(l);
    if (f.equality) {
      for (auto& x : l) x = -x;
      lambdas.push_back(l);
    }
  }
  for (int i = 0; i < extra; ++i) lambdas.push_back(random_lambda(w.shape().cols, rng));
  for (const auto& l : lambdas) {
    if (raw_weight(w, l) > raw_weight(v, l)) return false;
  }
  return true;
}

/// Random (v, w) on M_{1 x n}, n in [2, 4]; v has few terms so that
/// containment holds a fair share of the time.
inline std::pair<SparsePolynomial, SparsePolynomial> random_support_pair(Rng& rng) {
  std::uniform_int_distribution<int> dim(2, 4), deg(1, 4), wterms(1, 7), vterms(1, 2);
  const MatrixShape s{1, dim(rng)};
  const int d = deg(rng);
  return {random_sparse(s, d, vterms(rng), rng), random_sparse(s, d, wterms(rng), rng)};
}

}  // namespace stabpair::testing
