#pragma once

// Semistability and stability of pairs (v, w) through weight polytopes.
//
// Weights use the minimum convention w_lambda(e) = min_{a in A(e)} <a, lambda>.
// With it, N(v) is contained in N(w) exactly when w_lambda(w) <= w_lambda(v)
// for every 1-PS lambda, and a destabilizing 1-PS is one with
// w_lambda(w) > w_lambda(v): along lambda(t), t -> 0, the energy
// nu = log|lambda(t) w|^2 - log|lambda(t) v|^2 then tends to -infinity.

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

#include "stabpair/exactgeom.hpp"
#include "stabpair/polyrep.hpp"

namespace stabpair {

/// I^{tensor q} (x) base^{tensor power}. power == 0 drops the polynomial factor.
struct PairVector {
  Polynomial base;
  int power = 1;
  int identity_power = 0;

  PairVector(Polynomial b, int power_ = 1, int identity_power_ = 0);

  int ambient() const { return shape_of(base).cols; }
  const SparsePolynomial& sparse_base() const;
  bool has_sparse_base() const { return std::holds_alternative<SparsePolynomial>(base); }
};

struct PairSpec {
  PairVector v;
  PairVector w;

  PairSpec(PairVector v_, PairVector w_);
  int ambient() const { return v.ambient(); }
};

/// Q_N = N(I) in sum-zero coordinates.
LatticePolytope simplex_qn(int ambient);

LatticePolytope weight_polytope(const SparsePolynomial& p);
LatticePolytope weight_polytope(const FormalPower& p);
LatticePolytope weight_polytope(const PairVector& p);

Rational ops_weight(const SparsePolynomial& p, const OnePSG& lambda);
Rational ops_weight(const PairVector& p, const OnePSG& lambda);

/// N(v) inside N(w) on the diagonal torus.
bool semistable_diagonal(const PairSpec& pair);

struct Witness {
  GroupElement g;
  OnePSG lambda;
  Rational weight_v;
  Rational weight_w;
  std::size_t trial = 0;
};

enum class StabilityStatus { semistable_on_probed_tori, destabilized, stable_with_exponent };

struct StabilityVerdict {
  StabilityStatus status = StabilityStatus::semistable_on_probed_tori;
  std::optional<Witness> witness;
  std::size_t trials = 0;
  std::optional<int> exponent;
  std::string verification_hash;

  nlohmann::json to_json() const;
};

std::string to_string(StabilityStatus s);

struct ProbeOptions {
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  int threads = 0;
};

/// Trial 0 is the identity; trial i >= 1 conjugates by an exact random
/// unimodular integer matrix seeded from (seed, i).
StabilityVerdict semistable_probe(const PairSpec& pair, const ProbeOptions& options);

/// Recomputes the witness weights directly from the acted supports.
bool verify_witness(const PairSpec& pair, const Witness& witness);

/// Degree of the module C_D[M_{k x (N+1)}] containing p: the least k >= 1 with
/// N(e) in k Q_N for all e. Computed from the module polytope and from the
/// closed form max(D, 1); throws std::logic_error if they disagree.
int module_degree(const SparsePolynomial& p);
int module_degree(const PairVector& p);

/// Least k >= 0 with N(p) inside k Q_N for this particular vector.
Rational vector_degree_bound(const SparsePolynomial& p);

enum class StableVariant {
  pair,     // (I^q (x) v^m, w^{m+1})
  variety,  // (I^q (x) v^{m-1}, w^m)
};

struct StableSearchResult {
  std::optional<int> m;
  int q = 0;
  int m_max = 0;
  StableVariant variant = StableVariant::pair;
  std::optional<StabilityVerdict> cross_check;

  nlohmann::json to_json() const;
};

/// The twisted pair at exponent m.
PairSpec twisted_pair(const PairSpec& pair, int q, int m, StableVariant variant);

bool stable_at(const PairSpec& pair, int q, int m, StableVariant variant);

/// Linear sweep m = 1..m_max on the diagonal torus. When an m is found and
/// cross_check.trials > 0, the twisted pair is also probed on conjugate tori.
StableSearchResult stable_search(const PairSpec& pair, int q, int m_max, StableVariant variant,
                                 const ProbeOptions& cross_check);

}  // namespace stabpair
