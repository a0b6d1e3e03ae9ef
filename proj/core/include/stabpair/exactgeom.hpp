#pragma once

// Exact rational lattice polytopes: hulls, containment, Minkowski sums,
// dilation and support minima. No floating point is used anywhere here.

#include <json.hpp>

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "stabpair/rational.hpp"

namespace stabpair {

using LatticePoint = RationalVector;

/// normal . x <= offset, or normal . x == offset for affine-hull constraints.
struct Halfspace {
  RationalVector normal;
  Rational offset;
  bool equality = false;

  bool satisfied_by(const LatticePoint& x) const;
  /// normal . x - offset; positive means violated for an inequality.
  Rational excess(const LatticePoint& x) const;
};

/// A 1-PS of SL(N+1) viewed as an integral functional on characters.
class LinearFunctional {
 public:
  explicit LinearFunctional(std::vector<long> coefficients);

  const std::vector<long>& coefficients() const { return coefficients_; }
  std::size_t dim() const { return coefficients_.size(); }
  Rational operator()(const LatticePoint& x) const;

 private:
  std::vector<long> coefficients_;
};

class LatticePolytope {
 public:
  /// Irredundant hull of a nonempty point set of uniform dimension.
  static LatticePolytope hull(std::span<const LatticePoint> points);

  std::size_t dim() const { return dim_; }
  const std::vector<LatticePoint>& vertices() const { return vertices_; }

  /// Facet inequalities plus affine-hull equalities, derived on first use.
  const std::vector<Halfspace>& halfspaces() const;
  /// Dimension of the affine hull (0 for a point).
  std::size_t affine_dim() const;

  bool contains_point(const LatticePoint& x) const;

  nlohmann::json to_json() const;
  static LatticePolytope from_json(const nlohmann::json& j);

  /// Vertex-set equality (vertices are kept sorted).
  friend bool operator==(const LatticePolytope& a, const LatticePolytope& b) {
    return a.dim_ == b.dim_ && a.vertices_ == b.vertices_;
  }

 private:
  struct FacetCache;
  LatticePolytope(std::size_t dim, std::vector<LatticePoint> vertices,
                  std::shared_ptr<FacetCache> facets);
  const FacetCache& facets() const;

  friend LatticePolytope dilate(const LatticePolytope& p, const Rational& k);

  std::size_t dim_ = 0;
  std::vector<LatticePoint> vertices_;
  std::shared_ptr<FacetCache> facets_;
};

LatticePolytope convex_hull(std::span<const LatticePoint> points);

/// Closed containment: every vertex of `inner` satisfies every halfspace of `outer`.
bool contains(const LatticePolytope& outer, const LatticePolytope& inner);

/// First (vertex of inner, halfspace of outer) pair violating containment.
struct ContainmentViolation {
  std::size_t vertex_index;
  std::size_t halfspace_index;
};
std::optional<ContainmentViolation> find_violation(const LatticePolytope& outer,
                                                   const LatticePolytope& inner);

LatticePolytope minkowski_sum(const LatticePolytope& p, const LatticePolytope& q);
LatticePolytope dilate(const LatticePolytope& p, const Rational& k);

Rational support_min(const LatticePolytope& p, const LinearFunctional& lambda);
/// Minimum of an arbitrary rational functional over the vertices.
Rational support_min(const LatticePolytope& p, const RationalVector& direction);

}  // namespace stabpair
