#include "stabpair/exactgeom.hpp"

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace stabpair {

bool Halfspace::satisfied_by(const LatticePoint& x) const {
  const Rational e = excess(x);
  return equality ? e == 0 : e <= 0;
}

Rational Halfspace::excess(const LatticePoint& x) const { return dot(normal, x) - offset; }

LinearFunctional::LinearFunctional(std::vector<long> coefficients)
    : coefficients_(std::move(coefficients)) {
  const long total = std::accumulate(coefficients_.begin(), coefficients_.end(), 0L);
  if (total != 0) throw std::invalid_argument("LinearFunctional: coefficients must sum to zero");
}

Rational LinearFunctional::operator()(const LatticePoint& x) const {
  if (x.size() != coefficients_.size()) {
    throw std::invalid_argument("LinearFunctional: dimension mismatch");
  }
  Rational acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * coefficients_[i];
  return acc;
}

struct LatticePolytope::FacetCache {
  std::once_flag once;
  std::vector<Halfspace> halfspaces;
  std::size_t affine_dim = 0;
};

namespace {

// Small fixed-width bitset over constraint indices.
class IndexSet {
 public:
  explicit IndexSet(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= (std::uint64_t{1} << (i % 64)); }
  bool subset_of(const IndexSet& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if ((words_[w] & ~o.words_[w]) != 0) return false;
    }
    return true;
  }
  IndexSet operator&(const IndexSet& o) const {
    IndexSet r = *this;
    for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] &= o.words_[w];
    return r;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

 private:
  std::vector<std::uint64_t> words_;
};

using IntVector = std::vector<BigInt>;

struct Ray {
  IntVector coords;
  IndexSet tight;
};

void make_primitive(IntVector& v) {
  BigInt g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), BigInt(x).get_mpz_t());
  if (g > 1) {
    for (auto& x : v) x /= g;
  }
}

BigInt int_dot(const IntVector& a, const IntVector& b) {
  BigInt acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Extreme rays of {x : rows[i] . x <= 0 for all i}. The rows must have full
// column rank so the cone is pointed. Double description with the
// combinatorial adjacency test, exact over the integers.
std::vector<Ray> double_description(const std::vector<IntVector>& rows) {
  const std::size_t m = rows.size();
  const std::size_t d = rows.front().size();

  // Greedy choice of d linearly independent rows.
  std::vector<std::size_t> basis;
  std::vector<RationalVector> echelon;
  for (std::size_t i = 0; i < m && basis.size() < d; ++i) {
    std::vector<RationalVector> trial = echelon;
    RationalVector row(d);
    for (std::size_t j = 0; j < d; ++j) row[j] = Rational(rows[i][j]);
    trial.push_back(row);
    if (rank(trial) > echelon.size()) {
      rref(trial);
      echelon = std::move(trial);
      basis.push_back(i);
    }
  }
  if (basis.size() != d) throw std::logic_error("double_description: constraint matrix not full rank");

  // Inverse of the basis submatrix; ray j solves A_I r = -e_j.
  std::vector<RationalVector> aug(d, RationalVector(2 * d, Rational(0)));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) aug[r][c] = Rational(rows[basis[r]][c]);
    aug[r][d + r] = 1;
  }
  rref(aug);

  std::vector<Ray> rays;
  for (std::size_t j = 0; j < d; ++j) {
    RationalVector col(d);
    for (std::size_t r = 0; r < d; ++r) col[r] = -aug[r][d + j];
    Ray ray{IntVector{}, IndexSet(m)};
    auto prim = primitive_integer_direction(col);
    ray.coords.assign(prim.begin(), prim.end());
    for (std::size_t r = 0; r < d; ++r) {
      if (r != j) ray.tight.set(basis[r]);
    }
    rays.push_back(std::move(ray));
  }

  std::vector<bool> in_basis(m, false);
  for (auto b : basis) in_basis[b] = true;

  for (std::size_t i = 0; i < m; ++i) {
    if (in_basis[i]) continue;
    std::vector<BigInt> val(rays.size());
    std::vector<std::size_t> pos, zero, neg;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = int_dot(rows[i], rays[r].coords);
      const int s = sgn(val[r]);
      (s > 0 ? pos : s < 0 ? neg : zero).push_back(r);
    }
    if (pos.empty()) {
      for (auto r : zero) rays[r].tight.set(i);
      continue;
    }

    std::vector<Ray> next;
    next.reserve(neg.size() + zero.size());
    for (std::size_t p : pos) {
      for (std::size_t n : neg) {
        IndexSet common = rays[p].tight & rays[n].tight;
        if (common.count() + 2 < d) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          if (common.subset_of(rays[r].tight)) adjacent = false;
        }
        if (!adjacent) continue;
        Ray fresh{IntVector(d), common};
        for (std::size_t c = 0; c < d; ++c) {
          fresh.coords[c] = val[p] * rays[n].coords[c] - val[n] * rays[p].coords[c];
        }
        make_primitive(fresh.coords);
        fresh.tight.set(i);
        next.push_back(std::move(fresh));
      }
    }
    for (std::size_t r : neg) next.push_back(std::move(rays[r]));
    for (std::size_t r : zero) {
      rays[r].tight.set(i);
      next.push_back(std::move(rays[r]));
    }
    rays = std::move(next);
  }
  return rays;
}

struct HullData {
  std::vector<LatticePoint> vertices;
  std::vector<Halfspace> halfspaces;
  std::size_t affine_dim = 0;
};

Halfspace canonical_halfspace(const RationalVector& normal, const Rational& offset, bool equality) {
  auto prim = primitive_integer_direction(normal);
  // Rescale the offset by the same positive factor.
  std::size_t lead = 0;
  while (normal[lead] == 0) ++lead;
  const Rational factor = Rational(prim[lead]) / normal[lead];
  Halfspace h;
  h.normal.resize(normal.size());
  for (std::size_t i = 0; i < normal.size(); ++i) h.normal[i] = Rational(prim[i]);
  h.offset = offset * factor;
  h.equality = equality;
  return h;
}

HullData compute_hull(std::vector<LatticePoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t dim = pts.front().size();
  const LatticePoint& p0 = pts.front();

  HullData out;
  std::vector<RationalVector> diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    RationalVector v(dim);
    for (std::size_t j = 0; j < dim; ++j) v[j] = pts[i][j] - p0[j];
    diffs.push_back(std::move(v));
  }
  std::vector<RationalVector> directions = diffs;
  const auto pivots = rref(directions);
  const std::size_t k = pivots.size();
  out.affine_dim = k;

  for (auto& n : null_space(directions, dim)) {
    out.halfspaces.push_back(canonical_halfspace(n, dot(n, p0), true));
  }
  if (k == 0) {
    out.vertices.push_back(p0);
    return out;
  }

  // Local coordinates on the affine hull are the pivot coordinates of p - p0,
  // scaled to integers by a common denominator.
  BigInt common_den = 1;
  for (const auto& v : diffs) {
    for (auto c : pivots) mpz_lcm(common_den.get_mpz_t(), common_den.get_mpz_t(), BigInt(v[c].get_den()).get_mpz_t());
  }
  std::vector<IntVector> rows(pts.size(), IntVector(k + 1));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const Rational y = (pts[i][pivots[j]] - p0[pivots[j]]) * Rational(common_den);
      rows[i][j] = y.get_num();
    }
    rows[i][k] = -1;
  }

  const auto rays = double_description(rows);

  std::vector<IntVector> facet_normals;
  for (const auto& ray : rays) {
    IntVector a(ray.coords.begin(), ray.coords.begin() + static_cast<long>(k));
    if (std::all_of(a.begin(), a.end(), [](const BigInt& x) { return x == 0; })) continue;
    // a . Y <= b with Y = L (x - p0)[pivots]
    RationalVector normal(dim, Rational(0));
    for (std::size_t j = 0; j < k; ++j) normal[pivots[j]] = Rational(a[j] * common_den);
    const Rational offset = Rational(ray.coords[k]) + dot(normal, p0);
    out.halfspaces.push_back(canonical_halfspace(normal, offset, false));
    facet_normals.push_back(std::move(a));
  }

  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<RationalVector> tight;
    for (std::size_t f = 0; f < rays.size(); ++f) {
      if (int_dot(rows[i], rays[f].coords) == 0) {
        RationalVector a(k);
        for (std::size_t j = 0; j < k; ++j) a[j] = Rational(rays[f].coords[j]);
        tight.push_back(std::move(a));
      }
    }
    if (tight.size() >= k && rank(tight) == k) out.vertices.push_back(pts[i]);
  }
  return out;
}

void check_points(std::span<const LatticePoint> points) {
  if (points.empty()) throw std::invalid_argument("convex_hull: empty point set");
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("convex_hull: mixed point dimensions");
  }
}

}  // namespace

LatticePolytope::LatticePolytope(std::size_t dim, std::vector<LatticePoint> vertices,
                                 std::shared_ptr<FacetCache> facets)
    : dim_(dim), vertices_(std::move(vertices)), facets_(std::move(facets)) {}

LatticePolytope LatticePolytope::hull(std::span<const LatticePoint> points) {
  check_points(points);
  auto data = compute_hull(std::vector<LatticePoint>(points.begin(), points.end()));
  auto cache = std::make_shared<FacetCache>();
  std::call_once(cache->once, [&] {
    cache->halfspaces = std::move(data.halfspaces);
    cache->affine_dim = data.affine_dim;
  });
  return LatticePolytope(points.front().size(), std::move(data.vertices), std::move(cache));
}

const LatticePolytope::FacetCache& LatticePolytope::facets() const {
  std::call_once(facets_->once, [this] {
    auto data = compute_hull(vertices_);
    facets_->halfspaces = std::move(data.halfspaces);
    facets_->affine_dim = data.affine_dim;
  });
  return *facets_;
}

const std::vector<Halfspace>& LatticePolytope::halfspaces() const { return facets().halfspaces; }

std::size_t LatticePolytope::affine_dim() const { return facets().affine_dim; }

bool LatticePolytope::contains_point(const LatticePoint& x) const {
  if (x.size() != dim_) throw std::invalid_argument("contains_point: dimension mismatch");
  return std::all_of(halfspaces().begin(), halfspaces().end(),
                     [&](const Halfspace& h) { return h.satisfied_by(x); });
}

nlohmann::json LatticePolytope::to_json() const {
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& v : vertices_) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& c : v) row.push_back(to_string(c));
    verts.push_back(std::move(row));
  }
  return {{"dim", dim_}, {"vertices", std::move(verts)}};
}

LatticePolytope LatticePolytope::from_json(const nlohmann::json& j) {
  const auto dim = j.at("dim").get<std::size_t>();
  std::vector<LatticePoint> pts;
  for (const auto& row : j.at("vertices")) {
    LatticePoint p;
    for (const auto& c : row) p.push_back(parse_rational(c.get<std::string>()));
    if (p.size() != dim) throw std::invalid_argument("polytope JSON: vertex length differs from dim");
    pts.push_back(std::move(p));
  }
  return convex_hull(pts);
}

LatticePolytope convex_hull(std::span<const LatticePoint> points) {
  return LatticePolytope::hull(points);
}

std::optional<ContainmentViolation> find_violation(const LatticePolytope& outer,
                                                   const LatticePolytope& inner) {
  if (outer.dim() != inner.dim()) throw std::invalid_argument("contains: dimension mismatch");
  const auto& hs = outer.halfspaces();
  for (std::size_t v = 0; v < inner.vertices().size(); ++v) {
    for (std::size_t h = 0; h < hs.size(); ++h) {
      if (!hs[h].satisfied_by(inner.vertices()[v])) return ContainmentViolation{v, h};
    }
  }
  return std::nullopt;
}

bool contains(const LatticePolytope& outer, const LatticePolytope& inner) {
  return !find_violation(outer, inner).has_value();
}

LatticePolytope minkowski_sum(const LatticePolytope& p, const LatticePolytope& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("minkowski_sum: dimension mismatch");
  std::vector<LatticePoint> sums;
  sums.reserve(p.vertices().size() * q.vertices().size());
  for (const auto& a : p.vertices()) {
    for (const auto& b : q.vertices()) {
      LatticePoint s(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
      sums.push_back(std::move(s));
    }
  }
  return convex_hull(sums);
}

LatticePolytope dilate(const LatticePolytope& p, const Rational& k) {
  if (k < 0) throw std::invalid_argument("dilate: negative factor");
  if (k == 0) {
    std::vector<LatticePoint> origin{LatticePoint(p.dim(), Rational(0))};
    return convex_hull(origin);
  }
  std::vector<LatticePoint> verts = p.vertices();
  for (auto& v : verts) {
    for (auto& c : v) c *= k;
  }
  // Positive scaling preserves both the vertex set and its order.
  return LatticePolytope(p.dim(), std::move(verts), std::make_shared<LatticePolytope::FacetCache>());
}

Rational support_min(const LatticePolytope& p, const RationalVector& direction) {
  if (direction.size() != p.dim()) throw std::invalid_argument("support_min: dimension mismatch");
  Rational best = dot(direction, p.vertices().front());
  for (const auto& v : p.vertices()) {
    Rational val = dot(direction, v);
    if (val < best) best = std::move(val);
  }
  return best;
}

Rational support_min(const LatticePolytope& p, const LinearFunctional& lambda) {
  if (lambda.dim() != p.dim()) throw std::invalid_argument("support_min: dimension mismatch");
  Rational best = lambda(p.vertices().front());
  for (const auto& v : p.vertices()) {
    Rational val = lambda(v);
    if (val < best) best = std::move(val);
  }
  return best;
}

}  // namespace stabpair
