#pragma once

#include <array>
#include <vector>

#include "ccert/example_types.hpp"
#include "ccert/scheme.hpp"

namespace ccert {

/// Convex hull of a point set in R^2 or R^3 with explicit handling of
/// degenerate (lower affine dimension) inputs: the hull of coincident /
/// collinear / coplanar points is the hull within their affine span.
class HullModel {
 public:
  /// `dim` is the ambient dimension (2 or 3); all points must match it.
  static HullModel build(const std::vector<Point>& pts, int dim);

  /// Hull vertices (one representative per geometric vertex), sorted.
  const std::vector<Point>& vertices() const { return vertices_; }

  int ambient_dim() const { return dim_; }
  int affine_dim() const { return affine_dim_; }

  /// Signed distance from the hull: <= 0 inside or on the boundary,
  /// positive outside. For degenerate hulls this is the distance to the
  /// affine span combined with the in-span facet distances.
  double distance(const Point& p) const;

  /// Membership with tolerance on facet distances.
  bool contains(const Point& p, double tol = 1e-9) const {
    return distance(p) <= tol;
  }

 private:
  struct Facet {
    std::array<double, 3> normal;  // unit outward
    double offset;                 // dot(normal, x) <= offset inside
  };

  int dim_ = 0;
  int affine_dim_ = -1;  // -1: empty hull
  std::vector<Point> vertices_;

  // affine_dim 0: vertices_[0] is the point.
  // affine_dim 1: segment [seg_a_, seg_b_] along unit dir_.
  std::array<double, 3> seg_a_{}, seg_b_{}, dir_{};
  double seg_len_ = 0.0;

  // affine_dim 2 (in 3D): plane through plane_p0_ with unit normal
  // plane_n_; polygon handled by 2D edges in the (e1_, e2_) basis.
  std::array<double, 3> plane_p0_{}, plane_n_{}, e1_{}, e2_{};

  // 2D polygon edges (ambient 2D, or the in-plane basis coordinates):
  // unit outward normal (nx,ny) and offset.
  struct Edge2 {
    double nx, ny, off;
  };
  std::vector<Edge2> edges2_;

  // affine_dim 3: facets.
  std::vector<Facet> facets_;

  friend class HullBuilder;
};

/// Reference compression scheme: compress = hull vertex set (one
/// representative each), hypothesis = hull membership region, loss = 1 iff
/// the point falls strictly outside (facet distance above 1e-9).
Scheme<Point> hull_scheme(int dimension);

}  // namespace ccert
