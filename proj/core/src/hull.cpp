#include "ccert/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <set>
#include <stdexcept>

namespace ccert {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 to_vec3(const Point& p) {
  Vec3 v{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < p.dim() && i < 3; ++i) v[i] = p[i];
  return v;
}

Vec3 sub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

// 2D monotone chain over distinct sorted points; strict turns only, so
// collinear boundary points are dropped. Returns indices into pts.
std::vector<int> chain2d(const std::vector<std::array<double, 2>>& pts,
                         double eps_area) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return pts[a] < pts[b];
  });
  auto crossz = [&](int o, int a, int b) {
    return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) -
           (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
  };
  std::vector<int> h(2 * n);
  int m = 0;
  for (int idx = 0; idx < n; ++idx) {
    const int i = order[idx];
    while (m >= 2 && crossz(h[m - 2], h[m - 1], i) <= eps_area) --m;
    h[m++] = i;
  }
  const int lower_end = m + 1;
  for (int idx = n - 2; idx >= 0; --idx) {
    const int i = order[idx];
    while (m >= lower_end && crossz(h[m - 2], h[m - 1], i) <= eps_area) --m;
    h[m++] = i;
  }
  h.resize(m > 1 ? m - 1 : m);  // last point repeats the first
  return h;
}

}  // namespace

class HullBuilder {
 public:
  static HullModel run(const std::vector<Point>& input, int dim) {
    if (dim != 2 && dim != 3)
      throw std::invalid_argument("HullModel: dimension must be 2 or 3");
    HullModel h;
    h.dim_ = dim;
    std::vector<Point> pts = input;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (const Point& p : pts)
      if (static_cast<int>(p.dim()) != dim)
        throw std::invalid_argument("HullModel: point dimension mismatch");
    if (pts.empty()) return h;

    double scale_abs = 1.0;
    for (const Point& p : pts)
      for (std::size_t i = 0; i < p.dim(); ++i)
        scale_abs = std::max(scale_abs, std::fabs(p[i]));

    std::vector<Vec3> v(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) v[i] = to_vec3(pts[i]);

    // Affine-dimension probes: farthest point, widest triangle, fattest
    // tetrahedron.
    const int n = static_cast<int>(pts.size());
    int i1 = -1;
    double best = 0.0;
    for (int i = 1; i < n; ++i) {
      const double d = dot(sub(v[i], v[0]), sub(v[i], v[0]));
      if (d > best) {
        best = d;
        i1 = i;
      }
    }
    if (i1 < 0 || best <= 1e-30 * scale_abs * scale_abs) {
      h.affine_dim_ = 0;
      h.vertices_ = {pts[0]};
      return h;
    }
    const Vec3 d01 = sub(v[i1], v[0]);
    int i2 = -1;
    best = 0.0;
    for (int i = 0; i < n; ++i) {
      const Vec3 c = cross(d01, sub(v[i], v[0]));
      const double a2 = dot(c, c);
      if (a2 > best) {
        best = a2;
        i2 = i;
      }
    }
    const double len01 = norm(d01);
    if (i2 < 0 || std::sqrt(best) <= 1e-12 * scale_abs * len01) {
      finish_collinear(h, pts, v, 0, i1);
      return h;
    }
    if (dim == 2) {
      finish_planar2d(h, pts, scale_abs);
      return h;
    }
    Vec3 nrm = cross(d01, sub(v[i2], v[0]));
    nrm = scale(nrm, 1.0 / norm(nrm));
    int i3 = -1;
    best = 0.0;
    for (int i = 0; i < n; ++i) {
      const double vol = std::fabs(dot(nrm, sub(v[i], v[0])));
      if (vol > best) {
        best = vol;
        i3 = i;
      }
    }
    if (i3 < 0 || best <= 1e-12 * scale_abs) {
      finish_coplanar3d(h, pts, v, 0, i1, i2, nrm, scale_abs);
      return h;
    }
    finish_full3d(h, pts, v, 0, i1, i2, i3, scale_abs);
    return h;
  }

 private:
  static void finish_collinear(HullModel& h, const std::vector<Point>& pts,
                               const std::vector<Vec3>& v, int a, int b) {
    h.affine_dim_ = 1;
    Vec3 dir = sub(v[b], v[a]);
    const double len = norm(dir);
    dir = scale(dir, 1.0 / len);
    double tmin = 0.0, tmax = 0.0;
    int imin = a, imax = a;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double t = dot(sub(v[i], v[a]), dir);
      if (t < tmin) {
        tmin = t;
        imin = static_cast<int>(i);
      }
      if (t > tmax) {
        tmax = t;
        imax = static_cast<int>(i);
      }
    }
    h.dir_ = dir;
    h.seg_a_ = v[imin];
    h.seg_b_ = v[imax];
    h.seg_len_ = tmax - tmin;
    h.vertices_ = {pts[imin], pts[imax]};
    std::sort(h.vertices_.begin(), h.vertices_.end());
  }

  static void set_edges_from_chain(
      HullModel& h, const std::vector<std::array<double, 2>>& q,
      const std::vector<int>& hull_idx) {
    h.edges2_.clear();
    const int m = static_cast<int>(hull_idx.size());
    for (int i = 0; i < m; ++i) {
      const auto& a = q[hull_idx[i]];
      const auto& b = q[hull_idx[(i + 1) % m]];
      // chain is counterclockwise; outward normal = (dy, -dx)
      double nx = b[1] - a[1];
      double ny = -(b[0] - a[0]);
      const double l = std::hypot(nx, ny);
      if (l == 0.0) continue;
      nx /= l;
      ny /= l;
      h.edges2_.push_back({nx, ny, nx * a[0] + ny * a[1]});
    }
  }

  static void finish_planar2d(HullModel& h, const std::vector<Point>& pts,
                              double scale_abs) {
    h.affine_dim_ = 2;
    std::vector<std::array<double, 2>> q(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) q[i] = {pts[i][0], pts[i][1]};
    const std::vector<int> idx =
        chain2d(q, 1e-12 * scale_abs * scale_abs);
    for (int i : idx) h.vertices_.push_back(pts[static_cast<std::size_t>(i)]);
    std::sort(h.vertices_.begin(), h.vertices_.end());
    set_edges_from_chain(h, q, idx);
  }

  static void finish_coplanar3d(HullModel& h, const std::vector<Point>& pts,
                                const std::vector<Vec3>& v, int a, int b,
                                int c, const Vec3& nrm, double scale_abs) {
    h.affine_dim_ = 2;
    h.plane_p0_ = v[a];
    h.plane_n_ = nrm;
    Vec3 e1 = sub(v[b], v[a]);
    e1 = scale(e1, 1.0 / norm(e1));
    Vec3 e2 = cross(nrm, e1);
    (void)c;
    h.e1_ = e1;
    h.e2_ = e2;
    std::vector<std::array<double, 2>> q(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec3 d = sub(v[i], v[a]);
      q[i] = {dot(d, e1), dot(d, e2)};
    }
    const std::vector<int> idx =
        chain2d(q, 1e-12 * scale_abs * scale_abs);
    for (int i : idx) h.vertices_.push_back(pts[static_cast<std::size_t>(i)]);
    std::sort(h.vertices_.begin(), h.vertices_.end());
    set_edges_from_chain(h, q, idx);
  }

  static void finish_full3d(HullModel& h, const std::vector<Point>& pts,
                            const std::vector<Vec3>& v, int i0, int i1,
                            int i2, int i3, double scale_abs) {
    h.affine_dim_ = 3;
    struct F {
      int a, b, c;
      Vec3 n;  // unit outward
      double off;
    };
    const double eps_vis = 1e-12 * scale_abs;
    auto make_facet = [&](int a, int b, int c) {
      F f;
      f.a = a;
      f.b = b;
      f.c = c;
      Vec3 n = cross(sub(v[b], v[a]), sub(v[c], v[a]));
      f.n = scale(n, 1.0 / norm(n));
      f.off = dot(f.n, v[a]);
      return f;
    };
    auto oriented = [&](int a, int b, int c, int opposite) {
      F f = make_facet(a, b, c);
      if (dot(f.n, v[opposite]) > f.off) f = make_facet(a, c, b);
      return f;
    };
    std::vector<F> facets = {oriented(i0, i1, i2, i3), oriented(i0, i1, i3, i2),
                             oriented(i0, i2, i3, i1), oriented(i1, i2, i3, i0)};
    const std::set<int> seeds = {i0, i1, i2, i3};
    const int n = static_cast<int>(v.size());
    for (int p = 0; p < n; ++p) {
      if (seeds.count(p)) continue;
      std::vector<char> visible(facets.size(), 0);
      bool any = false;
      for (std::size_t f = 0; f < facets.size(); ++f) {
        if (dot(facets[f].n, v[p]) - facets[f].off > eps_vis) {
          visible[f] = 1;
          any = true;
        }
      }
      if (!any) continue;
      // Horizon: directed edges of visible facets whose reverse is not a
      // visible-facet edge.
      std::set<std::pair<int, int>> dir_edges;
      for (std::size_t f = 0; f < facets.size(); ++f) {
        if (!visible[f]) continue;
        const F& fc = facets[f];
        dir_edges.insert({fc.a, fc.b});
        dir_edges.insert({fc.b, fc.c});
        dir_edges.insert({fc.c, fc.a});
      }
      std::vector<F> next;
      for (std::size_t f = 0; f < facets.size(); ++f)
        if (!visible[f]) next.push_back(facets[f]);
      for (const auto& [a, b] : dir_edges) {
        if (dir_edges.count({b, a})) continue;  // interior to the visible set
        next.push_back(make_facet(a, b, p));
      }
      facets.swap(next);
    }
    std::set<int> used;
    for (const F& f : facets) {
      used.insert(f.a);
      used.insert(f.b);
      used.insert(f.c);
    }
    for (int i : used) h.vertices_.push_back(pts[static_cast<std::size_t>(i)]);
    std::sort(h.vertices_.begin(), h.vertices_.end());
    h.facets_.reserve(facets.size());
    for (const F& f : facets)
      h.facets_.push_back({{f.n[0], f.n[1], f.n[2]}, f.off});
  }
};

HullModel HullModel::build(const std::vector<Point>& pts, int dim) {
  return HullBuilder::run(pts, dim);
}

double HullModel::distance(const Point& p) const {
  if (affine_dim_ < 0) return std::numeric_limits<double>::infinity();
  const Vec3 q = to_vec3(p);
  switch (affine_dim_) {
    case 0: {
      const Vec3 d = sub(q, to_vec3(vertices_[0]));
      return norm(d);
    }
    case 1: {
      const Vec3 da = sub(q, seg_a_);
      const double t = dot(da, dir_);
      const Vec3 perp = sub(da, scale(dir_, t));
      double d = norm(perp);
      if (t < 0.0) d = std::max(d, -t);
      if (t > seg_len_) d = std::max(d, t - seg_len_);
      return d;
    }
    case 2: {
      double u, w, off_plane = 0.0;
      if (dim_ == 2) {
        u = q[0];
        w = q[1];
      } else {
        const Vec3 d = sub(q, plane_p0_);
        off_plane = std::fabs(dot(d, plane_n_));
        u = dot(d, e1_);
        w = dot(d, e2_);
      }
      double worst = -std::numeric_limits<double>::infinity();
      for (const Edge2& e : edges2_)
        worst = std::max(worst, e.nx * u + e.ny * w - e.off);
      return std::max(off_plane, worst);
    }
    default: {
      double worst = -std::numeric_limits<double>::infinity();
      for (const Facet& f : facets_) {
        const double d =
            f.normal[0] * q[0] + f.normal[1] * q[1] + f.normal[2] * q[2] -
            f.offset;
        worst = std::max(worst, d);
      }
      return worst;
    }
  }
}

Scheme<Point> hull_scheme(int dimension) {
  if (dimension != 2 && dimension != 3)
    throw std::invalid_argument("hull_scheme: dimension must be 2 or 3");
  Scheme<Point> s;
  s.name = dimension == 2 ? "hull2" : "hull3";
  s.compress = [dimension](const Multiset<Point>& u) {
    const HullModel h = HullModel::build(u.support(), dimension);
    Multiset<Point> out;
    for (const Point& p : h.vertices()) out.insert(p);
    return out;
  };
  s.learner = [dimension](const Multiset<Point>& u) {
    auto model = std::make_shared<HullModel>(
        HullModel::build(u.support(), dimension));
    Hypothesis<Point> h;
    h.predict = [model](const Point& p) { return model->distance(p); };
    h.loss = [model](const Point& p) {
      return model->contains(p, 1e-9) ? 0 : 1;
    };
    return h;
  };
  s.reconstruct = s.learner;
  return s;
}

}  // namespace ccert
