#include "lagmove/diagnostics.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "lagmove/errors.hpp"

namespace lagmove {

namespace {

double cross2(const Vector& o, const Vector& a, const Vector& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

double max_pairwise(std::span<const Vector> pts, std::span<const std::size_t> subset) {
  double best = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      best = std::max(best, (pts[subset[a]] - pts[subset[b]]).squaredNorm());
    }
  }
  return std::sqrt(best);
}

double bounding_scale(std::span<const Vector> pts) {
  Vector lo = pts[0];
  Vector hi = pts[0];
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).maxCoeff();
}

using Vec3 = Eigen::Vector3d;

// Incremental 3D hull; returns outward-oriented triangles.
std::vector<std::array<std::size_t, 3>> convex_hull_3d(std::span<const Vector> pts) {
  const std::size_t n = pts.size();
  auto p = [&](std::size_t i) { return Vec3(pts[i][0], pts[i][1], pts[i][2]); };
  const double scale = bounding_scale(pts);
  if (!(scale > 0.0)) throw DegenerateGeometryError("hull: all points coincide");
  const double eps = 1e-12 * scale * scale * scale;

  std::size_t i0 = 0, i1 = 0, i2 = 0, i3 = 0;
  double best = -1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double dd = (p(i) - p(i0)).squaredNorm();
    if (dd > best) best = dd, i1 = i;
  }
  best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = (p(i1) - p(i0)).cross(p(i) - p(i0)).norm();
    if (a > best) best = a, i2 = i;
  }
  if (best <= 1e-12 * scale * scale) throw DegenerateGeometryError("hull: points are collinear");
  const Vec3 base_normal = (p(i1) - p(i0)).cross(p(i2) - p(i0));
  best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::abs(base_normal.dot(p(i) - p(i0)));
    if (v > best) best = v, i3 = i;
  }
  if (best <= eps) throw DegenerateGeometryError("hull: points are coplanar");

  const Vec3 inside = (p(i0) + p(i1) + p(i2) + p(i3)) / 4.0;
  std::vector<std::array<std::size_t, 3>> faces;
  auto add_face = [&](std::size_t a, std::size_t b, std::size_t c) {
    const Vec3 nrm = (p(b) - p(a)).cross(p(c) - p(a));
    if (nrm.dot(p(a) - inside) < 0.0) std::swap(b, c);
    faces.push_back({a, b, c});
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  for (std::size_t q = 0; q < n; ++q) {
    if (q == i0 || q == i1 || q == i2 || q == i3) continue;
    const Vec3 pq = p(q);
    std::vector<bool> visible(faces.size(), false);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const auto& [a, b, c] = faces[f];
      const Vec3 nrm = (p(b) - p(a)).cross(p(c) - p(a));
      if (nrm.dot(pq - p(a)) > eps) visible[f] = any = true;
    }
    if (!any) continue;

    // Directed edges of visible faces; an edge whose reverse is absent
    // lies on the horizon.
    std::map<std::pair<std::size_t, std::size_t>, int> edges;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      const auto& t = faces[f];
      for (int e = 0; e < 3; ++e) edges[{t[e], t[(e + 1) % 3]}] += 1;
    }
    std::vector<std::array<std::size_t, 3>> kept;
    kept.reserve(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) kept.push_back(faces[f]);
    }
    for (const auto& [edge, count] : edges) {
      if (edges.count({edge.second, edge.first}) == 0) {
        kept.push_back({edge.first, edge.second, q});
      }
    }
    faces = std::move(kept);
  }
  return faces;
}

}  // namespace

Vector centroid(std::span<const Vector> points) {
  if (points.empty()) throw StructuralError("centroid of an empty cloud");
  Vector sum = Vector::Zero(points.front().size());
  for (const auto& p : points) sum += p;
  return sum / static_cast<double>(points.size());
}

Vector centroid(const PointCloud& cloud) {
  const auto pts = cloud.positions();
  return centroid(std::span<const Vector>(pts));
}

std::vector<std::size_t> convex_hull_2d(std::span<const Vector> points) {
  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].x() != points[b].x()) return points[a].x() < points[b].x();
    return points[a].y() < points[b].y();
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) { return points[a] == points[b]; }),
              order.end());
  if (order.size() < 3) return order;

  std::vector<std::size_t> hull(2 * order.size());
  std::size_t k = 0;
  for (std::size_t i : order) {
    while (k >= 2 && cross2(points[hull[k - 2]], points[hull[k - 1]], points[i]) <= 0.0) --k;
    hull[k++] = i;
  }
  for (std::size_t t = order.size() - 1, lower = k + 1; t-- > 0;) {
    const std::size_t i = order[t];
    while (k >= lower && cross2(points[hull[k - 2]], points[hull[k - 1]], points[i]) <= 0.0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  return hull;
}

double diameter(std::span<const Vector> points) {
  if (points.size() < 2) throw StructuralError("diameter needs at least two points");
  if (points.front().size() == 2) {
    const auto hull = convex_hull_2d(points);
    return max_pairwise(points, hull);
  }
  std::vector<std::size_t> all(points.size());
  std::iota(all.begin(), all.end(), 0);
  return max_pairwise(points, all);
}

double diameter(const PointCloud& cloud) {
  const auto pts = cloud.positions();
  return diameter(std::span<const Vector>(pts));
}

double eps_dia(const PointCloud& cloud, double d_exact) {
  if (!(d_exact > 0.0)) throw NumericInputError("exact diameter must be positive");
  return std::abs(diameter(cloud) - d_exact);
}

double eps_x(const PointCloud& cloud, const Vector& x_exact) {
  const Vector c = centroid(cloud);
  if (c.size() != x_exact.size()) throw DimensionError("eps_x: dimension mismatch");
  return (c - x_exact).norm();
}

double hull_volume(std::span<const Vector> points) {
  if (points.empty()) throw DegenerateGeometryError("hull of an empty point set");
  const auto d = points.front().size();
  if (points.size() < static_cast<std::size_t>(d + 1)) {
    throw DegenerateGeometryError("hull needs at least d+1 points");
  }
  if (d == 2) {
    const auto hull = convex_hull_2d(points);
    if (hull.size() < 3) throw DegenerateGeometryError("hull: points are collinear");
    const Vector& o = points[hull[0]];
    double twice_area = 0.0;
    for (std::size_t i = 1; i + 1 < hull.size(); ++i) {
      twice_area += cross2(o, points[hull[i]], points[hull[i + 1]]);
    }
    const double scale = bounding_scale(points);
    if (twice_area <= 1e-14 * scale * scale) {
      throw DegenerateGeometryError("hull: points are collinear");
    }
    return 0.5 * twice_area;
  }
  if (d != 3) throw DimensionError("hull volume supports 2D and 3D only");

  const auto faces = convex_hull_3d(points);
  const Vector o = centroid(points);
  const Vec3 origin(o[0], o[1], o[2]);
  auto p = [&](std::size_t i) -> Vec3 { return Vec3(points[i][0], points[i][1], points[i][2]) - origin; };
  double six_volume = 0.0;
  for (const auto& [a, b, c] : faces) six_volume += p(a).dot(p(b).cross(p(c)));
  return six_volume / 6.0;
}

double hull_volume(const PointCloud& cloud) {
  const auto pts = cloud.positions();
  return hull_volume(std::span<const Vector>(pts));
}

double eps_V(double v0, double v_end) {
  if (!(v0 > 0.0)) throw NumericInputError("initial volume must be positive");
  return std::abs(v0 - v_end) / v0;
}

}  // namespace lagmove
