#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lagmove/cloud.hpp"

namespace lagmove {

/// Snapshot of the geometric error measures of a cloud.
struct DiagnosticsRecord {
  std::int64_t step = 0;
  double time = 0.0;
  Vector centroid;
  double diameter = 0.0;
  double hull_volume = 0.0;
  double eps_dia = 0.0;
  double eps_x = 0.0;
  double eps_V = 0.0;
};

/// Arithmetic mean of positions. Throws StructuralError on an empty cloud.
Vector centroid(const PointCloud& cloud);
Vector centroid(std::span<const Vector> points);

/// Maximum pairwise distance.
double diameter(const PointCloud& cloud);
double diameter(std::span<const Vector> points);

/// |diameter(cloud) - d_exact|
double eps_dia(const PointCloud& cloud, double d_exact);

/// |centroid(cloud) - x_exact|
double eps_x(const PointCloud& cloud, const Vector& x_exact);

/// Measure (area in 2D, volume in 3D) of the convex hull.
/// Throws DegenerateGeometryError for collinear / coplanar input.
double hull_volume(const PointCloud& cloud);
double hull_volume(std::span<const Vector> points);

/// Indices of the 2D convex hull vertices in counter-clockwise order
/// (Andrew's monotone chain; collinear boundary points dropped).
std::vector<std::size_t> convex_hull_2d(std::span<const Vector> points);

/// |v0 - v_end| / v0. Throws NumericInputError when v0 <= 0.
double eps_V(double v0, double v_end);

}  // namespace lagmove
