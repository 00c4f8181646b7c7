#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lagmove/types.hpp"

namespace lagmove {

/// One Lagrangian point with its two-level kinematic history.
///
/// velocity_prev / grad_velocity_prev are only meaningful once has_history
/// is set; before that movers must not read them.
struct Point {
  std::int64_t id = 0;
  Vector position;
  Vector velocity;
  Vector velocity_prev;
  Matrix grad_velocity;
  Matrix grad_velocity_prev;
  double payload = 0.0;
  bool has_history = false;
};

/// A point cloud together with its clock.
///
/// The clock runs on a fixed step size: time == initial_time + step * dt.
/// The only exception is a driver-shortened final step, which lands the
/// clock on an explicit end time (see advance_history's overload).
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(std::vector<Point> points, double smoothing_length, double dt,
             double initial_time = 0.0);

  [[nodiscard]] int dim() const;
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] bool empty() const { return points_.empty(); }

  [[nodiscard]] const std::vector<Point>& points() const { return points_; }
  [[nodiscard]] std::vector<Point>& points() { return points_; }
  [[nodiscard]] const Point& operator[](std::size_t i) const { return points_[i]; }
  [[nodiscard]] Point& operator[](std::size_t i) { return points_[i]; }

  [[nodiscard]] double smoothing_length() const { return smoothing_length_; }
  [[nodiscard]] double dt() const { return dt_; }
  [[nodiscard]] double time() const { return time_; }
  [[nodiscard]] double initial_time() const { return initial_time_; }
  [[nodiscard]] std::int64_t step() const { return step_; }

  /// Index of the point with the given id. Throws StructuralError if absent.
  [[nodiscard]] std::size_t index_of(std::int64_t id) const;

  [[nodiscard]] std::vector<Vector> positions() const;

 private:
  friend PointCloud advance_history(const PointCloud&, std::span<const Vector>,
                                    std::span<const Matrix>);
  friend PointCloud advance_history(const PointCloud&, std::span<const Vector>,
                                    std::span<const Matrix>, double);

  std::vector<Point> points_;
  double smoothing_length_ = 1.0;
  double dt_ = 1.0;
  double initial_time_ = 0.0;
  double time_ = 0.0;
  std::int64_t step_ = 0;
};

/// Shifts current velocity/gradient into history and installs the fresh
/// samples; increments the step and recomputes time from the step count.
PointCloud advance_history(const PointCloud& cloud, std::span<const Vector> new_velocities,
                           std::span<const Matrix> new_gradients);

/// Same as above but sets the clock to `time_override` (shortened last step).
PointCloud advance_history(const PointCloud& cloud, std::span<const Vector> new_velocities,
                           std::span<const Matrix> new_gradients, double time_override);

/// position_i += displacement_i. Nothing else changes.
PointCloud apply_displacements(const PointCloud& cloud, std::span<const Vector> displacements);

}  // namespace lagmove
