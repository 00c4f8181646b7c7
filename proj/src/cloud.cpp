#include "lagmove/cloud.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

#include "lagmove/errors.hpp"

namespace lagmove {

namespace {

void check_count(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw StructuralError(std::string(what) + ": expected " + std::to_string(expected) +
                          " entries, got " + std::to_string(got));
  }
}

void check_dim(long dim, long got, const char* what) {
  if (dim != got) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(got) +
                         " does not match cloud dimension " + std::to_string(dim));
  }
}

}  // namespace

PointCloud::PointCloud(std::vector<Point> points, double smoothing_length, double dt,
                       double initial_time)
    : points_(std::move(points)),
      smoothing_length_(smoothing_length),
      dt_(dt),
      initial_time_(initial_time),
      time_(initial_time) {
  if (!(smoothing_length > 0.0) || !std::isfinite(smoothing_length)) {
    throw NumericInputError("smoothing length must be positive and finite");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw NumericInputError("time step must be positive and finite");
  }
  if (!std::isfinite(initial_time)) throw NumericInputError("initial time must be finite");

  std::unordered_set<std::int64_t> seen;
  const long d = points_.empty() ? 0 : points_.front().position.size();
  if (!points_.empty() && d != 2 && d != 3) {
    throw DimensionError("points must be 2- or 3-dimensional");
  }
  for (auto& p : points_) {
    if (!seen.insert(p.id).second) {
      throw StructuralError("duplicate point id " + std::to_string(p.id));
    }
    check_dim(d, p.position.size(), "position");
    if (p.velocity.size() == 0) p.velocity = Vector::Zero(d);
    if (p.velocity_prev.size() == 0) p.velocity_prev = Vector::Zero(d);
    if (p.grad_velocity.size() == 0) p.grad_velocity = Matrix::Zero(d, d);
    if (p.grad_velocity_prev.size() == 0) p.grad_velocity_prev = Matrix::Zero(d, d);
    check_dim(d, p.velocity.size(), "velocity");
    check_dim(d, p.velocity_prev.size(), "previous velocity");
    check_dim(d, p.grad_velocity.rows(), "gradient");
    check_dim(d, p.grad_velocity_prev.rows(), "previous gradient");
    if (!all_finite(p.position) || !all_finite(p.velocity) || !all_finite(p.grad_velocity) ||
        !std::isfinite(p.payload)) {
      throw NumericInputError("point " + std::to_string(p.id) + " has non-finite state");
    }
  }
}

int PointCloud::dim() const {
  return points_.empty() ? 0 : static_cast<int>(points_.front().position.size());
}

std::size_t PointCloud::index_of(std::int64_t id) const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].id == id) return i;
  }
  throw StructuralError("unknown point id " + std::to_string(id));
}

std::vector<Vector> PointCloud::positions() const {
  std::vector<Vector> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.position);
  return out;
}

PointCloud advance_history(const PointCloud& cloud, std::span<const Vector> new_velocities,
                           std::span<const Matrix> new_gradients) {
  check_count(cloud.size(), new_velocities.size(), "advance_history velocities");
  check_count(cloud.size(), new_gradients.size(), "advance_history gradients");
  const long d = cloud.dim();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    check_dim(d, new_velocities[i].size(), "new velocity");
    check_dim(d, new_gradients[i].rows(), "new gradient");
    check_dim(d, new_gradients[i].cols(), "new gradient");
    if (!all_finite(new_velocities[i]) || !all_finite(new_gradients[i])) {
      throw NumericInputError("advance_history: non-finite sample for point index " +
                              std::to_string(i));
    }
  }

  PointCloud next = cloud;
  for (std::size_t i = 0; i < next.size(); ++i) {
    Point& p = next.points_[i];
    p.velocity_prev = p.velocity;
    p.grad_velocity_prev = p.grad_velocity;
    p.velocity = new_velocities[i];
    p.grad_velocity = new_gradients[i];
    p.has_history = true;
  }
  next.step_ = cloud.step_ + 1;
  next.time_ = cloud.initial_time_ + static_cast<double>(next.step_) * cloud.dt_;
  return next;
}

PointCloud advance_history(const PointCloud& cloud, std::span<const Vector> new_velocities,
                           std::span<const Matrix> new_gradients, double time_override) {
  if (!std::isfinite(time_override)) throw NumericInputError("time override must be finite");
  PointCloud next = advance_history(cloud, new_velocities, new_gradients);
  next.time_ = time_override;
  return next;
}

PointCloud apply_displacements(const PointCloud& cloud, std::span<const Vector> displacements) {
  check_count(cloud.size(), displacements.size(), "apply_displacements");
  const long d = cloud.dim();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    check_dim(d, displacements[i].size(), "displacement");
    if (!all_finite(displacements[i])) {
      throw NumericInputError("apply_displacements: non-finite displacement at index " +
                              std::to_string(i));
    }
  }
  PointCloud next = cloud;
  for (std::size_t i = 0; i < next.size(); ++i) {
    next[i].position += displacements[i];
  }
  return next;
}

}  // namespace lagmove
