#pragma once

#include <string>
#include <variant>

#include "lagmove/types.hpp"

namespace lagmove {

/// v = omega * (-(y - cy), x - cx). 2D only.
struct RigidRotation {
  Vector center = make_vector(0.0, 0.0);
  double omega = 1.0;
};

/// Spatially constant, time-periodic translation: (15 cos(5t + pi/2), 4 cos(4t)).
struct Lissajous {};

/// v = A x + b in 2D or 3D.
struct Linear {
  Matrix a;
  Vector b;
};

/// Rigid rotation with a time-dependent rate
/// omega(t) = omega0 * (1 + 0.5 sin(2 pi f t)).
struct ModulatedRotation {
  Vector center = make_vector(0.0, 0.0);
  double omega0 = 1.0;
  double frequency = 0.5;

  [[nodiscard]] double rate(double t) const;
};

using FieldKind = std::variant<RigidRotation, Lissajous, Linear, ModulatedRotation>;

Vector eval_rotation(const Vector& x, const Vector& center, double omega);
Vector eval_lissajous(double t);

/// Closed-form trajectory of a point starting at the origin under the
/// Lissajous field: (3 sin(5t + pi/2) - 3, sin(4t)).
Vector exact_lissajous_center(double t);

Vector field_velocity(const FieldKind& kind, const Vector& x, double t);

/// Exact spatial Jacobian, J(r, c) = d v_r / d x_c.
Matrix field_gradient(const FieldKind& kind, const Vector& x, double t);

/// Exact Lagrangian flow map: position at time t of the material point that
/// sits at x0 at time t0. Every built-in field integrates in closed form.
Vector exact_flow(const FieldKind& kind, const Vector& x0, double t0, double t);

/// Spatial dimension the field is defined in.
int field_dim(const FieldKind& kind);

/// Immutable wrapper pairing a field kind with its evaluation routines.
class VelocityField {
 public:
  explicit VelocityField(FieldKind kind);

  [[nodiscard]] Vector evaluate(const Vector& x, double t) const;
  [[nodiscard]] Matrix gradient(const Vector& x, double t) const;
  [[nodiscard]] Vector flow(const Vector& x0, double t0, double t) const {
    return exact_flow(kind_, x0, t0, t);
  }
  [[nodiscard]] std::string descriptor() const;
  [[nodiscard]] int dim() const { return field_dim(kind_); }
  [[nodiscard]] const FieldKind& kind() const { return kind_; }

 private:
  FieldKind kind_;
};

}  // namespace lagmove
