#pragma once

#include <string>

#include "lagmove/cloud.hpp"

namespace lagmove {

/// Point-movement schemes.
///   M1 - constant velocity over the step.
///   M2 - constant velocity derivative from v^(n) - v^(n-1).
///   M3 - movement along the frozen streamline, exp(grad v^(n) tau) v^(n).
///   M4 - movement with the change of streamlines between t^(n-1) and t^(n).
enum class Scheme { M1, M2, M3, M4 };

struct MoverKind {
  Scheme scheme = Scheme::M1;
  /// Series terms kept in M3/M4 (k = 0 .. terms-1).
  int terms = 5;

  friend bool operator==(const MoverKind&, const MoverKind&) = default;
};

std::string to_string(Scheme scheme);
/// Parses "m1".."m4" (case-insensitive). Throws UsageError otherwise.
Scheme parse_scheme(const std::string& name);

/// Everything a mover needs for one point over one step.
struct MoveContext {
  double dt = 0.0;
  Vector v_n;
  Vector v_prev;
  Matrix grad_n;
  Matrix grad_prev;
  bool has_history = false;
};

MoveContext make_context(const Point& p, double dt);

/// sum_{k=0}^{K-1} A^k dt^(k+1+offset) / (k+1+offset)! * v, by repeated
/// matrix-vector products. offset 0 gives the M3 series, offset 1 the
/// inner sums of M4.
Vector exp_series_apply(const Matrix& a, const Vector& v, double dt, int terms, int offset);

Vector move_m1(const MoveContext& ctx);
Vector move_m2(const MoveContext& ctx);
Vector move_m3(const MoveContext& ctx, int terms = 5);
Vector move_m4(const MoveContext& ctx, int terms = 5);

/// Dispatches on `kind`. Without history M2 falls back to M1 and M4 to M3.
Vector displacement(const MoverKind& kind, const MoveContext& ctx);

}  // namespace lagmove
