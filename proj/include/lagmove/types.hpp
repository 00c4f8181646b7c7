#pragma once

#include <Eigen/Core>

namespace lagmove {

/// Spatial vector of dimension 2 or 3. Storage is inline (no heap).
using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

/// d x d matrix, typically a velocity gradient (row = velocity component,
/// column = spatial derivative direction).
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;

inline Vector make_vector(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

inline Vector make_vector(double x, double y, double z) {
  Vector v(3);
  v << x, y, z;
  return v;
}

inline Matrix make_matrix(double a00, double a01, double a10, double a11) {
  Matrix m(2, 2);
  m << a00, a01, a10, a11;
  return m;
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }
inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace lagmove
