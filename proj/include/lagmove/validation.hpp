#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "lagmove/types.hpp"

namespace lagmove {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Series routine under test; swapped out by fixtures to prove the suite
/// catches a corrupted coefficient.
using SeriesFn = std::function<Vector(const Matrix&, const Vector&, double, int, int)>;

/// Built-in property suite: reduction identities, gradient exactness,
/// series against a matrix-exponential oracle, neighbour search against
/// brute force.
std::vector<CheckResult> run_validation(const SeriesFn& series);
std::vector<CheckResult> run_validation();

/// Prints one line per check; returns true when all passed.
bool report(const std::vector<CheckResult>& results, std::ostream& os);

/// sum_{k>=0} A^k dt^(k+1+offset)/(k+1+offset)! v via the exponential of an
/// augmented block matrix (Eigen's scaling-and-squaring Pade expm).
Vector series_via_expm(const Matrix& a, const Vector& v, double dt, int offset);

}  // namespace lagmove
