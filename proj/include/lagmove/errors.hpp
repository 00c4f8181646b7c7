#pragma once

#include <stdexcept>
#include <string>

namespace lagmove {

/// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched list lengths, duplicate ids, unknown ids.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf or out-of-range numeric input.
class NumericInputError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A two-level mover was asked to run without v^(n-1) / grad^(n-1).
class HistoryMissingError : public Error {
 public:
  using Error::Error;
};

/// Least-squares stencil has too few neighbours.
class StencilDeficiencyError : public Error {
 public:
  using Error::Error;
};

/// Normal-equation matrix condition indicator above threshold.
class IllConditionedStencilError : public Error {
 public:
  using Error::Error;
};

/// Collinear / coplanar point sets where a full-dimensional hull is needed.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lagmove
