#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lagmove/cloud.hpp"
#include "lagmove/neighbors.hpp"

namespace lagmove {

struct WlsqOptions {
  /// w(r) = exp(-weight_exponent * r^2 / h^2), h = cloud smoothing length.
  double weight_exponent = 6.0;
  /// Fits whose normal matrix has eigenvalue ratio above this are rejected.
  double condition_threshold = 1e12;
};

/// Result of one weighted least-squares gradient fit.
struct StencilFit {
  std::int64_t id = 0;
  std::vector<std::int64_t> neighbor_ids;
  std::vector<double> weights;
  double condition = 0.0;
  Matrix gradient;
};

/// Fits A minimising sum_j w_j |v_j - v_i - A (x_j - x_i)|^2 over the
/// neighbours of `id`, using the cloud's current positions and velocities.
///
/// Throws StencilDeficiencyError when fewer than d neighbours exist and
/// IllConditionedStencilError when the normal matrix is (near) singular.
StencilFit wlsq_gradient(const PointCloud& cloud, const NeighborIndex& index, std::int64_t id,
                         const WlsqOptions& options = {});

struct GradientBatchOptions {
  WlsqOptions wlsq;
  /// Substitute the zero matrix for points whose fit fails instead of throwing.
  bool zero_fallback = true;
  /// Receives one message per fallback. Defaults to stderr when empty.
  std::function<void(const std::string&)> warn;
};

/// Index-aligned gradients for every point in the cloud.
std::vector<Matrix> all_gradients(const PointCloud& cloud, const NeighborIndex& index,
                                  const GradientBatchOptions& options = {});

}  // namespace lagmove
