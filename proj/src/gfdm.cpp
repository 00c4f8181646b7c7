#include "lagmove/gfdm.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>
#include <limits>

#include "lagmove/errors.hpp"

namespace lagmove {

StencilFit wlsq_gradient(const PointCloud& cloud, const NeighborIndex& index, std::int64_t id,
                         const WlsqOptions& options) {
  const std::size_t i = index.index_of(id);
  if (i >= cloud.size() || cloud[i].id != id) {
    throw StructuralError("neighbour index does not match the cloud");
  }
  const int d = cloud.dim();
  const double h = cloud.smoothing_length();
  const Point& centre = cloud[i];
  const auto& ids = index.at_index(i);

  StencilFit fit;
  fit.id = id;
  fit.neighbor_ids = ids;
  if (static_cast<int>(ids.size()) < d) {
    throw StencilDeficiencyError("point " + std::to_string(id) + " has " +
                                 std::to_string(ids.size()) + " neighbours, need at least " +
                                 std::to_string(d));
  }

  // Offsets are scaled by h so the normal matrix is O(1) regardless of
  // the length unit.
  Matrix normal = Matrix::Zero(d, d);
  Matrix rhs = Matrix::Zero(d, d);  // column c: sum w s dv_c
  fit.weights.reserve(ids.size());
  for (auto nid : ids) {
    const Point& other = cloud[index.index_of(nid)];
    const Vector s = (other.position - centre.position) / h;
    const double w = std::exp(-options.weight_exponent * s.squaredNorm());
    const Vector dv = other.velocity - centre.velocity;
    fit.weights.push_back(w);
    normal.noalias() += w * s * s.transpose();
    rhs.noalias() += w * s * dv.transpose();
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(normal, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  fit.condition = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (!(fit.condition <= options.condition_threshold)) {
    throw IllConditionedStencilError("point " + std::to_string(id) +
                                     ": normal matrix condition indicator " +
                                     std::to_string(fit.condition) + " above threshold");
  }

  const Matrix scaled = normal.llt().solve(rhs);  // row k, col c: h * dv_c/dx_k
  fit.gradient = scaled.transpose() / h;
  if (!all_finite(fit.gradient)) {
    throw IllConditionedStencilError("point " + std::to_string(id) + ": non-finite gradient fit");
  }
  return fit;
}

std::vector<Matrix> all_gradients(const PointCloud& cloud, const NeighborIndex& index,
                                  const GradientBatchOptions& options) {
  const int d = cloud.dim();
  std::vector<Matrix> out;
  out.reserve(cloud.size());
  auto fall_back = [&](const Error& e) {
    if (options.warn) {
      options.warn(e.what());
    } else {
      std::cerr << "warning: " << e.what() << ", using zero gradient\n";
    }
    out.push_back(Matrix::Zero(d, d));
  };
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    try {
      out.push_back(wlsq_gradient(cloud, index, cloud[i].id, options.wlsq).gradient);
    } catch (const StencilDeficiencyError& e) {
      if (!options.zero_fallback) throw;
      fall_back(e);
    } catch (const IllConditionedStencilError& e) {
      if (!options.zero_fallback) throw;
      fall_back(e);
    }
  }
  return out;
}

}  // namespace lagmove
