#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "lagmove/cloud.hpp"

namespace lagmove {

/// Uniform cell grid metadata. Only occupied cells are stored.
struct CellGrid {
  Vector origin;
  double cell_size = 0.0;
  std::array<std::int64_t, 3> extent{1, 1, 1};  // cells per axis
  std::size_t occupied_cells = 0;
};

/// Fixed-radius neighbour lists over a point cloud.
///
/// j is a neighbour of i iff j != i and |x_j - x_i| <= radius (ties included).
/// Lists hold point ids sorted ascending. Immutable after construction.
class NeighborIndex {
 public:
  [[nodiscard]] double search_radius() const { return radius_; }
  [[nodiscard]] const CellGrid& grid() const { return grid_; }
  [[nodiscard]] std::size_t size() const { return lists_.size(); }

  /// Neighbour ids of the point with the given id. Throws StructuralError
  /// for unknown ids.
  [[nodiscard]] const std::vector<std::int64_t>& neighbors_of(std::int64_t id) const;

  /// Neighbour ids of the point at cloud index `i`.
  [[nodiscard]] const std::vector<std::int64_t>& at_index(std::size_t i) const {
    return lists_[i];
  }

  /// Cloud index of a point id.
  [[nodiscard]] std::size_t index_of(std::int64_t id) const;

 private:
  friend NeighborIndex build_index(const PointCloud& cloud, double radius);

  double radius_ = 0.0;
  CellGrid grid_;
  std::vector<std::vector<std::int64_t>> lists_;
  std::unordered_map<std::int64_t, std::size_t> slot_;
};

NeighborIndex build_index(const PointCloud& cloud, double radius);

inline const std::vector<std::int64_t>& neighbors_of(const NeighborIndex& index, std::int64_t id) {
  return index.neighbors_of(id);
}

}  // namespace lagmove
