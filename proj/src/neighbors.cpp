#include "lagmove/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lagmove/errors.hpp"

namespace lagmove {

namespace {

using CellCoord = std::array<std::int64_t, 3>;

struct CellHash {
  std::size_t operator()(const CellCoord& c) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

const std::vector<std::int64_t>& NeighborIndex::neighbors_of(std::int64_t id) const {
  return lists_[index_of(id)];
}

std::size_t NeighborIndex::index_of(std::int64_t id) const {
  auto it = slot_.find(id);
  if (it == slot_.end()) throw StructuralError("unknown point id " + std::to_string(id));
  return it->second;
}

NeighborIndex build_index(const PointCloud& cloud, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw NumericInputError("search radius must be positive and finite");
  }
  if (cloud.empty()) throw StructuralError("cannot build a neighbour index over an empty cloud");

  const int d = cloud.dim();
  const auto n = cloud.size();

  NeighborIndex index;
  index.radius_ = radius;
  index.lists_.resize(n);
  index.slot_.reserve(n);

  Vector lo = cloud[0].position;
  Vector hi = cloud[0].position;
  for (std::size_t i = 0; i < n; ++i) {
    lo = lo.cwiseMin(cloud[i].position);
    hi = hi.cwiseMax(cloud[i].position);
    index.slot_.emplace(cloud[i].id, i);
  }

  // Cell edge slightly above r: two points within r can then never land
  // more than one cell apart, even after rounding in the division.
  const double cell = radius * (1.0 + 1e-9);
  index.grid_.origin = lo;
  index.grid_.cell_size = cell;

  std::vector<CellCoord> coords(n, CellCoord{0, 0, 0});
  std::unordered_map<CellCoord, std::vector<std::size_t>, CellHash> cells;
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      coords[i][k] = static_cast<std::int64_t>(std::floor((cloud[i].position[k] - lo[k]) / cell));
    }
    cells[coords[i]].push_back(i);
  }
  for (int k = 0; k < d; ++k) {
    index.grid_.extent[k] = static_cast<std::int64_t>(std::floor((hi[k] - lo[k]) / cell)) + 1;
  }
  index.grid_.occupied_cells = cells.size();

  const double r2 = radius * radius;
  const int span_z = d == 3 ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector& xi = cloud[i].position;
    auto& out = index.lists_[i];
    for (int dz = -span_z; dz <= span_z; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const CellCoord probe{coords[i][0] + dx, coords[i][1] + dy, coords[i][2] + dz};
          auto it = cells.find(probe);
          if (it == cells.end()) continue;
          for (std::size_t j : it->second) {
            if (j == i) continue;
            if ((cloud[j].position - xi).squaredNorm() <= r2) out.push_back(cloud[j].id);
          }
        }
      }
    }
    std::sort(out.begin(), out.end());
  }
  return index;
}

}  // namespace lagmove
