// Copyright 2026 The pdnoise Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pdnoise/tiling.hpp"

#include <algorithm>
#include <cmath>

#include "pdnoise/error.hpp"

namespace pdnoise {
namespace {

std::size_t axis_tile(double coord, double extent, std::size_t count) {
  // ceil(coord * count / extent) - 1 puts an exact boundary in the lower tile.
  const double scaled = coord * static_cast<double>(count) / extent;
  const double c = std::ceil(scaled) - 1.0;
  if (c <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(c), count - 1);
}

}  // namespace

std::size_t Tiling::locate(Point p) const {
  return index(axis_tile(p.x, die_width, m), axis_tile(p.y, die_height, n));
}

std::vector<std::size_t> Tiling::populations() const {
  std::vector<std::size_t> pop(tile_count(), 0);
  for (auto t : node_tile) ++pop[t];
  return pop;
}

Tiling build_tiling(const PdnGrid& grid, std::size_t m, std::size_t n) {
  if (m < 1 || n < 1) throw InvalidArgument("tiling: m and n must be >= 1");
  if (!(grid.die_width > 0.0) || !(grid.die_height > 0.0)) {
    throw InvalidArgument("tiling: die extents must be positive");
  }
  Tiling t;
  t.m = m;
  t.n = n;
  t.die_width = grid.die_width;
  t.die_height = grid.die_height;
  t.centers.resize(m * n);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      t.centers[t.index(x, y)] = {(static_cast<double>(x) + 0.5) * grid.die_width / static_cast<double>(m),
                                  (static_cast<double>(y) + 0.5) * grid.die_height / static_cast<double>(n)};
    }
  }
  t.node_tile.resize(grid.node_count());
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    t.node_tile[i] = static_cast<std::uint32_t>(t.locate(grid.nodes[i]));
  }
  t.load_tile.resize(grid.load_count());
  for (std::size_t l = 0; l < grid.load_count(); ++l) {
    const auto node = grid.loads[l];
    if (node >= grid.node_count()) throw InvalidArgument("tiling: load refers to missing node");
    t.load_tile[l] = t.node_tile[node];
  }
  return t;
}

}  // namespace pdnoise
