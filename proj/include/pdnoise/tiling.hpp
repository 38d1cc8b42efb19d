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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pdnoise/grid.hpp"

namespace pdnoise {

/// Uniform m x n partition of the die. Tile (x, y) covers
/// (xW/m, (x+1)W/m] x (yH/n, (y+1)H/n], with the first row and column also
/// closed at 0, so a coordinate on a tile boundary belongs to the lower-index
/// tile. Tiles are stored x-major: index = x * n + y.
struct Tiling {
  std::size_t m = 1;  // tiles along x (die width)
  std::size_t n = 1;  // tiles along y (die height)
  double die_width = 0.0;
  double die_height = 0.0;
  std::vector<std::uint32_t> node_tile;
  std::vector<std::uint32_t> load_tile;
  std::vector<Point> centers;

  std::size_t tile_count() const { return m * n; }
  std::size_t index(std::size_t x, std::size_t y) const { return x * n + y; }
  /// Tile containing a die coordinate, boundary points to the lower index.
  std::size_t locate(Point p) const;
  /// Node count per tile.
  std::vector<std::size_t> populations() const;
};

Tiling build_tiling(const PdnGrid& grid, std::size_t m, std::size_t n);

}  // namespace pdnoise
