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
#include <span>
#include <vector>

#include "pdnoise/grid.hpp"
#include "pdnoise/tiling.hpp"
#include "pdnoise/transient.hpp"

namespace pdnoise {

/// Sequence of per-tile summed load currents, one m x n map per stamp.
struct TileCurrentMaps {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t stamps = 0;
  double dt = 1e-12;
  std::vector<double> values;  // [stamp][x * n + y]

  std::size_t tile_count() const { return m * n; }
  std::span<const double> map(std::size_t k) const { return {values.data() + k * m * n, m * n}; }
  std::span<double> map(std::size_t k) { return {values.data() + k * m * n, m * n}; }
  /// Sum over the map at stamp k, accumulated in storage order.
  double total(std::size_t k) const;
};

/// I[k][x][y] = sum of currents of the loads in tile (x, y) at stamp k.
TileCurrentMaps tile_current_maps(const CurrentTrace& trace, const Tiling& tiling, const PdnGrid& grid);

/// mean + 3 * population standard deviation, both accumulated in the order given.
double tail_statistic(std::span<const double> values);

struct CompressionResult {
  double rate = 0.0;        // requested r
  double rate_step = 0.0;   // delta r
  double split = 0.0;       // chosen r_s
  double d_min = 0.0;       // |(mu_s + 3 sigma_s) - (mu_c + 3 sigma_c)| at r_s
  std::size_t low_count = 0;       // stamps taken from the bottom of the sorted totals
  std::vector<std::size_t> kept;   // chronological
  TileCurrentMaps maps;            // kept maps, chronological
};

/// Keeps round(r N) stamps: the floor(r0 N) smallest totals plus the largest
/// remaining ones, with r0 scanned over {0, dr, 2dr, ...} <= r and chosen to
/// best preserve mean + 3 sigma of the per-stamp totals. Sorting is stable
/// (ties broken by stamp index) and the first minimum wins. Statistics of a
/// candidate set are accumulated in chronological order.
///
/// Throws InvalidRate unless 0 < r < 1, dr > 0 and round(r N) >= 1;
/// InvalidArgument if N < 2.
CompressionResult temporal_compress(const TileCurrentMaps& maps, double r, double dr);

/// Number of scanned r0 candidates; r0_i = i * dr.
std::size_t split_candidate_count(double r, double dr);

}  // namespace pdnoise
