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

#include "pdnoise/compress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pdnoise/error.hpp"

namespace pdnoise {
namespace {

// Absorbs representation error in i * dr and r0 * N (0.1 * 3 > 0.3 in binary).
constexpr double kGridSlack = 1e-9;

}  // namespace

double TileCurrentMaps::total(std::size_t k) const {
  double s = 0.0;
  for (double v : map(k)) s += v;
  return s;
}

TileCurrentMaps tile_current_maps(const CurrentTrace& trace, const Tiling& tiling, const PdnGrid& grid) {
  if (trace.loads != grid.load_count() || tiling.load_tile.size() != grid.load_count()) {
    throw ShapeMismatch("tile_current_maps: trace has " + std::to_string(trace.loads) +
                        " waveforms, grid has " + std::to_string(grid.load_count()) + " loads");
  }
  TileCurrentMaps out;
  out.m = tiling.m;
  out.n = tiling.n;
  out.stamps = trace.stamps;
  out.dt = trace.dt;
  out.values.assign(out.stamps * out.tile_count(), 0.0);
  for (std::size_t k = 0; k < trace.stamps; ++k) {
    auto map = out.map(k);
    const auto currents = trace.stamp(k);
    for (std::size_t l = 0; l < trace.loads; ++l) map[tiling.load_tile[l]] += currents[l];
  }
  return out;
}

double tail_statistic(std::span<const double> values) {
  const auto count = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / count;
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return mean + 3.0 * std::sqrt(sq / count);
}

std::size_t split_candidate_count(double r, double dr) {
  return static_cast<std::size_t>(std::floor(r / dr + kGridSlack)) + 1;
}

CompressionResult temporal_compress(const TileCurrentMaps& maps, double r, double dr) {
  if (!(r > 0.0 && r < 1.0)) throw InvalidRate("temporal_compress: r must lie in (0, 1)");
  if (!(dr > 0.0)) throw InvalidRate("temporal_compress: rate step must be positive");
  const std::size_t n = maps.stamps;
  if (n < 2) throw InvalidArgument("temporal_compress: need at least two stamps");
  const auto keep = static_cast<std::size_t>(std::llround(r * static_cast<double>(n)));
  if (keep == 0) {
    throw InvalidRate("temporal_compress: r * N rounds to zero (r = " + std::to_string(r) +
                      ", N = " + std::to_string(n) + ")");
  }

  std::vector<double> totals(n);
  for (std::size_t k = 0; k < n; ++k) totals[k] = maps.total(k);
  const double target = tail_statistic(totals);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return totals[a] < totals[b]; });

  std::vector<char> mask(n);
  std::vector<double> kept_totals;
  kept_totals.reserve(keep);
  auto select = [&](std::size_t low) {
    std::fill(mask.begin(), mask.end(), 0);
    for (std::size_t p = 0; p < low; ++p) mask[order[p]] = 1;
    for (std::size_t p = n - (keep - low); p < n; ++p) mask[order[p]] = 1;
  };

  CompressionResult res;
  res.rate = r;
  res.rate_step = dr;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t candidates = split_candidate_count(r, dr);
  for (std::size_t i = 0; i < candidates; ++i) {
    const double r0 = static_cast<double>(i) * dr;
    const std::size_t low =
        std::min(keep, static_cast<std::size_t>(std::floor(r0 * static_cast<double>(n) + kGridSlack)));
    select(low);
    kept_totals.clear();
    for (std::size_t k = 0; k < n; ++k) {
      if (mask[k]) kept_totals.push_back(totals[k]);
    }
    const double d = std::abs(target - tail_statistic(kept_totals));
    if (d < best) {
      best = d;
      res.split = r0;
      res.low_count = low;
    }
  }
  res.d_min = best;

  select(res.low_count);
  res.maps.m = maps.m;
  res.maps.n = maps.n;
  res.maps.dt = maps.dt;
  res.maps.stamps = keep;
  res.maps.values.reserve(keep * maps.tile_count());
  for (std::size_t k = 0; k < n; ++k) {
    if (!mask[k]) continue;
    res.kept.push_back(k);
    const auto src = maps.map(k);
    res.maps.values.insert(res.maps.values.end(), src.begin(), src.end());
  }
  return res;
}

}  // namespace pdnoise
