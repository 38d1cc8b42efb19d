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

#include "pdnoise/features.hpp"

#include <algorithm>
#include <cmath>

#include "pdnoise/error.hpp"

namespace pdnoise {

DistanceTensor distance_tensor(const PdnGrid& grid, const Tiling& tiling) {
  if (tiling.die_width != grid.die_width || tiling.die_height != grid.die_height) {
    throw InvalidArgument("distance_tensor: tiling was built for a different die");
  }
  DistanceTensor d;
  d.bumps = grid.bump_count();
  d.m = tiling.m;
  d.n = tiling.n;
  d.values.resize(d.bumps * d.m * d.n);
  for (std::size_t b = 0; b < d.bumps; ++b) {
    const Point bump = grid.nodes.at(grid.bumps[b].node);
    for (std::size_t t = 0; t < tiling.tile_count(); ++t) {
      d.values[b * tiling.tile_count() + t] = std::hypot(tiling.centers[t].x - bump.x, tiling.centers[t].y - bump.y);
    }
  }
  return d;
}

std::vector<double> tile_signature(const TileCurrentMaps& maps) {
  if (maps.stamps == 0) throw InvalidArgument("tile_signature: no stamps");
  const std::size_t tiles = maps.tile_count();
  const auto count = static_cast<double>(maps.stamps);
  std::vector<double> mean(tiles, 0.0), sq(tiles, 0.0);
  for (std::size_t k = 0; k < maps.stamps; ++k) {
    const auto map = maps.map(k);
    for (std::size_t t = 0; t < tiles; ++t) mean[t] += map[t];
  }
  for (auto& v : mean) v /= count;
  for (std::size_t k = 0; k < maps.stamps; ++k) {
    const auto map = maps.map(k);
    for (std::size_t t = 0; t < tiles; ++t) sq[t] += (map[t] - mean[t]) * (map[t] - mean[t]);
  }
  std::vector<double> sig(tiles);
  for (std::size_t t = 0; t < tiles; ++t) sig[t] = mean[t] + 3.0 * std::sqrt(sq[t] / count);
  return sig;
}

void check_sample(const Sample& s) {
  if (!s.distance) throw InvalidArgument("sample: missing distance tensor");
  if (s.maps.stamps < 1) throw InvalidArgument("sample: no current maps");
  if (s.maps.values.size() != s.maps.stamps * s.maps.tile_count()) throw ShapeMismatch("sample: malformed maps");
  if (s.distance->m != s.maps.m || s.distance->n != s.maps.n) {
    throw ShapeMismatch("sample: distance tensor and current maps disagree on tiling");
  }
  if (s.truth && (s.truth->m != s.maps.m || s.truth->n != s.maps.n)) {
    throw ShapeMismatch("sample: truth map and current maps disagree on tiling");
  }
}

Normalization fit_normalization(std::span<const Sample> train, double die_width, double die_height) {
  if (train.empty()) throw InvalidArgument("fit_normalization: no training samples");
  double max_current = 0.0;
  double max_noise = 0.0;
  for (const auto& s : train) {
    for (double v : s.maps.values) max_current = std::max(max_current, v);
    if (s.truth) max_noise = std::max(max_noise, s.truth->max());
  }
  Normalization norm;
  norm.fitted = true;
  norm.current_scale = max_current > 0.0 ? 1.0 / max_current : 1.0;
  norm.distance_scale = 1.0 / std::hypot(die_width, die_height);
  norm.noise_scale = max_noise > 0.0 ? max_noise : 1.0;
  return norm;
}

namespace {

Sample rescale(const Sample& s, double current, double distance) {
  Sample out = s;
  for (auto& v : out.maps.values) v *= current;
  if (s.distance) {
    auto d = std::make_shared<DistanceTensor>(*s.distance);
    for (auto& v : d->values) v *= distance;
    out.distance = std::move(d);
  }
  return out;
}

}  // namespace

Sample normalize_features(const Sample& s, const Normalization& norm) {
  if (!norm.fitted) throw InvalidArgument("normalize_features: normalization statistics are missing");
  return rescale(s, norm.current_scale, norm.distance_scale);
}

Sample denormalize_features(const Sample& s, const Normalization& norm) {
  if (!norm.fitted) throw InvalidArgument("denormalize_features: normalization statistics are missing");
  return rescale(s, 1.0 / norm.current_scale, 1.0 / norm.distance_scale);
}

}  // namespace pdnoise
