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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdnoise/compress.hpp"
#include "pdnoise/grid.hpp"
#include "pdnoise/tiling.hpp"
#include "pdnoise/transient.hpp"

namespace pdnoise {

/// Euclidean distance (um) from every tile centre to every bump,
/// values[b * m * n + x * n + y]. Bump order is grid declaration order.
struct DistanceTensor {
  std::size_t bumps = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> values;

  std::span<const double> channel(std::size_t b) const { return {values.data() + b * m * n, m * n}; }
  double at(std::size_t b, std::size_t x, std::size_t y) const { return values[(b * m + x) * n + y]; }
};

DistanceTensor distance_tensor(const PdnGrid& grid, const Tiling& tiling);

/// Per-tile mean + 3 sigma over all stamps of uncompressed maps, the sample
/// signature used by training-set expansion.
std::vector<double> tile_signature(const TileCurrentMaps& maps);

struct SampleProvenance {
  std::string grid_id;
  std::size_t trace_id = 0;
  double rate = 0.0;
  double split = 0.0;
};

/// One model input (plus ground truth when known), in physical units.
struct Sample {
  TileCurrentMaps maps;  // compressed current maps C_I, A
  std::shared_ptr<const DistanceTensor> distance;
  std::optional<NoiseMap> truth;  // V
  std::vector<double> signature;
  SampleProvenance provenance;
};

void check_sample(const Sample& s);

/// Scale factors applied to model inputs; stored with the model.
struct Normalization {
  bool fitted = false;
  double current_scale = 1.0;   // 1 / max training tile current
  double distance_scale = 1.0;  // 1 / die diagonal
  double noise_scale = 1.0;     // V per unit of network output

  friend bool operator==(const Normalization&, const Normalization&) = default;
};

/// current_scale from the largest tile current over the given samples,
/// distance_scale from the die diagonal, noise_scale from the largest truth.
Normalization fit_normalization(std::span<const Sample> train, double die_width, double die_height);

/// Scales currents and distances; truth stays in volts. Throws if `norm` is
/// not fitted.
Sample normalize_features(const Sample& s, const Normalization& norm);
Sample denormalize_features(const Sample& s, const Normalization& norm);

}  // namespace pdnoise
