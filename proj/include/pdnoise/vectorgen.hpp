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
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "pdnoise/grid.hpp"
#include "pdnoise/transient.hpp"

namespace pdnoise {

/// Random switching activity.
///
/// Loads are grouped into square functional blocks (activity_blocks per die
/// side). Each block alternates idle and burst segments with lengths drawn
/// uniformly from the given ranges; a burst has one amplitude drawn from
/// [amplitude_min, amplitude_max] and linear ramps of `ramp` stamps at both
/// ends. Every load scales its block waveform by a per-trace factor in
/// [load_scale_min, 1]. Idle current is exactly zero. With activity_blocks = 0
/// every load gets its own schedule.
struct VectorSpec {
  std::size_t stamps = 2000;
  double dt = 1e-12;
  std::size_t idle_min = 100;
  std::size_t idle_max = 400;
  std::size_t burst_min = 40;
  std::size_t burst_max = 160;
  double amplitude_min = 0.5e-3;  // A
  double amplitude_max = 2e-3;    // A
  std::size_t ramp = 5;
  std::size_t activity_blocks = 4;
  double load_scale_min = 0.5;
  std::uint64_t seed = 1;

  /// Long-run fraction of stamps spent in bursts.
  double expected_duty() const;
};

void validate_spec(const VectorSpec& spec);

/// Trace `index` of the family defined by spec.seed. Independent of count,
/// so traces can be generated in parallel or one at a time.
CurrentTrace generate_vector(const VectorSpec& spec, const PdnGrid& grid, std::size_t index);

std::vector<CurrentTrace> generate_vectors(const VectorSpec& spec, const PdnGrid& grid, std::size_t count,
                                           std::size_t threads = 1);

inline constexpr int kVectorSpecSchemaMajor = 1;
nlohmann::json to_json(const VectorSpec& spec);
VectorSpec vector_spec_from_json(const nlohmann::json& j);

/// Traces are stored as (stamps, loads) f64 tensors; dt lives in the manifest.
void save_trace(const CurrentTrace& trace, const std::filesystem::path& path);
CurrentTrace load_trace(const std::filesystem::path& path, double dt);

}  // namespace pdnoise
