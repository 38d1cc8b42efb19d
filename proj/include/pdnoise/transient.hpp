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
#include <functional>
#include <span>
#include <vector>

#include "pdnoise/grid.hpp"
#include "pdnoise/system.hpp"
#include "pdnoise/tiling.hpp"

namespace pdnoise {

/// Switching current drawn by every load, sampled on a uniform time grid.
/// Samples are stamp-major: samples[k * loads + l].
struct CurrentTrace {
  double dt = 1e-12;  // s
  std::size_t stamps = 0;
  std::size_t loads = 0;
  std::vector<double> samples;  // A

  CurrentTrace() = default;
  CurrentTrace(double dt, std::size_t stamps, std::size_t loads);

  double& at(std::size_t k, std::size_t l) { return samples[k * loads + l]; }
  double at(std::size_t k, std::size_t l) const { return samples[k * loads + l]; }
  std::span<const double> stamp(std::size_t k) const { return {samples.data() + k * loads, loads}; }
  double total(std::size_t k) const;
};

/// Checks the trace invariants (N >= 1, currents >= 0, sizes consistent).
void validate_trace(const CurrentTrace& trace);

/// Node droops (V below vdd) for stamps 1..N, stamp-major.
struct DroopSequence {
  std::size_t nodes = 0;
  std::size_t stamps = 0;
  std::vector<double> values;

  std::span<const double> stamp(std::size_t k) const { return {values.data() + k * nodes, nodes}; }
  double at(std::size_t k, std::size_t i) const { return values[k * nodes + i]; }
  double max() const;
};

/// Worst-case droop per tile.
struct NoiseMap {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> values;  // V, x-major like Tiling
  /// Tiles that contain no grid node; their value is 0.
  std::vector<std::size_t> empty_tiles;

  NoiseMap() = default;
  NoiseMap(std::size_t m, std::size_t n) : m(m), n(n), values(m * n, 0.0) {}
  double at(std::size_t x, std::size_t y) const { return values[x * n + y]; }
  double max() const;
};

using StampCallback = std::function<void(std::size_t stamp, std::span<const double> droop)>;

/// Backward-Euler transient solve from a quiescent start (all droops 0):
///   A v[k] = (C/dt) v[k-1] + i[k] - sum_b h_b j_b[k-1]
/// where j_b is the bump branch current. `sys` must be factored for trace.dt.
/// Calls on_stamp for k = 0..N-1 (stamp k is the state after sample k).
void simulate(const PdnGrid& grid, const SystemMatrix& sys, const CurrentTrace& trace,
              const StampCallback& on_stamp);

DroopSequence simulate(const PdnGrid& grid, const SystemMatrix& sys, const CurrentTrace& trace);

/// Stamps and factors internally.
DroopSequence simulate(const PdnGrid& grid, const CurrentTrace& trace);

/// Streaming per-tile maximum; every tile starts at 0 (the quiescent state).
class TileNoiseAccumulator {
 public:
  explicit TileNoiseAccumulator(const Tiling& tiling);
  void add(std::span<const double> droop);
  NoiseMap finish() const;

 private:
  const Tiling* tiling_;
  NoiseMap map_;
};

/// Per-tile max over nodes and stamps. Empty tiles get 0 and are listed in
/// NoiseMap::empty_tiles.
NoiseMap worst_case_tile_noise(const DroopSequence& droops, const Tiling& tiling);

/// simulate + worst_case_tile_noise without materializing the droop history.
NoiseMap simulate_worst_case(const PdnGrid& grid, const SystemMatrix& sys, const CurrentTrace& trace,
                             const Tiling& tiling);

/// Static solve G v = i with per-node steady currents (A).
std::vector<double> dc_solve(const PdnGrid& grid, std::span<const double> node_currents);

/// Per-node currents at stamp k (loads scattered onto their nodes).
void scatter_loads(const PdnGrid& grid, std::span<const double> load_currents, std::span<double> node_currents);

}  // namespace pdnoise
