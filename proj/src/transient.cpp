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

#include "pdnoise/transient.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "pdnoise/error.hpp"

namespace pdnoise {

CurrentTrace::CurrentTrace(double dt, std::size_t stamps, std::size_t loads)
    : dt(dt), stamps(stamps), loads(loads), samples(stamps * loads, 0.0) {}

double CurrentTrace::total(std::size_t k) const {
  double s = 0.0;
  for (double v : stamp(k)) s += v;
  return s;
}

void validate_trace(const CurrentTrace& trace) {
  if (!(trace.dt > 0.0)) throw InvalidArgument("trace: dt must be positive");
  if (trace.stamps < 1) throw InvalidArgument("trace: needs at least one stamp");
  if (trace.samples.size() != trace.stamps * trace.loads) {
    throw ShapeMismatch("trace: sample count does not match stamps x loads");
  }
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    if (!(trace.samples[i] >= 0.0) || !std::isfinite(trace.samples[i])) {
      throw InvalidArgument("trace: negative or non-finite current at stamp " +
                            std::to_string(i / std::max<std::size_t>(trace.loads, 1)));
    }
  }
}

double DroopSequence::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

double NoiseMap::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

void scatter_loads(const PdnGrid& grid, std::span<const double> load_currents, std::span<double> node_currents) {
  for (std::size_t l = 0; l < grid.loads.size(); ++l) node_currents[grid.loads[l]] += load_currents[l];
}

void simulate(const PdnGrid& grid, const SystemMatrix& sys, const CurrentTrace& trace,
              const StampCallback& on_stamp) {
  const std::size_t n = grid.node_count();
  if (!sys.factored()) throw InvalidArgument("simulate: system matrix is not factored");
  if (sys.dimension() != n) throw ShapeMismatch("simulate: system dimension does not match grid");
  if (trace.loads != grid.load_count()) {
    throw ShapeMismatch("simulate: trace has " + std::to_string(trace.loads) + " waveforms, grid has " +
                        std::to_string(grid.load_count()) + " loads");
  }
  if (sys.is_dc() || std::abs(sys.dt() - trace.dt) > 1e-12 * trace.dt) {
    throw InvalidArgument("simulate: system was stamped for a different time step");
  }
  if (trace.samples.size() != trace.stamps * trace.loads) throw ShapeMismatch("simulate: malformed trace");

  const auto& chol = sys.factor();
  const auto& cdt = sys.cap_over_dt();
  const auto& branches = sys.branches();
  std::vector<double> v(n, 0.0), rhs(n), scratch(n);
  std::vector<double> branch_current(branches.size(), 0.0);

  for (std::size_t k = 0; k < trace.stamps; ++k) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = cdt[i] * v[i];
    scatter_loads(grid, trace.stamp(k), rhs);
    for (std::size_t b = 0; b < branches.size(); ++b) {
      rhs[branches[b].node] -= branches[b].history_gain * branch_current[b];
    }
    chol.solve_in_place(rhs, scratch);
    v.swap(rhs);
    for (std::size_t b = 0; b < branches.size(); ++b) {
      const auto& br = branches[b];
      branch_current[b] = br.conductance * v[br.node] + br.history_gain * branch_current[b];
    }
    on_stamp(k, v);
  }
}

DroopSequence simulate(const PdnGrid& grid, const SystemMatrix& sys, const CurrentTrace& trace) {
  DroopSequence out;
  out.nodes = grid.node_count();
  out.stamps = trace.stamps;
  out.values.resize(out.nodes * out.stamps);
  simulate(grid, sys, trace, [&](std::size_t k, std::span<const double> v) {
    std::copy(v.begin(), v.end(), out.values.begin() + static_cast<std::ptrdiff_t>(k * out.nodes));
  });
  return out;
}

DroopSequence simulate(const PdnGrid& grid, const CurrentTrace& trace) {
  return simulate(grid, factor(stamp_system(grid, trace.dt)), trace);
}

TileNoiseAccumulator::TileNoiseAccumulator(const Tiling& tiling)
    : tiling_(&tiling), map_(tiling.m, tiling.n) {
  const auto pop = tiling.populations();
  for (std::size_t t = 0; t < pop.size(); ++t) {
    if (pop[t] == 0) map_.empty_tiles.push_back(t);
  }
  if (!map_.empty_tiles.empty()) {
    spdlog::warn("{} of {} tiles contain no grid node; their noise is reported as 0", map_.empty_tiles.size(),
                 pop.size());
  }
}

void TileNoiseAccumulator::add(std::span<const double> droop) {
  if (droop.size() != tiling_->node_tile.size()) throw ShapeMismatch("tile noise: node count mismatch");
  for (std::size_t i = 0; i < droop.size(); ++i) {
    double& cell = map_.values[tiling_->node_tile[i]];
    cell = std::max(cell, droop[i]);
  }
}

NoiseMap TileNoiseAccumulator::finish() const { return map_; }

NoiseMap worst_case_tile_noise(const DroopSequence& droops, const Tiling& tiling) {
  if (droops.stamps == 0) throw InvalidArgument("tile noise: empty droop sequence");
  TileNoiseAccumulator acc(tiling);
  for (std::size_t k = 0; k < droops.stamps; ++k) acc.add(droops.stamp(k));
  return acc.finish();
}

NoiseMap simulate_worst_case(const PdnGrid& grid, const SystemMatrix& sys, const CurrentTrace& trace,
                             const Tiling& tiling) {
  TileNoiseAccumulator acc(tiling);
  simulate(grid, sys, trace, [&](std::size_t, std::span<const double> v) { acc.add(v); });
  return acc.finish();
}

std::vector<double> dc_solve(const PdnGrid& grid, std::span<const double> node_currents) {
  if (node_currents.size() != grid.node_count()) throw ShapeMismatch("dc_solve: current vector length mismatch");
  const auto sys = factor(stamp_conductance(grid));
  return sys.factor().solve(node_currents);
}

}  // namespace pdnoise
