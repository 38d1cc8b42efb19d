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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pdnoise {

/// Position on the die, in micrometres.
struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Wire segment between two grid nodes.
struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  double conductance = 0.0;  // S
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Package connection: a series R (and optional L) branch from a grid node to
/// the ideal supply.
struct Bump {
  std::size_t node = 0;
  double resistance = 0.0;  // Ohm
  double inductance = 0.0;  // H, 0 disables the inductor
  friend bool operator==(const Bump&, const Bump&) = default;
};

/// Single-rail on-die power grid.
///
/// The electrical model is a stand-in for a sign-off extraction: an RC mesh
/// with per-node decoupling capacitance to ground and a lumped R(L) package
/// branch per bump. Loads are current sinks attached to nodes.
struct PdnGrid {
  double die_width = 0.0;   // um
  double die_height = 0.0;  // um
  double vdd = 1.0;         // V
  std::vector<Point> nodes;
  std::vector<Edge> edges;
  std::vector<double> node_caps;  // F
  std::vector<Bump> bumps;
  std::vector<std::size_t> loads;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t bump_count() const { return bumps.size(); }
  std::size_t load_count() const { return loads.size(); }

  friend bool operator==(const PdnGrid&, const PdnGrid&) = default;
};

/// Parameters of a synthesized regular-mesh grid.
struct GridSpec {
  double die_width_um = 240.0;
  double die_height_um = 240.0;
  double pitch_um = 10.0;
  std::size_t bump_count = 16;
  std::size_t load_count = 64;
  double wire_resistance_ohm_per_um = 0.02;
  double cap_min_f = 50e-15;
  double cap_max_f = 150e-15;
  double bump_resistance_ohm = 0.5;
  double bump_inductance_h = 0.0;
  /// Bump offset from its lattice-cell centre, as a fraction of half a cell.
  double bump_jitter = 0.5;
  double vdd_v = 1.0;
  std::uint64_t seed = 1;

  /// Nodes along x and y implied by the die size and pitch.
  std::size_t nodes_x() const;
  std::size_t nodes_y() const;
};

void validate_spec(const GridSpec& spec);

/// Regular mesh with a jittered bump lattice and uniformly placed loads.
/// A pure function of the spec (seed included).
PdnGrid generate_grid(const GridSpec& spec);

struct Diagnostic {
  enum class Kind {
    kUnreachable,    // node has no path to any bump
    kDisconnected,   // more than one connected component
    kNonPositive,    // conductance, capacitance, resistance or inductance out of range
    kInvalidIndex,   // edge/bump/load refers to a missing node
    kDuplicate,      // repeated bump or load node
    kShape,          // per-node arrays disagree in length
  };
  Kind kind;
  std::optional<std::size_t> node;
  std::string message;
};

/// Checks every structural and electrical invariant. Empty iff the grid is valid.
std::vector<Diagnostic> validate_grid(const PdnGrid& grid);

const char* to_string(Diagnostic::Kind kind);

// JSON (.pdn.json). Keys carry their units as suffixes: _um, _s, _f, _ohm, _h, _v.
inline constexpr int kPdnSchemaMajor = 1;

nlohmann::json to_json(const GridSpec& spec);
GridSpec grid_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PdnGrid& grid);
PdnGrid grid_from_json(const nlohmann::json& j);

PdnGrid load_grid(const std::string& path);
void save_grid(const PdnGrid& grid, const std::string& path);

}  // namespace pdnoise
