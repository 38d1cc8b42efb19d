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

#include "pdnoise/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pdnoise/error.hpp"
#include "pdnoise/json_util.hpp"
#include "pdnoise/rng.hpp"

namespace pdnoise {
namespace {

std::size_t axis_nodes(double extent, double pitch) {
  // Small tolerance so 240/10 lands on 24 rather than 23.999...
  return static_cast<std::size_t>(std::floor(extent / pitch + 1e-9)) + 1;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string("grid spec: ") + what + " must be positive, got " +
                          std::to_string(v));
  }
}

}  // namespace

std::size_t GridSpec::nodes_x() const { return axis_nodes(die_width_um, pitch_um); }
std::size_t GridSpec::nodes_y() const { return axis_nodes(die_height_um, pitch_um); }

void validate_spec(const GridSpec& spec) {
  require_positive(spec.die_width_um, "die_width_um");
  require_positive(spec.die_height_um, "die_height_um");
  require_positive(spec.pitch_um, "pitch_um");
  require_positive(spec.wire_resistance_ohm_per_um, "wire_resistance_ohm_per_um");
  require_positive(spec.cap_min_f, "cap_min_f");
  require_positive(spec.cap_max_f, "cap_max_f");
  require_positive(spec.bump_resistance_ohm, "bump_resistance_ohm");
  require_positive(spec.vdd_v, "vdd_v");
  if (spec.cap_max_f < spec.cap_min_f) throw InvalidArgument("grid spec: cap_max_f < cap_min_f");
  if (spec.bump_inductance_h < 0.0) throw InvalidArgument("grid spec: bump_inductance_h < 0");
  if (spec.bump_jitter < 0.0 || spec.bump_jitter > 1.0) {
    throw InvalidArgument("grid spec: bump_jitter must lie in [0, 1]");
  }
  if (spec.pitch_um > spec.die_width_um || spec.pitch_um > spec.die_height_um) {
    throw InvalidArgument("grid spec: pitch exceeds die size");
  }
  if (spec.bump_count < 1) throw InvalidArgument("grid spec: bump_count must be >= 1");
  const std::size_t nodes = spec.nodes_x() * spec.nodes_y();
  if (spec.bump_count > nodes) {
    throw InvalidArgument("grid spec: bump_count " + std::to_string(spec.bump_count) +
                          " exceeds node count " + std::to_string(nodes));
  }
  if (spec.load_count > nodes) {
    throw InvalidArgument("grid spec: load_count " + std::to_string(spec.load_count) +
                          " exceeds node count " + std::to_string(nodes));
  }
}

PdnGrid generate_grid(const GridSpec& spec) {
  validate_spec(spec);
  const std::size_t nx = spec.nodes_x();
  const std::size_t ny = spec.nodes_y();
  const double pitch = spec.pitch_um;

  PdnGrid grid;
  grid.die_width = spec.die_width_um;
  grid.die_height = spec.die_height_um;
  grid.vdd = spec.vdd_v;
  grid.nodes.reserve(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      grid.nodes.push_back({static_cast<double>(ix) * pitch, static_cast<double>(iy) * pitch});
    }
  }

  const double g = 1.0 / (spec.wire_resistance_ohm_per_um * pitch);
  auto id = [nx](std::size_t ix, std::size_t iy) { return iy * nx + ix; };
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix + 1 < nx; ++ix) grid.edges.push_back({id(ix, iy), id(ix + 1, iy), g});
  }
  for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) grid.edges.push_back({id(ix, iy), id(ix, iy + 1), g});
  }

  // Independent streams so changing one count does not reshuffle the others.
  Rng cap_rng(Rng::derive(spec.seed, 0));
  Rng bump_rng(Rng::derive(spec.seed, 1));
  Rng load_rng(Rng::derive(spec.seed, 2));

  grid.node_caps.resize(grid.nodes.size());
  for (auto& c : grid.node_caps) c = cap_rng.uniform(spec.cap_min_f, spec.cap_max_f);

  // Bump lattice: bx columns by by rows, filled row-major.
  const double aspect = spec.die_width_um / spec.die_height_um;
  const auto bx = static_cast<std::size_t>(
      std::max(1.0, std::ceil(std::sqrt(static_cast<double>(spec.bump_count) * aspect) - 1e-9)));
  const std::size_t by = (spec.bump_count + bx - 1) / bx;
  const double cell_w = spec.die_width_um / static_cast<double>(bx);
  const double cell_h = spec.die_height_um / static_cast<double>(by);
  std::vector<bool> taken(grid.nodes.size(), false);
  for (std::size_t b = 0; b < spec.bump_count; ++b) {
    const double cx = (static_cast<double>(b % bx) + 0.5) * cell_w;
    const double cy = (static_cast<double>(b / bx) + 0.5) * cell_h;
    const double x = cx + bump_rng.uniform(-1.0, 1.0) * spec.bump_jitter * 0.5 * cell_w;
    const double y = cy + bump_rng.uniform(-1.0, 1.0) * spec.bump_jitter * 0.5 * cell_h;
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
      if (taken[i]) continue;
      const double dx = grid.nodes[i].x - x;
      const double dy = grid.nodes[i].y - y;
      const double d = dx * dx + dy * dy;
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    taken[best] = true;
    grid.bumps.push_back({best, spec.bump_resistance_ohm, spec.bump_inductance_h});
  }

  // Partial Fisher-Yates for distinct load nodes.
  std::vector<std::size_t> order(grid.nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < spec.load_count; ++i) {
    const auto j = static_cast<std::size_t>(
        load_rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(order.size() - 1)));
    std::swap(order[i], order[j]);
  }
  grid.loads.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(spec.load_count));
  return grid;
}

const char* to_string(Diagnostic::Kind kind) {
  switch (kind) {
    case Diagnostic::Kind::kUnreachable: return "unreachable";
    case Diagnostic::Kind::kDisconnected: return "disconnected";
    case Diagnostic::Kind::kNonPositive: return "non_positive";
    case Diagnostic::Kind::kInvalidIndex: return "invalid_index";
    case Diagnostic::Kind::kDuplicate: return "duplicate";
    case Diagnostic::Kind::kShape: return "shape";
  }
  return "unknown";
}

std::vector<Diagnostic> validate_grid(const PdnGrid& grid) {
  using Kind = Diagnostic::Kind;
  std::vector<Diagnostic> out;
  const std::size_t n = grid.node_count();
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };

  if (grid.node_caps.size() != n) {
    out.push_back({Kind::kShape, std::nullopt,
                   "node_caps has " + std::to_string(grid.node_caps.size()) + " entries for " +
                       std::to_string(n) + " nodes"});
  }
  if (!positive(grid.vdd)) out.push_back({Kind::kNonPositive, std::nullopt, "vdd must be positive"});

  for (std::size_t i = 0; i < grid.node_caps.size(); ++i) {
    if (!positive(grid.node_caps[i])) {
      out.push_back({Kind::kNonPositive, i, "node " + std::to_string(i) + " has capacitance " +
                                                std::to_string(grid.node_caps[i])});
    }
  }

  // Adjacency only over structurally valid edges.
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t e = 0; e < grid.edges.size(); ++e) {
    const auto& edge = grid.edges[e];
    if (edge.a >= n || edge.b >= n || edge.a == edge.b) {
      out.push_back({Kind::kInvalidIndex, std::nullopt,
                     "edge " + std::to_string(e) + " has invalid endpoints (" +
                         std::to_string(edge.a) + ", " + std::to_string(edge.b) + ")"});
      continue;
    }
    if (!positive(edge.conductance)) {
      out.push_back({Kind::kNonPositive, edge.a,
                     "edge " + std::to_string(e) + " has conductance " +
                         std::to_string(edge.conductance)});
      continue;
    }
    adj[edge.a].push_back(edge.b);
    adj[edge.b].push_back(edge.a);
  }

  std::vector<bool> is_bump(n, false);
  for (std::size_t b = 0; b < grid.bumps.size(); ++b) {
    const auto& bump = grid.bumps[b];
    if (bump.node >= n) {
      out.push_back({Kind::kInvalidIndex, std::nullopt,
                     "bump " + std::to_string(b) + " refers to node " + std::to_string(bump.node)});
      continue;
    }
    if (is_bump[bump.node]) {
      out.push_back({Kind::kDuplicate, bump.node,
                     "node " + std::to_string(bump.node) + " carries more than one bump"});
    }
    is_bump[bump.node] = true;
    if (!positive(bump.resistance)) {
      out.push_back({Kind::kNonPositive, bump.node,
                     "bump " + std::to_string(b) + " has resistance " + std::to_string(bump.resistance)});
    }
    if (!(bump.inductance >= 0.0) || !std::isfinite(bump.inductance)) {
      out.push_back({Kind::kNonPositive, bump.node,
                     "bump " + std::to_string(b) + " has inductance " + std::to_string(bump.inductance)});
    }
  }

  std::vector<bool> is_load(n, false);
  for (std::size_t l = 0; l < grid.loads.size(); ++l) {
    const auto node = grid.loads[l];
    if (node >= n) {
      out.push_back({Kind::kInvalidIndex, std::nullopt,
                     "load " + std::to_string(l) + " refers to node " + std::to_string(node)});
      continue;
    }
    if (is_load[node]) {
      out.push_back({Kind::kDuplicate, node, "node " + std::to_string(node) + " carries more than one load"});
    }
    is_load[node] = true;
  }

  // Connected components by BFS; a component without a bump is floating.
  std::vector<int> component(n, -1);
  std::vector<bool> component_has_bump;
  std::vector<std::size_t> queue;
  for (std::size_t start = 0; start < n; ++start) {
    if (component[start] >= 0) continue;
    const int c = static_cast<int>(component_has_bump.size());
    component_has_bump.push_back(false);
    queue.assign(1, start);
    component[start] = c;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto u = queue[head];
      if (is_bump[u]) component_has_bump[c] = true;
      for (auto v : adj[u]) {
        if (component[v] < 0) {
          component[v] = c;
          queue.push_back(v);
        }
      }
    }
  }
  bool any_unreachable = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!component_has_bump[static_cast<std::size_t>(component[i])]) {
      any_unreachable = true;
      out.push_back({Kind::kUnreachable, i, "node " + std::to_string(i) + " cannot reach any bump"});
    }
  }
  if (!any_unreachable && component_has_bump.size() > 1) {
    out.push_back({Kind::kDisconnected, std::nullopt,
                   "grid has " + std::to_string(component_has_bump.size()) + " connected components"});
  }
  return out;
}

nlohmann::json to_json(const GridSpec& s) {
  nlohmann::json j = schema_header("pdn-grid-spec", kPdnSchemaMajor);
  j["die_width_um"] = s.die_width_um;
  j["die_height_um"] = s.die_height_um;
  j["pitch_um"] = s.pitch_um;
  j["bump_count"] = s.bump_count;
  j["load_count"] = s.load_count;
  j["wire_resistance_ohm_per_um"] = s.wire_resistance_ohm_per_um;
  j["cap_min_f"] = s.cap_min_f;
  j["cap_max_f"] = s.cap_max_f;
  j["bump_resistance_ohm"] = s.bump_resistance_ohm;
  j["bump_inductance_h"] = s.bump_inductance_h;
  j["bump_jitter"] = s.bump_jitter;
  j["vdd_v"] = s.vdd_v;
  j["seed"] = s.seed;
  return j;
}

GridSpec grid_spec_from_json(const nlohmann::json& j) {
  check_schema(j, "pdn-grid-spec", kPdnSchemaMajor);
  GridSpec s;
  // Missing keys keep their defaults.
  auto opt = [&j](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
  };
  opt("die_width_um", s.die_width_um);
  opt("die_height_um", s.die_height_um);
  opt("pitch_um", s.pitch_um);
  opt("bump_count", s.bump_count);
  opt("load_count", s.load_count);
  opt("wire_resistance_ohm_per_um", s.wire_resistance_ohm_per_um);
  opt("cap_min_f", s.cap_min_f);
  opt("cap_max_f", s.cap_max_f);
  opt("bump_resistance_ohm", s.bump_resistance_ohm);
  opt("bump_inductance_h", s.bump_inductance_h);
  opt("bump_jitter", s.bump_jitter);
  opt("vdd_v", s.vdd_v);
  opt("seed", s.seed);
  return s;
}

nlohmann::json to_json(const PdnGrid& g) {
  nlohmann::json j = schema_header("pdn-grid", kPdnSchemaMajor);
  j["die_width_um"] = g.die_width;
  j["die_height_um"] = g.die_height;
  j["vdd_v"] = g.vdd;
  auto nodes = nlohmann::json::array();
  for (const auto& p : g.nodes) nodes.push_back({p.x, p.y});
  j["nodes_um"] = std::move(nodes);
  j["node_caps_f"] = g.node_caps;
  auto edges = nlohmann::json::array();
  for (const auto& e : g.edges) edges.push_back({e.a, e.b, e.conductance});
  j["edges_s"] = std::move(edges);
  auto bumps = nlohmann::json::array();
  for (const auto& b : g.bumps) {
    bumps.push_back({{"node", b.node}, {"resistance_ohm", b.resistance}, {"inductance_h", b.inductance}});
  }
  j["bumps"] = std::move(bumps);
  j["loads"] = g.loads;
  return j;
}

PdnGrid grid_from_json(const nlohmann::json& j) {
  check_schema(j, "pdn-grid", kPdnSchemaMajor);
  try {
    PdnGrid g;
    g.die_width = j.at("die_width_um").get<double>();
    g.die_height = j.at("die_height_um").get<double>();
    g.vdd = j.at("vdd_v").get<double>();
    for (const auto& p : j.at("nodes_um")) g.nodes.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    g.node_caps = j.at("node_caps_f").get<std::vector<double>>();
    for (const auto& e : j.at("edges_s")) {
      g.edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), e.at(2).get<double>()});
    }
    for (const auto& b : j.at("bumps")) {
      g.bumps.push_back({b.at("node").get<std::size_t>(), b.at("resistance_ohm").get<double>(),
                         b.value("inductance_h", 0.0)});
    }
    g.loads = j.at("loads").get<std::vector<std::size_t>>();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("pdn-grid: ") + e.what());
  }
}

PdnGrid load_grid(const std::string& path) { return grid_from_json(read_json(path)); }

void save_grid(const PdnGrid& grid, const std::string& path) { write_json(path, to_json(grid)); }

}  // namespace pdnoise
