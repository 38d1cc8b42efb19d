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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pdnoise/error.hpp"
#include "pdnoise/grid.hpp"

using namespace pdnoise;

namespace {

GridSpec tiny(double w, double h, double pitch, std::size_t bumps, std::size_t loads) {
  GridSpec s;
  s.die_width_um = w;
  s.die_height_um = h;
  s.pitch_um = pitch;
  s.bump_count = bumps;
  s.load_count = loads;
  return s;
}

bool has_kind(const std::vector<Diagnostic>& d, Diagnostic::Kind k) {
  return std::any_of(d.begin(), d.end(), [k](const Diagnostic& x) { return x.kind == k; });
}

}  // namespace

TEST_CASE("smallest mesh: 2x2 nodes, one bump, one load") {
  const auto g = generate_grid(tiny(10, 10, 10, 1, 1));
  CHECK(g.node_count() == 4);
  CHECK(g.edges.size() == 4);
  CHECK(g.bump_count() == 1);
  CHECK(g.load_count() == 1);
  CHECK(validate_grid(g).empty());
}

TEST_CASE("generation is a pure function of the spec") {
  auto spec = tiny(100, 80, 10, 4, 12);
  spec.seed = 99;
  const auto a = to_json(generate_grid(spec)).dump();
  const auto b = to_json(generate_grid(spec)).dump();
  CHECK(a == b);
  spec.seed = 100;
  CHECK(to_json(generate_grid(spec)).dump() != a);
}

TEST_CASE("node count follows the pitch arithmetic") {
  const auto spec = tiny(240, 240, 10, 16, 64);
  const auto g = generate_grid(spec);
  const std::size_t per_side = 240 / 10 + 1;
  CHECK(g.node_count() == per_side * per_side);
  CHECK(g.node_count() == 625);
  CHECK(g.edges.size() == 2 * per_side * (per_side - 1));
  CHECK(validate_grid(g).empty());
}

TEST_CASE("bumps and loads are distinct valid nodes; caps within range") {
  auto spec = tiny(200, 120, 10, 9, 40);
  const auto g = generate_grid(spec);
  std::vector<std::size_t> b;
  for (const auto& bump : g.bumps) b.push_back(bump.node);
  std::sort(b.begin(), b.end());
  CHECK(std::adjacent_find(b.begin(), b.end()) == b.end());
  auto l = g.loads;
  std::sort(l.begin(), l.end());
  CHECK(std::adjacent_find(l.begin(), l.end()) == l.end());
  for (double c : g.node_caps) {
    CHECK(c >= spec.cap_min_f);
    CHECK(c <= spec.cap_max_f);
  }
  for (const auto& p : g.nodes) {
    CHECK(p.x >= 0.0);
    CHECK(p.x <= 200.0);
    CHECK(p.y <= 120.0);
  }
}

TEST_CASE("specs asking for more bumps or loads than nodes are rejected") {
  CHECK_THROWS_AS(generate_grid(tiny(10, 10, 10, 5, 1)), InvalidArgument);
  CHECK_THROWS_AS(generate_grid(tiny(10, 10, 10, 1, 5)), InvalidArgument);
  auto bad = tiny(10, 10, 10, 1, 1);
  bad.pitch_um = -1;
  CHECK_THROWS_AS(generate_grid(bad), InvalidArgument);
  bad = tiny(10, 10, 10, 0, 1);
  CHECK_THROWS_AS(generate_grid(bad), InvalidArgument);
}

TEST_CASE("validate_grid diagnostics") {
  auto g = generate_grid(tiny(20, 20, 10, 1, 2));
  REQUIRE(validate_grid(g).empty());

  SUBCASE("isolated node") {
    g.nodes.push_back({25, 25});
    g.node_caps.push_back(1e-13);
    const auto d = validate_grid(g);
    REQUIRE(d.size() == 1);
    CHECK(d[0].kind == Diagnostic::Kind::kUnreachable);
    CHECK(d[0].node == g.node_count() - 1);
  }
  SUBCASE("zero conductance") {
    g.edges[0].conductance = 0.0;
    CHECK(has_kind(validate_grid(g), Diagnostic::Kind::kNonPositive));
  }
  SUBCASE("negative capacitance") {
    g.node_caps[3] = -1e-15;
    CHECK(has_kind(validate_grid(g), Diagnostic::Kind::kNonPositive));
  }
  SUBCASE("duplicate load") {
    g.loads.push_back(g.loads[0]);
    CHECK(has_kind(validate_grid(g), Diagnostic::Kind::kDuplicate));
  }
  SUBCASE("edge to a missing node") {
    g.edges.push_back({0, 1000, 1.0});
    CHECK(has_kind(validate_grid(g), Diagnostic::Kind::kInvalidIndex));
  }
  SUBCASE("per-node arrays disagree") {
    g.node_caps.pop_back();
    CHECK(has_kind(validate_grid(g), Diagnostic::Kind::kShape));
  }
}

TEST_CASE("grid JSON round trip") {
  auto spec = tiny(60, 40, 10, 2, 5);
  spec.bump_inductance_h = 1e-11;
  const auto g = generate_grid(spec);
  const auto path = std::filesystem::temp_directory_path() / "pdnoise_grid_rt.pdn.json";
  save_grid(g, path.string());
  const auto back = load_grid(path.string());
  CHECK(back == g);
  CHECK(grid_spec_from_json(to_json(spec)).seed == spec.seed);
  std::filesystem::remove(path);
}

TEST_CASE("readers reject a newer schema major") {
  auto j = to_json(generate_grid(tiny(10, 10, 10, 1, 1)));
  j["version"] = "2.0";
  CHECK_THROWS_AS(grid_from_json(j), FormatError);
}
