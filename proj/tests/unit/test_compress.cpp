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

#include <cmath>

#include "oracles.hpp"
#include "pdnoise/compress.hpp"
#include "pdnoise/error.hpp"
#include "pdnoise/grid.hpp"
#include "pdnoise/rng.hpp"
#include "pdnoise/tiling.hpp"

using namespace pdnoise;

namespace {

TileCurrentMaps from_totals(const std::vector<double>& totals, std::size_t m = 1, std::size_t n = 2) {
  TileCurrentMaps maps;
  maps.m = m;
  maps.n = n;
  maps.stamps = totals.size();
  for (double t : totals) {
    // Split each total unevenly over the tiles; the sum stays exact for the
    // dyadic fractions used here.
    maps.values.push_back(0.25 * t);
    for (std::size_t j = 1; j + 1 < m * n; ++j) maps.values.push_back(0.0);
    maps.values.push_back(0.75 * t);
  }
  return maps;
}

void check_against_oracle(const std::vector<double>& totals, double r, double dr) {
  const auto maps = from_totals(totals);
  const auto res = temporal_compress(maps, r, dr);
  std::vector<double> exact;
  for (std::size_t k = 0; k < maps.stamps; ++k) exact.push_back(maps.total(k));
  const auto ref = oracle::brute_force_compress(exact, r, dr);
  CHECK(res.kept == ref.kept);
  CHECK(res.split == ref.split);
  CHECK(res.d_min == ref.d_min);
  CHECK(res.kept.size() == static_cast<std::size_t>(std::llround(r * static_cast<double>(totals.size()))));
}

}  // namespace

TEST_CASE("tiling: 1x1 holds everything") {
  GridSpec s;
  s.die_width_um = 90;
  s.die_height_um = 60;
  s.bump_count = 2;
  s.load_count = 5;
  const auto g = generate_grid(s);
  const auto t = build_tiling(g, 1, 1);
  for (auto v : t.node_tile) CHECK(v == 0);
  for (auto v : t.load_tile) CHECK(v == 0);
  CHECK(t.centers[0].x == 45.0);
  CHECK(t.centers[0].y == 30.0);
}

TEST_CASE("tiling: a node on a boundary goes to the lower-index tile") {
  GridSpec s;
  s.die_width_um = s.die_height_um = 40;
  s.bump_count = 1;
  s.load_count = 1;
  const auto g = generate_grid(s);
  const auto t = build_tiling(g, 2, 2);
  CHECK(t.locate({20.0, 20.0}) == t.index(0, 0));
  CHECK(t.locate({20.0001, 20.0}) == t.index(1, 0));
  CHECK(t.locate({0.0, 40.0}) == t.index(0, 1));
  CHECK(t.locate({40.0, 0.0}) == t.index(1, 0));
}

TEST_CASE("tiling: 4x4 populations agree with a point-in-rectangle count") {
  GridSpec s;
  s.die_width_um = s.die_height_um = 170;  // 18 x 18 nodes
  s.bump_count = 4;
  s.load_count = 10;
  const auto g = generate_grid(s);
  const auto t = build_tiling(g, 4, 4);
  const auto pop = t.populations();
  const double w = 170.0 / 4;
  std::size_t total = 0;
  for (std::size_t x = 0; x < 4; ++x) {
    for (std::size_t y = 0; y < 4; ++y) {
      std::size_t count = 0;
      for (const auto& p : g.nodes) {
        const bool in_x = (x == 0 ? p.x >= 0 : p.x > x * w) && p.x <= (x + 1) * w;
        const bool in_y = (y == 0 ? p.y >= 0 : p.y > y * w) && p.y <= (y + 1) * w;
        count += in_x && in_y;
      }
      CHECK(pop[t.index(x, y)] == count);
      total += count;
    }
  }
  CHECK(total == g.node_count());
  const auto [lo, hi] = std::minmax_element(pop.begin(), pop.end());
  CHECK(*hi - *lo <= 2 * 18);  // equal up to one mesh row/column per side
}

TEST_CASE("tile current maps") {
  GridSpec s;
  s.die_width_um = s.die_height_um = 60;
  s.bump_count = 2;
  s.load_count = 7;
  const auto g = generate_grid(s);
  const auto tiling = build_tiling(g, 3, 3);
  Rng rng(12);
  CurrentTrace trace(1e-12, 15, g.load_count());
  for (auto& v : trace.samples) v = rng.uniform(0.0, 1e-3);

  SUBCASE("single active load appears verbatim in one tile") {
    CurrentTrace one(1e-12, 15, g.load_count());
    for (std::size_t k = 0; k < 15; ++k) one.at(k, 3) = trace.at(k, 3);
    const auto maps = tile_current_maps(one, tiling, g);
    for (std::size_t k = 0; k < 15; ++k) {
      for (std::size_t j = 0; j < 9; ++j) CHECK(maps.map(k)[j] == (j == tiling.load_tile[3] ? one.at(k, 3) : 0.0));
    }
  }
  SUBCASE("mass conservation and brute-force accumulation") {
    const auto maps = tile_current_maps(trace, tiling, g);
    for (std::size_t k = 0; k < 15; ++k) {
      CHECK(maps.total(k) == doctest::Approx(trace.total(k)).epsilon(1e-14));
      for (std::size_t j = 0; j < 9; ++j) {
        double ref = 0.0;
        for (std::size_t l = 0; l < g.load_count(); ++l) {
          if (tiling.locate(g.nodes[g.loads[l]]) == j) ref += trace.at(k, l);
        }
        CHECK(maps.map(k)[j] == doctest::Approx(ref).epsilon(1e-14));
      }
    }
  }
  SUBCASE("load count mismatch") {
    CurrentTrace bad(1e-12, 2, 3);
    CHECK_THROWS_AS(tile_current_maps(bad, tiling, g), ShapeMismatch);
  }
}

TEST_CASE("temporal compression: constant totals pick the first split") {
  const auto maps = from_totals(std::vector<double>(20, 3.0));
  const auto res = temporal_compress(maps, 0.3, 0.05);
  CHECK(res.d_min == 0.0);
  CHECK(res.split == 0.0);
  CHECK(res.kept.size() == 6);
}

TEST_CASE("temporal compression: 1..10 at r = 0.4 against brute force") {
  std::vector<double> s;
  for (int i = 1; i <= 10; ++i) s.push_back(i);
  check_against_oracle(s, 0.4, 0.1);
  const auto res = temporal_compress(from_totals(s), 0.4, 0.1);
  CHECK(std::is_sorted(res.kept.begin(), res.kept.end()));
  CHECK(res.maps.stamps == 4);
}

TEST_CASE("temporal compression: all but one stamp") {
  Rng rng(3);
  std::vector<double> s(16);
  for (auto& v : s) v = std::floor(rng.uniform(0, 8));
  check_against_oracle(s, 15.0 / 16.0, 0.1);
}

TEST_CASE("temporal compression: random sequences match brute force") {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 64));
    std::vector<double> s(n);
    for (auto& v : s) v = std::floor(rng.uniform(0, 6)) * 0.5;  // plenty of ties
    for (double r : {0.2, 0.3, 0.5}) {
      if (std::llround(r * static_cast<double>(n)) == 0) continue;
      check_against_oracle(s, r, 0.1);
    }
  }
}

TEST_CASE("temporal compression keeps maps untouched and reports a consistent d_min") {
  Rng rng(8);
  TileCurrentMaps maps;
  maps.m = 2;
  maps.n = 3;
  maps.stamps = 40;
  for (std::size_t i = 0; i < 40 * 6; ++i) maps.values.push_back(rng.uniform());
  const auto res = temporal_compress(maps, 0.3, 0.05);
  std::vector<double> all, kept;
  for (std::size_t k = 0; k < 40; ++k) all.push_back(maps.total(k));
  for (std::size_t j = 0; j < res.kept.size(); ++j) {
    const auto src = maps.map(res.kept[j]);
    const auto dst = res.maps.map(j);
    CHECK(std::equal(src.begin(), src.end(), dst.begin()));
    kept.push_back(maps.total(res.kept[j]));
  }
  CHECK(res.d_min == std::abs(tail_statistic(all) - tail_statistic(kept)));
}

TEST_CASE("temporal compression rejects bad rates") {
  const auto maps = from_totals({1, 2, 3, 4});
  CHECK_THROWS_AS(temporal_compress(maps, 0.0, 0.1), InvalidRate);
  CHECK_THROWS_AS(temporal_compress(maps, 1.0, 0.1), InvalidRate);
  CHECK_THROWS_AS(temporal_compress(maps, 0.1, 0.1), InvalidRate);  // round(0.4) = 0
  CHECK_THROWS_AS(temporal_compress(maps, 0.5, 0.0), InvalidRate);
  CHECK_THROWS_AS(temporal_compress(from_totals({1}), 0.5, 0.1), InvalidArgument);
}
