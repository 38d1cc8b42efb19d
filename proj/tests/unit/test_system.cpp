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
#include <limits>

#include "oracles.hpp"
#include "pdnoise/error.hpp"
#include "pdnoise/grid.hpp"
#include "pdnoise/system.hpp"

using namespace pdnoise;

namespace {

PdnGrid mesh(std::size_t side, double pitch, std::size_t bumps, std::uint64_t seed, double inductance = 0.0) {
  GridSpec s;
  s.die_width_um = s.die_height_um = pitch * static_cast<double>(side - 1);
  s.pitch_um = pitch;
  s.bump_count = bumps;
  s.load_count = 1;
  s.seed = seed;
  s.bump_inductance_h = inductance;
  return generate_grid(s);
}

PdnGrid single_node(double cap, double r) {
  PdnGrid g;
  g.die_width = g.die_height = 1.0;
  g.nodes = {{0.5, 0.5}};
  g.node_caps = {cap};
  g.bumps = {{0, r, 0.0}};
  g.loads = {0};
  return g;
}

}  // namespace

TEST_CASE("1x1 stamp: C/dt + 1/R") {
  const double c = 2e-13, r = 0.5, dt = 1e-12;
  const auto sys = stamp_system(single_node(c, r), dt);
  REQUIRE(sys.dimension() == 1);
  CHECK(sys.matrix().at(0, 0) == doctest::Approx(c / dt + 1.0 / r).epsilon(1e-15));
}

TEST_CASE("two-node edge gives symmetric -g off-diagonals") {
  PdnGrid g = single_node(1e-13, 1.0);
  g.nodes.push_back({1.0, 0.5});
  g.node_caps.push_back(1e-13);
  g.edges = {{0, 1, 3.5}};
  const auto sys = stamp_system(g, 1e-12);
  CHECK(sys.matrix().at(0, 1) == -3.5);
  CHECK(sys.matrix().at(1, 0) == -3.5);
}

TEST_CASE("3x3 mesh matches an independent dense assembly") {
  for (double l : {0.0, 2e-11}) {
    const auto g = mesh(3, 10, 2, 5, l);
    for (double dt : {1e-12, std::numeric_limits<double>::infinity()}) {
      const auto sys = stamp_system(g, dt);
      const auto ref = oracle::dense_system(g, dt);
      const auto dense = sys.matrix().to_dense();
      for (std::size_t i = 0; i < 9; ++i) {
        for (std::size_t j = 0; j < 9; ++j) {
          CHECK(dense[i * 9 + j] == doctest::Approx(ref[i][j]).epsilon(1e-14));
        }
      }
    }
  }
}

TEST_CASE("stored entries are exactly symmetric and the factor reconstructs A") {
  const auto g = mesh(30, 10, 9, 3, 1e-11);  // 900 nodes
  const auto sys = factor(stamp_system(g, 1e-12));
  const auto& a = sys.matrix();
  for (std::size_t j = 0; j < a.n; ++j) {
    for (auto p = a.col_ptr[j]; p < a.col_ptr[j + 1]; ++p) {
      CHECK(a.at(j, static_cast<std::size_t>(a.row_idx[p])) == a.values[p]);
    }
  }
  const auto dense = a.to_dense();
  const auto llt = sys.factor().reconstruct_dense();
  double err = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < a.n; ++i) {
    double row_err = 0.0, row_norm = 0.0;
    for (std::size_t j = 0; j < a.n; ++j) {
      row_err += std::abs(dense[i * a.n + j] - llt[i * a.n + j]);
      row_norm += std::abs(dense[i * a.n + j]);
    }
    err = std::max(err, row_err);
    norm = std::max(norm, row_norm);
  }
  CHECK(err / norm <= 1e-10);
}

TEST_CASE("sparse solve agrees with dense elimination") {
  const auto g = mesh(7, 10, 3, 11);
  const auto sys = factor(stamp_system(g, 1e-12));
  std::vector<double> b(g.node_count());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::sin(1.0 + static_cast<double>(i));
  const auto x = sys.factor().solve(b);
  const auto ref = oracle::lu_solve(oracle::dense_system(g, 1e-12), b);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-10));
}

TEST_CASE("row sums of the conductance part") {
  const auto g = mesh(6, 10, 2, 7);
  const auto sys = stamp_conductance(g);
  const auto& a = sys.matrix();
  std::vector<double> sums(a.n, 0.0);
  for (std::size_t j = 0; j < a.n; ++j) {
    for (auto p = a.col_ptr[j]; p < a.col_ptr[j + 1]; ++p) sums[static_cast<std::size_t>(a.row_idx[p])] += a.values[p];
  }
  std::vector<bool> bumped(a.n, false);
  for (const auto& b : g.bumps) bumped[b.node] = true;
  for (std::size_t i = 0; i < a.n; ++i) {
    if (bumped[i]) {
      CHECK(sums[i] > 1e-9);
    } else {
      CHECK(std::abs(sums[i]) <= 1e-12);
    }
  }
}

TEST_CASE("non-SPD input is reported with the offending node") {
  CscMatrix a;
  a.n = 3;
  a.col_ptr = {0, 2, 4, 5};
  a.row_idx = {0, 1, 0, 1, 2};
  a.values = {1.0, 2.0, 2.0, 1.0, 1.0};  // [[1,2],[2,1]] block is indefinite
  try {
    CholeskyFactor f(a);
    FAIL("expected NotSpd");
  } catch (const NotSpd& e) {
    CHECK((e.node() == 0 || e.node() == 1));
    CHECK(e.pivot() <= 0.0);
  }
  auto g = single_node(1e-13, 1.0);
  g.bumps.clear();
  g.node_caps[0] = 0.0;
  CHECK_THROWS_AS(stamp_conductance(g), NotSpd);
}

TEST_CASE("stamping rejects non-positive dt and unfactored use") {
  const auto g = single_node(1e-13, 1.0);
  CHECK_THROWS_AS(stamp_system(g, 0.0), InvalidArgument);
  CHECK_THROWS_AS(stamp_system(g, 1e-12).factor(), InvalidArgument);
}
