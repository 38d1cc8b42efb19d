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

#include "pdnoise/error.hpp"
#include "pdnoise/grid.hpp"
#include "pdnoise/vectorgen.hpp"

using namespace pdnoise;

namespace {

PdnGrid small_grid() {
  GridSpec s;
  s.die_width_um = s.die_height_um = 100;
  s.bump_count = 4;
  s.load_count = 30;
  return generate_grid(s);
}

VectorSpec short_spec() {
  VectorSpec v;
  v.stamps = 300;
  return v;
}

}  // namespace

TEST_CASE("zero amplitude range gives all-zero traces") {
  auto spec = short_spec();
  spec.amplitude_min = spec.amplitude_max = 0.0;
  const auto traces = generate_vectors(spec, small_grid(), 3);
  for (const auto& t : traces) {
    CHECK(std::all_of(t.samples.begin(), t.samples.end(), [](double v) { return v == 0.0; }));
  }
}

TEST_CASE("same seed, same traces; trace i does not depend on count or threads") {
  const auto g = small_grid();
  const auto a = generate_vectors(short_spec(), g, 4, 1);
  const auto b = generate_vectors(short_spec(), g, 6, 3);
  for (std::size_t i = 0; i < 4; ++i) CHECK(a[i].samples == b[i].samples);
  auto other = short_spec();
  other.seed = 2;
  CHECK(generate_vector(other, g, 0).samples != a[0].samples);
}

TEST_CASE("currents stay within [0, max amplitude] and the trace has N stamps") {
  const auto spec = short_spec();
  const auto g = small_grid();
  for (std::size_t i = 0; i < 5; ++i) {
    const auto t = generate_vector(spec, g, i);
    CHECK(t.stamps == spec.stamps);
    CHECK(t.loads == g.load_count());
    CHECK(t.samples.size() == spec.stamps * g.load_count());
    for (double v : t.samples) {
      CHECK(v >= 0.0);
      CHECK(v <= spec.amplitude_max);
    }
  }
}

TEST_CASE("measured burst duty matches the segment statistics") {
  VectorSpec spec;
  spec.idle_min = 100;
  spec.idle_max = 180;  // mean 140
  spec.burst_min = 40;
  spec.burst_max = 80;  // mean 60
  REQUIRE(spec.expected_duty() == doctest::Approx(0.3));
  const auto g = small_grid();
  double active = 0.0, total = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const auto t = generate_vector(spec, g, i);
    for (double v : t.samples) active += v > 0.0;
    total += static_cast<double>(t.samples.size());
  }
  CHECK(std::abs(active / total - 0.3) <= 0.05);
}

TEST_CASE("traces contain idle plateaus and bursts") {
  const auto t = generate_vector(VectorSpec{}, small_grid(), 0);
  std::size_t idle = 0, busy = 0;
  for (std::size_t k = 0; k < t.stamps; ++k) (t.at(k, 0) == 0.0 ? idle : busy) += 1;
  CHECK(idle > 0);
  CHECK(busy > 0);
}

TEST_CASE("spec validation and JSON") {
  auto spec = short_spec();
  spec.burst_min = 0;
  CHECK_THROWS_AS(validate_spec(spec), InvalidArgument);
  spec = short_spec();
  spec.amplitude_min = 2e-3;
  spec.amplitude_max = 1e-3;
  CHECK_THROWS_AS(validate_spec(spec), InvalidArgument);
  spec = short_spec();
  spec.seed = 77;
  const auto back = vector_spec_from_json(to_json(spec));
  CHECK(back.seed == 77);
  CHECK(back.stamps == spec.stamps);
  CHECK(back.amplitude_max == spec.amplitude_max);
}

TEST_CASE("trace files round-trip") {
  const auto t = generate_vector(short_spec(), small_grid(), 2);
  const auto path = std::filesystem::temp_directory_path() / "pdnoise_trace_rt.tns";
  save_trace(t, path);
  const auto back = load_trace(path, t.dt);
  CHECK(back.samples == t.samples);
  CHECK(back.stamps == t.stamps);
  std::filesystem::remove(path);
}
