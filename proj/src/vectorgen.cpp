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

#include "pdnoise/vectorgen.hpp"

#include <algorithm>
#include <cmath>

#include "pdnoise/error.hpp"
#include "pdnoise/json_util.hpp"
#include "pdnoise/parallel.hpp"
#include "pdnoise/rng.hpp"
#include "pdnoise/tns.hpp"

namespace pdnoise {
namespace {

// One group's waveform with unit load scale.
std::vector<double> block_waveform(const VectorSpec& spec, Rng& rng) {
  std::vector<double> w(spec.stamps, 0.0);
  const double duty = spec.expected_duty();
  bool burst = rng.uniform() < duty;
  auto draw_len = [&](bool b) {
    return static_cast<std::size_t>(b ? rng.uniform_int(static_cast<std::int64_t>(spec.burst_min),
                                                        static_cast<std::int64_t>(spec.burst_max))
                                      : rng.uniform_int(static_cast<std::int64_t>(spec.idle_min),
                                                        static_cast<std::int64_t>(spec.idle_max)));
  };
  // Start part-way into the first segment so the trace begins in steady state.
  std::size_t len = draw_len(burst);
  std::size_t offset = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(len) - 1));
  std::size_t k = 0;
  while (k < spec.stamps) {
    if (burst) {
      const double amp = rng.uniform(spec.amplitude_min, spec.amplitude_max);
      const double ramp = static_cast<double>(spec.ramp + 1);
      for (std::size_t t = offset; t < len && k < spec.stamps; ++t, ++k) {
        const double up = static_cast<double>(t + 1) / ramp;
        const double down = static_cast<double>(len - t) / ramp;
        w[k] = amp * std::min({1.0, up, down});
      }
    } else {
      k += std::min(len - offset, spec.stamps - k);
    }
    burst = !burst;
    len = draw_len(burst);
    offset = 0;
  }
  return w;
}

}  // namespace

double VectorSpec::expected_duty() const {
  const double burst = 0.5 * static_cast<double>(burst_min + burst_max);
  const double idle = 0.5 * static_cast<double>(idle_min + idle_max);
  return burst / (burst + idle);
}

void validate_spec(const VectorSpec& s) {
  if (s.stamps < 1) throw InvalidArgument("vector spec: stamps must be >= 1");
  if (!(s.dt > 0.0)) throw InvalidArgument("vector spec: dt must be positive");
  if (s.idle_min < 1 || s.burst_min < 1) throw InvalidArgument("vector spec: segment lengths must be >= 1");
  if (s.idle_max < s.idle_min || s.burst_max < s.burst_min) {
    throw InvalidArgument("vector spec: segment length range is inverted");
  }
  if (!(s.amplitude_min >= 0.0) || s.amplitude_max < s.amplitude_min || !std::isfinite(s.amplitude_max)) {
    throw InvalidArgument("vector spec: amplitude range must satisfy 0 <= min <= max");
  }
  if (!(s.load_scale_min >= 0.0) || s.load_scale_min > 1.0) {
    throw InvalidArgument("vector spec: load_scale_min must lie in [0, 1]");
  }
}

CurrentTrace generate_vector(const VectorSpec& spec, const PdnGrid& grid, std::size_t index) {
  validate_spec(spec);
  CurrentTrace trace(spec.dt, spec.stamps, grid.load_count());
  Rng rng(Rng::derive(spec.seed, index));

  const std::size_t loads = grid.load_count();
  std::vector<std::size_t> group(loads);
  std::size_t groups = loads;
  if (spec.activity_blocks > 0) {
    const std::size_t b = spec.activity_blocks;
    groups = b * b;
    for (std::size_t l = 0; l < loads; ++l) {
      const auto& p = grid.nodes[grid.loads[l]];
      const auto gx = std::min(b - 1, static_cast<std::size_t>(p.x / grid.die_width * static_cast<double>(b)));
      const auto gy = std::min(b - 1, static_cast<std::size_t>(p.y / grid.die_height * static_cast<double>(b)));
      group[l] = gy * b + gx;
    }
  } else {
    for (std::size_t l = 0; l < loads; ++l) group[l] = l;
  }

  std::vector<std::vector<double>> waves(groups);
  for (auto& w : waves) w = block_waveform(spec, rng);
  std::vector<double> scale(loads);
  for (auto& s : scale) s = rng.uniform(spec.load_scale_min, 1.0);

  for (std::size_t k = 0; k < spec.stamps; ++k) {
    for (std::size_t l = 0; l < loads; ++l) trace.at(k, l) = scale[l] * waves[group[l]][k];
  }
  return trace;
}

std::vector<CurrentTrace> generate_vectors(const VectorSpec& spec, const PdnGrid& grid, std::size_t count,
                                           std::size_t threads) {
  if (count < 1) throw InvalidArgument("generate_vectors: count must be >= 1");
  validate_spec(spec);
  std::vector<CurrentTrace> out(count);
  parallel_for(count, threads, [&](std::size_t i) { out[i] = generate_vector(spec, grid, i); });
  return out;
}

nlohmann::json to_json(const VectorSpec& s) {
  nlohmann::json j = schema_header("vector-spec", kVectorSpecSchemaMajor);
  j["stamps"] = s.stamps;
  j["dt_s"] = s.dt;
  j["idle_min"] = s.idle_min;
  j["idle_max"] = s.idle_max;
  j["burst_min"] = s.burst_min;
  j["burst_max"] = s.burst_max;
  j["amplitude_min_a"] = s.amplitude_min;
  j["amplitude_max_a"] = s.amplitude_max;
  j["ramp"] = s.ramp;
  j["activity_blocks"] = s.activity_blocks;
  j["load_scale_min"] = s.load_scale_min;
  j["seed"] = s.seed;
  return j;
}

VectorSpec vector_spec_from_json(const nlohmann::json& j) {
  check_schema(j, "vector-spec", kVectorSpecSchemaMajor);
  VectorSpec s;
  auto opt = [&j](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
  };
  opt("stamps", s.stamps);
  opt("dt_s", s.dt);
  opt("idle_min", s.idle_min);
  opt("idle_max", s.idle_max);
  opt("burst_min", s.burst_min);
  opt("burst_max", s.burst_max);
  opt("amplitude_min_a", s.amplitude_min);
  opt("amplitude_max_a", s.amplitude_max);
  opt("ramp", s.ramp);
  opt("activity_blocks", s.activity_blocks);
  opt("load_scale_min", s.load_scale_min);
  opt("seed", s.seed);
  validate_spec(s);
  return s;
}

void save_trace(const CurrentTrace& trace, const std::filesystem::path& path) {
  tns::write_f64(path, {static_cast<std::uint32_t>(trace.stamps), static_cast<std::uint32_t>(trace.loads)},
                 trace.samples);
}

CurrentTrace load_trace(const std::filesystem::path& path, double dt) {
  auto t = tns::read(path);
  if (t.dims.size() != 2) throw FormatError(path.string() + ": trace must be 2-D (stamps, loads)");
  CurrentTrace trace;
  trace.dt = dt;
  trace.stamps = t.dims[0];
  trace.loads = t.dims[1];
  trace.samples = std::move(t.values);
  return trace;
}

}  // namespace pdnoise
