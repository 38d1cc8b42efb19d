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

#include "pdnoise/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>

#include <spdlog/spdlog.h>

#include "pdnoise/compress.hpp"
#include "pdnoise/error.hpp"
#include "pdnoise/eval.hpp"
#include "pdnoise/features.hpp"
#include "pdnoise/json_util.hpp"
#include "pdnoise/parallel.hpp"
#include "pdnoise/system.hpp"
#include "pdnoise/tns.hpp"

namespace pdnoise {
namespace fs = std::filesystem;

std::string vector_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "v%05zu", index);
  return buf;
}

CurrentTrace VectorSet::load(std::size_t i) const {
  return load_trace(dir / (ids.at(i) + ".tns"), spec.dt);
}

TraceSource VectorSet::source() const {
  return [set = *this](std::size_t i) { return set.load(i); };
}

VectorSet write_vectors(const VectorSpec& spec, const PdnGrid& grid, std::size_t count, const fs::path& dir,
                        std::size_t threads) {
  validate_spec(spec);
  fs::create_directories(dir);
  VectorSet set{dir, spec, {}};
  for (std::size_t i = 0; i < count; ++i) set.ids.push_back(vector_id(i));
  parallel_for(count, threads, [&](std::size_t i) {
    save_trace(generate_vector(spec, grid, i), dir / (set.ids[i] + ".tns"));
  });
  auto j = schema_header("vector-set", kVectorSetSchemaMajor);
  j["spec"] = to_json(spec);
  j["loads"] = grid.load_count();
  j["ids"] = set.ids;
  write_json(dir / "manifest.json", j);
  return set;
}

VectorSet open_vectors(const fs::path& dir) {
  const auto j = read_json(dir / "manifest.json");
  check_schema(j, "vector-set", kVectorSetSchemaMajor);
  VectorSet set{dir, vector_spec_from_json(j.at("spec")), j.at("ids").get<std::vector<std::string>>()};
  return set;
}

void save_noise_maps(const NoiseMapSet& set, const fs::path& dir, const std::string& kind) {
  if (set.ids.size() != set.maps.size()) throw InvalidArgument("noise maps: ids and maps differ in count");
  fs::create_directories(dir);
  for (std::size_t i = 0; i < set.maps.size(); ++i) {
    const auto& map = set.maps[i];
    if (map.m != set.m || map.n != set.n) throw ShapeMismatch("noise maps: inconsistent tiling");
    tns::write_f64(dir / (set.ids[i] + ".tns"), {static_cast<std::uint32_t>(set.m), static_cast<std::uint32_t>(set.n)},
                   map.values);
  }
  auto j = schema_header("noise-maps", kNoiseMapSchemaMajor);
  j["kind"] = kind;
  j["m"] = set.m;
  j["n"] = set.n;
  j["unit"] = "V";
  j["ids"] = set.ids;
  write_json(dir / "manifest.json", j);
}

NoiseMapSet load_noise_maps(const fs::path& dir) {
  const auto j = read_json(dir / "manifest.json");
  check_schema(j, "noise-maps", kNoiseMapSchemaMajor);
  NoiseMapSet set;
  set.m = j.at("m").get<std::size_t>();
  set.n = j.at("n").get<std::size_t>();
  set.ids = j.at("ids").get<std::vector<std::string>>();
  for (const auto& id : set.ids) {
    auto t = tns::read(dir / (id + ".tns"));
    if (t.dims != std::vector<std::uint32_t>{static_cast<std::uint32_t>(set.m), static_cast<std::uint32_t>(set.n)}) {
      throw FormatError((dir / (id + ".tns")).string() + ": map shape disagrees with the manifest");
    }
    NoiseMap map(set.m, set.n);
    map.values = std::move(t.values);
    set.maps.push_back(std::move(map));
  }
  return set;
}

std::vector<NoiseMap> simulate_set(const PdnGrid& grid, double dt, const Tiling& tiling, const TraceSource& traces,
                                   std::size_t count, std::size_t threads) {
  const auto sys = factor(stamp_system(grid, dt));
  std::vector<NoiseMap> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    out[i] = simulate_worst_case(grid, sys, traces(i), tiling);
    spdlog::debug("simulated {}", vector_id(i));
  });
  return out;
}

Dataset build_dataset(const PdnGrid& grid, const Tiling& tiling, const TraceSource& traces,
                      std::span<const NoiseMap> truth, const DatasetOptions& options) {
  const std::size_t count = truth.size();
  if (count == 0) throw InvalidArgument("build_dataset: no vectors");
  auto distance = std::make_shared<const DistanceTensor>(distance_tensor(grid, tiling));
  Dataset d;
  d.rate = options.rate;
  d.rate_step = options.rate_step;
  d.die_width = grid.die_width;
  d.die_height = grid.die_height;
  d.vdd = grid.vdd;
  d.samples.resize(count);
  parallel_for(count, options.threads, [&](std::size_t i) {
    if (truth[i].m != tiling.m || truth[i].n != tiling.n) throw ShapeMismatch("build_dataset: truth tiling differs");
    const auto maps = tile_current_maps(traces(i), tiling, grid);
    auto c = temporal_compress(maps, options.rate, options.rate_step);
    Sample& s = d.samples[i];
    s.signature = tile_signature(maps);
    s.maps = std::move(c.maps);
    s.distance = distance;
    s.truth = truth[i];
    s.provenance = {"", i, options.rate, c.split};
  });
  const auto sigs = normalized_signatures(d.samples);
  d.tau = options.tau ? *options.tau : auto_tau(sigs, options.accept_fraction);
  const auto accepted = expand_training_set(sigs, d.tau);
  d.splits = split_samples(count, accepted, options.seed);
  spdlog::info("dataset: tau {:.6g}, {} of {} samples accepted for training", d.tau, accepted.size(), count);
  return d;
}

ModelConfig model_config_for(const Dataset& dataset, ModelConfig base) {
  if (dataset.samples.empty()) throw InvalidArgument("model_config_for: empty dataset");
  const auto& s = dataset.samples.front();
  base.m = s.maps.m;
  base.n = s.maps.n;
  base.bumps = s.distance->bumps;
  base.rate = dataset.rate;
  base.rate_step = dataset.rate_step;
  return base;
}

Model train_on(const Dataset& dataset, const ModelConfig& base, const TrainConfig& config, TrainReport* report,
               const EpochCallback& on_epoch) {
  const auto train_set = dataset.subset(Split::kTrain);
  const auto val_set = dataset.subset(Split::kValidation);
  Model model(model_config_for(dataset, base));
  model.normalization = fit_normalization(train_set, dataset.die_width, dataset.die_height);
  auto r = train(model, train_set, val_set, config, on_epoch);
  if (report) *report = std::move(r);
  return model;
}

std::vector<TileCurrentMaps> raw_maps(const PdnGrid& grid, const Tiling& tiling, const TraceSource& traces,
                                      std::span<const std::size_t> which, std::size_t threads) {
  std::vector<TileCurrentMaps> out(which.size());
  parallel_for(which.size(), threads,
               [&](std::size_t i) { out[i] = tile_current_maps(traces(which[i]), tiling, grid); });
  return out;
}

std::vector<NoiseMap> predict_set(const Model& model, const PdnGrid& grid, const TraceSource& traces,
                                  std::size_t count, std::size_t threads) {
  const auto& c = model.config();
  const auto tiling = build_tiling(grid, c.m, c.n);
  auto distance = std::make_shared<const DistanceTensor>(distance_tensor(grid, tiling));
  if (distance->bumps != c.bumps) {
    throw ShapeMismatch("predict: design has " + std::to_string(distance->bumps) + " bumps, model expects " +
                        std::to_string(c.bumps));
  }
  std::vector<NoiseMap> out(count);
  parallel_for(count, threads, [&](std::size_t i) { out[i] = predict_trace(model, traces(i), grid, tiling, distance); });
  return out;
}

std::string file_hash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return hex64(fnv1a(bytes));
}

}  // namespace pdnoise
