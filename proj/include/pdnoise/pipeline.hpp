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
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdnoise/grid.hpp"
#include "pdnoise/predictor.hpp"
#include "pdnoise/tiling.hpp"
#include "pdnoise/training.hpp"
#include "pdnoise/transient.hpp"
#include "pdnoise/vectorgen.hpp"

namespace pdnoise {

inline constexpr const char* kVersion = "0.1.0";

/// "v00042".
std::string vector_id(std::size_t index);

/// Produces trace i on demand, so a whole vector set never sits in memory.
using TraceSource = std::function<CurrentTrace(std::size_t index)>;

// Vector directory: manifest.json (the VectorSpec and ids) plus one
// <id>.tns per trace, dims (stamps, loads) in A.
inline constexpr int kVectorSetSchemaMajor = 1;

struct VectorSet {
  std::filesystem::path dir;
  VectorSpec spec;
  std::vector<std::string> ids;

  std::size_t size() const { return ids.size(); }
  CurrentTrace load(std::size_t i) const;
  TraceSource source() const;
};

/// Generates and writes `count` traces, `threads` at a time.
VectorSet write_vectors(const VectorSpec& spec, const PdnGrid& grid, std::size_t count,
                        const std::filesystem::path& dir, std::size_t threads);
VectorSet open_vectors(const std::filesystem::path& dir);

// Noise-map directory: manifest.json (tiling and ids) plus one <id>.tns per
// map, dims (m, n) in V.
inline constexpr int kNoiseMapSchemaMajor = 1;

struct NoiseMapSet {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<std::string> ids;
  std::vector<NoiseMap> maps;
};

void save_noise_maps(const NoiseMapSet& set, const std::filesystem::path& dir, const std::string& kind);
NoiseMapSet load_noise_maps(const std::filesystem::path& dir);

/// Oracle worst-case tile noise of every trace; the factorization is shared
/// read-only across `threads` workers.
std::vector<NoiseMap> simulate_set(const PdnGrid& grid, double dt, const Tiling& tiling, const TraceSource& traces,
                                   std::size_t count, std::size_t threads);

struct DatasetOptions {
  double rate = 0.3;
  double rate_step = 0.05;
  std::optional<double> tau;  // none: bisect for accept_fraction
  double accept_fraction = 0.6;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

/// Spatial maps, signatures and compressed maps per trace, then expansion and
/// the train/validation/test split.
Dataset build_dataset(const PdnGrid& grid, const Tiling& tiling, const TraceSource& traces,
                      std::span<const NoiseMap> truth, const DatasetOptions& options);

/// `base` with the tiling, bump count and compression rate of the dataset.
ModelConfig model_config_for(const Dataset& dataset, ModelConfig base);

/// Fits normalization on the training split and trains a fresh model.
Model train_on(const Dataset& dataset, const ModelConfig& base, const TrainConfig& config, TrainReport* report,
               const EpochCallback& on_epoch = {});

/// Raw (uncompressed) tile current maps of every trace.
std::vector<TileCurrentMaps> raw_maps(const PdnGrid& grid, const Tiling& tiling, const TraceSource& traces,
                                      std::span<const std::size_t> which, std::size_t threads);

std::vector<NoiseMap> predict_set(const Model& model, const PdnGrid& grid, const TraceSource& traces,
                                  std::size_t count, std::size_t threads);

/// FNV-1a of a file's bytes, hex.
std::string file_hash(const std::filesystem::path& path);

}  // namespace pdnoise
