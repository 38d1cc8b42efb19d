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
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdnoise/features.hpp"
#include "pdnoise/predictor.hpp"

namespace pdnoise {

enum class Split { kTrain, kValidation, kTest };
const char* to_string(Split s);
Split split_from_string(const std::string& s);

inline constexpr const char* kSignatureMetric = "tile-msd-euclidean";

struct Dataset {
  std::vector<Sample> samples;
  std::vector<Split> splits;  // parallel to samples
  double tau = 0.0;
  std::string metric = kSignatureMetric;
  double rate = 0.3;
  double rate_step = 0.05;
  double die_width = 0.0;
  double die_height = 0.0;
  double vdd = 1.0;

  std::vector<std::size_t> indices(Split s) const;
  std::vector<Sample> subset(Split s) const;
};

/// Signatures scaled by the largest entry over all candidates, so tau is
/// dimensionless and comparable across designs.
std::vector<std::vector<double>> normalized_signatures(std::span<const Sample> candidates);

/// Greedy pass in candidate order: a candidate joins when its distance to
/// every accepted signature exceeds tau. Returns accepted indices.
std::vector<std::size_t> expand_training_set(std::span<const std::vector<double>> signatures, double tau);
std::vector<std::size_t> expand_training_set(std::span<const Sample> candidates, double tau);

/// Bisection on tau so that about `fraction` of the candidates is accepted.
double auto_tau(std::span<const std::vector<double>> signatures, double fraction = 0.6);

/// Expansion-accepted samples become training data; the rest is shuffled by
/// seed, the first 30% (rounded) go to validation and the remainder to test.
std::vector<Split> split_samples(std::size_t count, std::span<const std::size_t> accepted, std::uint64_t seed);

struct TrainConfig {
  std::size_t epochs = 2000;
  double lr = 1e-4;
  std::size_t batch = 4;
  std::size_t patience = 100;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

inline constexpr int kTrainConfigSchemaMajor = 1;
nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // mean per-sample L1 (V) during the epoch
  double val_loss = 0.0;    // mean per-sample L1 (V) after the epoch
};

struct TrainReport {
  double initial_val_loss = 0.0;
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // 0 = initial weights
  double best_val_loss = 0.0;
  bool early_stopped = false;
  double wall_seconds = 0.0;  // kept out of the serialized report
};

inline constexpr int kTrainReportSchemaMajor = 1;
nlohmann::json to_json(const TrainReport& r);
std::string to_csv(const TrainReport& r);

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Adam on the summed-tile L1 loss averaged over each mini-batch. Per-sample
/// gradients are reduced in sample order, so results do not depend on
/// `threads`. Leaves the model at the best validation weights.
/// Throws TrainingDiverged on a non-finite loss.
TrainReport train(Model& model, std::span<const Sample> train_set, std::span<const Sample> val_set,
                  const TrainConfig& config, const EpochCallback& on_epoch = {});

/// Mean per-sample loss.
double mean_loss(const Model& model, std::span<const Sample> samples, std::size_t threads = 1);

// Dataset directory: manifest.json, distance.tns, and per sample
// <id>.maps.tns (K, m, n), <id>.truth.tns (m, n), <id>.sig.tns (m, n).
inline constexpr int kDatasetSchemaMajor = 1;
void save_dataset(const Dataset& d, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace pdnoise
