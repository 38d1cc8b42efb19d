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
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdnoise/compress.hpp"
#include "pdnoise/features.hpp"
#include "pdnoise/grid.hpp"
#include "pdnoise/predictor.hpp"
#include "pdnoise/system.hpp"
#include "pdnoise/tiling.hpp"
#include "pdnoise/transient.hpp"

namespace pdnoise {

struct ErrorStats {
  double mean = 0.0;
  double p99 = 0.0;
  double max = 0.0;
};

/// Nearest-rank percentile: sorted[ceil(p n) - 1]. Throws on empty input.
double nearest_rank(std::vector<double> values, double p);
ErrorStats error_stats(std::span<const double> values);

struct AccuracyMetrics {
  ErrorStats ae;  // V
  ErrorStats re;  // fraction, tiles with truth >= re_floor only
  double re_max_unguarded = 0.0;
  double re_floor = 1e-3;
  std::size_t tiles = 0;
  std::size_t re_tiles = 0;
};

/// Per-tile |v - v_hat| pooled over every map; RE divides by the truth.
AccuracyMetrics accuracy_metrics(std::span<const NoiseMap> preds, std::span<const NoiseMap> truths,
                                 double re_floor = 1e-3);

struct HotspotMetrics {
  double v_spec = 0.1;
  std::size_t tp = 0, fn = 0, fp = 0, tn = 0;
  std::optional<double> missing_rate;  // FN / (TP + FN); none without true hotspots
  std::optional<double> auc;           // none unless both classes occur
};

/// Truth label truth >= v_spec, predicted label pred >= v_spec, and ROC-AUC
/// with the predicted noise as the score.
HotspotMetrics hotspot_metrics(std::span<const NoiseMap> preds, std::span<const NoiseMap> truths, double v_spec);

/// Mann-Whitney AUC, ties counted as one half. Empty when a class is missing.
std::optional<double> roc_auc(std::span<const double> scores, std::span<const char> labels);

struct TimingStats {
  std::size_t vectors = 0;
  std::size_t threads = 1;
  double predictor_s = 0.0;  // per vector
  double oracle_s = 0.0;     // per vector
  double speedup = 0.0;
};

struct MetricsReport {
  std::size_t maps = 0;
  AccuracyMetrics accuracy;
  HotspotMetrics hotspot;
  std::optional<TimingStats> timing;
};

inline constexpr int kMetricsSchemaMajor = 1;
MetricsReport evaluate_maps(std::span<const NoiseMap> preds, std::span<const NoiseMap> truths, double v_spec);
nlohmann::json to_json(const MetricsReport& r);
/// One metric,value row per scalar.
std::string to_csv(const MetricsReport& r);

/// Inference path used at run time: spatial maps, temporal compression at
/// the model's rate, then the network.
NoiseMap predict_trace(const Model& model, const CurrentTrace& trace, const PdnGrid& grid, const Tiling& tiling,
                       const std::shared_ptr<const DistanceTensor>& distance);
NoiseMap predict_maps(const Model& model, const TileCurrentMaps& raw, double rate, double rate_step,
                      const std::shared_ptr<const DistanceTensor>& distance);

/// Median over `repeats` runs of the mean per-vector wall-clock of the oracle
/// (simulate + tile reduction on a prefactored system) and of the predictor
/// (spatial maps + compression + forward). Runs on the calling thread.
TimingStats benchmark(const Model& model, const PdnGrid& grid, const SystemMatrix& sys, const Tiling& tiling,
                      const std::shared_ptr<const DistanceTensor>& distance, std::span<const CurrentTrace> traces,
                      std::size_t repeats = 3);

struct SweepRow {
  double rate = 0.0;
  std::size_t kept = 0;  // stamps per vector
  double mean_re = 0.0;
  double mean_ae = 0.0;
  double runtime_s = 0.0;  // per vector, compression + forward, median of 3
};

/// Model to use at compression rate r: a fixed model, or one retrained at r.
using ModelForRate = std::function<const Model&(double rate)>;

struct SweepInput {
  std::vector<TileCurrentMaps> raw;  // uncompressed test maps
  std::vector<NoiseMap> truth;
  std::shared_ptr<const DistanceTensor> distance;
};

std::vector<SweepRow> sweep_compression(const ModelForRate& model_for, const SweepInput& input,
                                        std::span<const double> rates, double rate_step);
std::string to_csv(std::span<const SweepRow> rows);

}  // namespace pdnoise
