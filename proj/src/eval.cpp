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

#include "pdnoise/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pdnoise/error.hpp"
#include "pdnoise/json_util.hpp"

namespace pdnoise {

double nearest_rank(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidArgument("percentile of an empty set");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

ErrorStats error_stats(std::span<const double> values) {
  ErrorStats s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(values.size());
  s.p99 = nearest_rank({values.begin(), values.end()}, 0.99);
  return s;
}

namespace {

void check_pairs(std::span<const NoiseMap> preds, std::span<const NoiseMap> truths) {
  if (preds.size() != truths.size()) {
    throw ShapeMismatch("metrics: " + std::to_string(preds.size()) + " predictions vs " +
                        std::to_string(truths.size()) + " truths");
  }
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].m != truths[i].m || preds[i].n != truths[i].n ||
        preds[i].values.size() != truths[i].values.size()) {
      throw ShapeMismatch("metrics: map " + std::to_string(i) + " differs in shape");
    }
  }
}

}  // namespace

AccuracyMetrics accuracy_metrics(std::span<const NoiseMap> preds, std::span<const NoiseMap> truths,
                                 double re_floor) {
  check_pairs(preds, truths);
  AccuracyMetrics a;
  a.re_floor = re_floor;
  std::vector<double> ae, re;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t t = 0; t < preds[i].values.size(); ++t) {
      const double truth = truths[i].values[t];
      const double err = std::abs(preds[i].values[t] - truth);
      ae.push_back(err);
      if (truth > 0.0) a.re_max_unguarded = std::max(a.re_max_unguarded, err / truth);
      if (truth >= re_floor) re.push_back(err / truth);
    }
  }
  a.tiles = ae.size();
  a.re_tiles = re.size();
  a.ae = error_stats(ae);
  a.re = error_stats(re);
  return a;
}

std::optional<double> roc_auc(std::span<const double> scores, std::span<const char> labels) {
  if (scores.size() != labels.size()) throw ShapeMismatch("auc: scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        positive_rank_sum += rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;
  const double p = static_cast<double>(positives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(negatives));
}

HotspotMetrics hotspot_metrics(std::span<const NoiseMap> preds, std::span<const NoiseMap> truths, double v_spec) {
  check_pairs(preds, truths);
  HotspotMetrics h;
  h.v_spec = v_spec;
  std::vector<double> scores;
  std::vector<char> labels;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t t = 0; t < preds[i].values.size(); ++t) {
      const bool hot = truths[i].values[t] >= v_spec;
      const bool flagged = preds[i].values[t] >= v_spec;
      if (hot) {
        ++(flagged ? h.tp : h.fn);
      } else {
        ++(flagged ? h.fp : h.tn);
      }
      scores.push_back(preds[i].values[t]);
      labels.push_back(hot ? 1 : 0);
    }
  }
  if (h.tp + h.fn > 0) h.missing_rate = static_cast<double>(h.fn) / static_cast<double>(h.tp + h.fn);
  h.auc = roc_auc(scores, labels);
  return h;
}

MetricsReport evaluate_maps(std::span<const NoiseMap> preds, std::span<const NoiseMap> truths, double v_spec) {
  MetricsReport r;
  r.maps = preds.size();
  r.accuracy = accuracy_metrics(preds, truths);
  r.hotspot = hotspot_metrics(preds, truths, v_spec);
  return r;
}

namespace {

nlohmann::json stats_json(const ErrorStats& s) { return {{"mean", s.mean}, {"p99", s.p99}, {"max", s.max}}; }

template <typename T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json("N/A");
}

}  // namespace

nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json j = schema_header("metrics-report", kMetricsSchemaMajor);
  j["maps"] = r.maps;
  j["tiles"] = r.accuracy.tiles;
  j["ae_v"] = stats_json(r.accuracy.ae);
  j["re"] = stats_json(r.accuracy.re);
  j["re"]["floor_v"] = r.accuracy.re_floor;
  j["re"]["tiles"] = r.accuracy.re_tiles;
  j["re"]["max_unguarded"] = r.accuracy.re_max_unguarded;
  const auto& h = r.hotspot;
  j["hotspot"] = {{"v_spec", h.v_spec},
                  {"tp", h.tp},
                  {"fn", h.fn},
                  {"fp", h.fp},
                  {"tn", h.tn},
                  {"missing_rate", optional_json(h.missing_rate)},
                  {"auc", optional_json(h.auc)}};
  if (r.timing) {
    const auto& t = *r.timing;
    j["timing"] = {{"vectors", t.vectors},
                   {"threads", t.threads},
                   {"predictor_s", t.predictor_s},
                   {"oracle_s", t.oracle_s},
                   {"speedup", t.speedup}};
  }
  return j;
}

std::string to_csv(const MetricsReport& r) {
  std::ostringstream out;
  out.precision(17);
  auto opt = [](const std::optional<double>& v) {
    std::ostringstream s;
    s.precision(17);
    if (v) {
      s << *v;
    } else {
      s << "N/A";
    }
    return s.str();
  };
  out << "metric,value\n";
  out << "maps," << r.maps << '\n';
  out << "ae_mean_v," << r.accuracy.ae.mean << '\n';
  out << "ae_p99_v," << r.accuracy.ae.p99 << '\n';
  out << "ae_max_v," << r.accuracy.ae.max << '\n';
  out << "re_mean," << r.accuracy.re.mean << '\n';
  out << "re_p99," << r.accuracy.re.p99 << '\n';
  out << "re_max," << r.accuracy.re.max << '\n';
  out << "re_max_unguarded," << r.accuracy.re_max_unguarded << '\n';
  out << "v_spec_v," << r.hotspot.v_spec << '\n';
  out << "missing_rate," << opt(r.hotspot.missing_rate) << '\n';
  out << "auc," << opt(r.hotspot.auc) << '\n';
  if (r.timing) {
    out << "predictor_s," << r.timing->predictor_s << '\n';
    out << "oracle_s," << r.timing->oracle_s << '\n';
    out << "speedup," << r.timing->speedup << '\n';
    out << "threads," << r.timing->threads << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Inference and timing

NoiseMap predict_maps(const Model& model, const TileCurrentMaps& raw, double rate, double rate_step,
                      const std::shared_ptr<const DistanceTensor>& distance) {
  Sample s;
  s.maps = temporal_compress(raw, rate, rate_step).maps;
  s.distance = distance;
  return model.forward(s);
}

NoiseMap predict_trace(const Model& model, const CurrentTrace& trace, const PdnGrid& grid, const Tiling& tiling,
                       const std::shared_ptr<const DistanceTensor>& distance) {
  return predict_maps(model, tile_current_maps(trace, tiling, grid), model.config().rate, model.config().rate_step,
                      distance);
}

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
double median_per_item(std::size_t items, std::size_t repeats, Fn&& fn) {
  std::vector<double> runs;
  for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
    const auto start = Clock::now();
    for (std::size_t i = 0; i < items; ++i) fn(i);
    runs.push_back(std::chrono::duration<double>(Clock::now() - start).count() / static_cast<double>(items));
  }
  std::sort(runs.begin(), runs.end());
  return runs[runs.size() / 2];
}

}  // namespace

TimingStats benchmark(const Model& model, const PdnGrid& grid, const SystemMatrix& sys, const Tiling& tiling,
                      const std::shared_ptr<const DistanceTensor>& distance, std::span<const CurrentTrace> traces,
                      std::size_t repeats) {
  if (traces.empty()) throw InvalidArgument("benchmark: no vectors");
  TimingStats t;
  t.vectors = traces.size();
  t.threads = 1;
  double sink = 0.0;
  t.oracle_s = median_per_item(traces.size(), repeats, [&](std::size_t i) {
    sink += simulate_worst_case(grid, sys, traces[i], tiling).values[0];
  });
  t.predictor_s = median_per_item(traces.size(), repeats, [&](std::size_t i) {
    sink += predict_trace(model, traces[i], grid, tiling, distance).values[0];
  });
  if (!std::isfinite(sink)) throw InvalidArgument("benchmark: non-finite result");
  t.speedup = t.predictor_s > 0.0 ? t.oracle_s / t.predictor_s : 0.0;
  return t;
}

std::vector<SweepRow> sweep_compression(const ModelForRate& model_for, const SweepInput& input,
                                        std::span<const double> rates, double rate_step) {
  if (input.raw.size() != input.truth.size() || input.raw.empty()) {
    throw InvalidArgument("sweep: need one truth map per test vector");
  }
  std::vector<SweepRow> rows;
  for (double r : rates) {
    const Model& model = model_for(r);
    SweepRow row;
    row.rate = r;
    row.kept = static_cast<std::size_t>(std::llround(r * static_cast<double>(input.raw.front().stamps)));
    std::vector<NoiseMap> preds(input.raw.size());
    row.runtime_s = median_per_item(input.raw.size(), 3, [&](std::size_t i) {
      preds[i] = predict_maps(model, input.raw[i], r, rate_step, input.distance);
    });
    const auto acc = accuracy_metrics(preds, input.truth);
    row.mean_re = acc.re.mean;
    row.mean_ae = acc.ae.mean;
    rows.push_back(row);
  }
  return rows;
}

std::string to_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out.precision(17);
  out << "rate,kept,mean_re,mean_ae_v,runtime_s\n";
  for (const auto& r : rows) {
    out << r.rate << ',' << r.kept << ',' << r.mean_re << ',' << r.mean_ae << ',' << r.runtime_s << '\n';
  }
  return out.str();
}

}  // namespace pdnoise
