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

#include "pdnoise/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "pdnoise/error.hpp"
#include "pdnoise/json_util.hpp"
#include "pdnoise/nn/adam.hpp"
#include "pdnoise/parallel.hpp"
#include "pdnoise/rng.hpp"
#include "pdnoise/tns.hpp"

namespace pdnoise {

const char* to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::kTrain;
  if (s == "val") return Split::kValidation;
  if (s == "test") return Split::kTest;
  throw FormatError("unknown split label '" + s + "'");
}

std::vector<std::size_t> Dataset::indices(Split s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < splits.size(); ++i) {
    if (splits[i] == s) out.push_back(i);
  }
  return out;
}

std::vector<Sample> Dataset::subset(Split s) const {
  std::vector<Sample> out;
  for (auto i : indices(s)) out.push_back(samples[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Expansion and split

std::vector<std::vector<double>> normalized_signatures(std::span<const Sample> candidates) {
  double scale = 0.0;
  for (const auto& s : candidates) {
    for (double v : s.signature) scale = std::max(scale, std::abs(v));
  }
  std::vector<std::vector<double>> out;
  out.reserve(candidates.size());
  for (const auto& s : candidates) {
    if (!candidates.empty() && s.signature.size() != candidates.front().signature.size()) {
      throw ShapeMismatch("expansion: signatures differ in length");
    }
    auto sig = s.signature;
    if (scale > 0.0) {
      for (auto& v : sig) v /= scale;
    }
    out.push_back(std::move(sig));
  }
  return out;
}

namespace {

double signature_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

std::vector<std::size_t> expand_training_set(std::span<const std::vector<double>> signatures, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("expansion threshold must be >= 0");
  std::vector<std::size_t> accepted;
  for (std::size_t i = 0; i < signatures.size(); ++i) {
    bool far = true;
    for (auto j : accepted) {
      if (!(signature_distance(signatures[i], signatures[j]) > tau)) {
        far = false;
        break;
      }
    }
    if (far) accepted.push_back(i);
  }
  return accepted;
}

std::vector<std::size_t> expand_training_set(std::span<const Sample> candidates, double tau) {
  const auto sigs = normalized_signatures(candidates);
  return expand_training_set(sigs, tau);
}

double auto_tau(std::span<const std::vector<double>> signatures, double fraction) {
  if (signatures.empty()) return 0.0;
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidArgument("auto_tau: fraction must lie in (0, 1]");
  const auto target = static_cast<std::ptrdiff_t>(
      std::max<long long>(1, std::llround(fraction * static_cast<double>(signatures.size()))));
  double hi = 0.0;
  for (std::size_t i = 0; i < signatures.size(); ++i) {
    for (std::size_t j = i + 1; j < signatures.size(); ++j) {
      hi = std::max(hi, signature_distance(signatures[i], signatures[j]));
    }
  }
  // Acceptance shrinks as tau grows: find the largest tau that still keeps
  // at least `target` samples, and compare it with the next step up.
  double lo = 0.0;
  auto count = [&](double tau) { return static_cast<std::ptrdiff_t>(expand_training_set(signatures, tau).size()); };
  if (count(lo) <= target) return lo;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count(mid) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(count(hi) - target) < std::abs(count(lo) - target) ? hi : lo;
}

std::vector<Split> split_samples(std::size_t count, std::span<const std::size_t> accepted, std::uint64_t seed) {
  std::vector<Split> splits(count, Split::kTest);
  std::vector<char> is_train(count, 0);
  for (auto i : accepted) {
    if (i >= count) throw InvalidArgument("split: accepted index out of range");
    is_train[i] = 1;
    splits[i] = Split::kTrain;
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < count; ++i) {
    if (!is_train[i]) rest.push_back(i);
  }
  Rng rng(seed);
  for (std::size_t i = rest.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(rest[i - 1], rest[j]);
  }
  const auto val = static_cast<std::size_t>(std::llround(0.3 * static_cast<double>(rest.size())));
  for (std::size_t k = 0; k < val; ++k) splits[rest[k]] = Split::kValidation;
  return splits;
}

// ---------------------------------------------------------------------------
// Training

nlohmann::json to_json(const TrainConfig& c) {
  nlohmann::json j = schema_header("train-config", kTrainConfigSchemaMajor);
  j["epochs"] = c.epochs;
  j["lr"] = c.lr;
  j["batch"] = c.batch;
  j["patience"] = c.patience;
  j["seed"] = c.seed;
  return j;
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  check_schema(j, "train-config", kTrainConfigSchemaMajor);
  TrainConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.lr = j.value("lr", c.lr);
  c.batch = j.value("batch", c.batch);
  c.patience = j.value("patience", c.patience);
  c.seed = j.value("seed", c.seed);
  return c;
}

nlohmann::json to_json(const TrainReport& r) {
  nlohmann::json j = schema_header("train-report", kTrainReportSchemaMajor);
  j["initial_val_loss"] = r.initial_val_loss;
  j["best_epoch"] = r.best_epoch;
  j["best_val_loss"] = r.best_val_loss;
  j["early_stopped"] = r.early_stopped;
  auto epochs = nlohmann::json::array();
  for (const auto& e : r.epochs) {
    epochs.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"val_loss", e.val_loss}});
  }
  j["epochs"] = std::move(epochs);
  return j;
}

std::string to_csv(const TrainReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,train_loss,val_loss\n";
  for (const auto& e : r.epochs) out << e.epoch << ',' << e.train_loss << ',' << e.val_loss << '\n';
  return out.str();
}

double mean_loss(const Model& model, std::span<const Sample> samples, std::size_t threads) {
  if (samples.empty()) return 0.0;
  std::vector<double> losses(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t i) { losses[i] = model.loss(samples[i]); });
  double s = 0.0;
  for (double l : losses) s += l;
  return s / static_cast<double>(samples.size());
}

namespace {

std::vector<nn::Tensor> snapshot(Model& model) {
  std::vector<nn::Tensor> out;
  for (auto* p : model.parameters()) out.push_back(p->value);
  return out;
}

void restore(Model& model, const std::vector<nn::Tensor>& values) {
  auto params = model.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = values[i];
}

}  // namespace

TrainReport train(Model& model, std::span<const Sample> train_set, std::span<const Sample> val_set,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
  if (train_set.empty() || val_set.empty()) throw InvalidArgument("train: need nonempty train and validation sets");
  if (config.batch < 1) throw InvalidArgument("train: batch must be >= 1");
  if (!(config.lr >= 0.0)) throw InvalidArgument("train: learning rate must be >= 0");
  const auto start = std::chrono::steady_clock::now();

  if (!model.normalization.fitted) {
    throw InvalidArgument("train: model normalization must be fitted before training");
  }
  auto params = model.parameters();
  nn::AdamState adam = nn::make_adam(params, config.lr);
  Rng rng(Rng::derive(config.seed, 0x7261696eULL));

  TrainReport report;
  report.initial_val_loss = mean_loss(model, val_set, config.threads);
  if (!std::isfinite(report.initial_val_loss)) throw TrainingDiverged("train: initial validation loss is not finite");
  report.best_val_loss = report.initial_val_loss;
  auto best = snapshot(model);

  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  const std::size_t batch = std::min(config.batch, train_set.size());
  std::vector<Model> workers(batch, model);
  std::vector<double> batch_loss(batch);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(order[i - 1], order[j]);
    }
    double epoch_loss = 0.0;
    for (std::size_t first = 0; first < order.size(); first += batch) {
      const std::size_t count = std::min(batch, order.size() - first);
      const double weight = 1.0 / static_cast<double>(count);
      parallel_for(count, config.threads, [&](std::size_t b) {
        Model& w = workers[b];
        auto wp = w.parameters();
        for (std::size_t p = 0; p < params.size(); ++p) wp[p]->value = params[p]->value;
        w.zero_grad();
        batch_loss[b] = w.accumulate_gradients(train_set[order[first + b]], weight);
      });
      model.zero_grad();
      for (std::size_t b = 0; b < count; ++b) {
        if (!std::isfinite(batch_loss[b])) {
          throw TrainingDiverged("train: non-finite loss at epoch " + std::to_string(epoch) + " on training sample " +
                                 std::to_string(order[first + b]));
        }
        epoch_loss += batch_loss[b];
        auto wp = workers[b].parameters();
        for (std::size_t p = 0; p < params.size(); ++p) {
          auto& g = params[p]->grad;
          const auto& src = wp[p]->grad;
          for (std::size_t k = 0; k < g.size(); ++k) g[k] += src[k];
        }
      }
      nn::adam_step(params, adam);
    }

    EpochRecord rec{epoch, epoch_loss / static_cast<double>(train_set.size()), mean_loss(model, val_set, config.threads)};
    if (!std::isfinite(rec.val_loss)) {
      throw TrainingDiverged("train: non-finite validation loss at epoch " + std::to_string(epoch));
    }
    report.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (rec.val_loss < report.best_val_loss) {
      report.best_val_loss = rec.val_loss;
      report.best_epoch = epoch;
      best = snapshot(model);
    } else if (epoch - report.best_epoch >= config.patience) {
      report.early_stopped = true;
      break;
    }
  }
  restore(model, best);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------
// Dataset I/O

namespace {

std::string sample_id(std::size_t i) {
  std::string s = std::to_string(i);
  return "s" + std::string(s.size() < 5 ? 5 - s.size() : 0, '0') + s;
}

std::vector<std::uint32_t> dims32(std::initializer_list<std::size_t> dims) {
  std::vector<std::uint32_t> out;
  for (auto d : dims) out.push_back(static_cast<std::uint32_t>(d));
  return out;
}

tns::Tensor read_expect(const std::filesystem::path& path, std::vector<std::uint32_t> dims) {
  auto t = tns::read(path);
  if (t.dims != dims) throw FormatError(path.string() + ": unexpected tensor dims");
  return t;
}

}  // namespace

void save_dataset(const Dataset& d, const std::filesystem::path& dir) {
  if (d.samples.size() != d.splits.size()) throw InvalidArgument("dataset: split labels do not match samples");
  if (d.samples.empty()) throw InvalidArgument("dataset: no samples");
  std::filesystem::create_directories(dir);
  const auto& dist = *d.samples.front().distance;
  tns::write_f64(dir / "distance.tns", dims32({dist.bumps, dist.m, dist.n}), dist.values);

  nlohmann::json j = schema_header("pdn-dataset", kDatasetSchemaMajor);
  j["tau"] = d.tau;
  j["metric"] = d.metric;
  j["rate"] = d.rate;
  j["rate_step"] = d.rate_step;
  j["die_width_um"] = d.die_width;
  j["die_height_um"] = d.die_height;
  j["vdd_v"] = d.vdd;
  j["m"] = dist.m;
  j["n"] = dist.n;
  j["bumps"] = dist.bumps;
  j["dt_s"] = d.samples.front().maps.dt;
  auto entries = nlohmann::json::array();
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    const Sample& s = d.samples[i];
    check_sample(s);
    if (s.distance->values != dist.values) throw InvalidArgument("dataset: samples must share one distance tensor");
    const std::string id = sample_id(i);
    nlohmann::json e{{"id", id},
                     {"split", to_string(d.splits[i])},
                     {"grid_id", s.provenance.grid_id},
                     {"trace_id", s.provenance.trace_id},
                     {"rate", s.provenance.rate},
                     {"r_s", s.provenance.split},
                     {"stamps", s.maps.stamps},
                     {"maps", id + ".maps.tns"},
                     {"signature", id + ".sig.tns"}};
    tns::write_f64(dir / (id + ".maps.tns"), dims32({s.maps.stamps, s.maps.m, s.maps.n}), s.maps.values);
    tns::write_f64(dir / (id + ".sig.tns"), dims32({s.maps.m, s.maps.n}), s.signature);
    if (s.truth) {
      e["truth"] = id + ".truth.tns";
      tns::write_f64(dir / (id + ".truth.tns"), dims32({s.truth->m, s.truth->n}), s.truth->values);
    }
    entries.push_back(std::move(e));
  }
  j["samples"] = std::move(entries);
  write_json(dir / "manifest.json", j);
}

Dataset load_dataset(const std::filesystem::path& dir) {
  const auto j = read_json(dir / "manifest.json");
  check_schema(j, "pdn-dataset", kDatasetSchemaMajor);
  Dataset d;
  d.tau = j.at("tau").get<double>();
  d.metric = j.at("metric").get<std::string>();
  d.rate = j.at("rate").get<double>();
  d.rate_step = j.at("rate_step").get<double>();
  d.die_width = j.at("die_width_um").get<double>();
  d.die_height = j.at("die_height_um").get<double>();
  d.vdd = j.value("vdd_v", 1.0);
  const auto m = j.at("m").get<std::size_t>();
  const auto n = j.at("n").get<std::size_t>();
  const auto bumps = j.at("bumps").get<std::size_t>();
  const double dt = j.at("dt_s").get<double>();

  auto dist = std::make_shared<DistanceTensor>();
  dist->bumps = bumps;
  dist->m = m;
  dist->n = n;
  dist->values = read_expect(dir / "distance.tns", dims32({bumps, m, n})).values;

  for (const auto& e : j.at("samples")) {
    Sample s;
    s.distance = dist;
    s.maps.m = m;
    s.maps.n = n;
    s.maps.dt = dt;
    s.maps.stamps = e.at("stamps").get<std::size_t>();
    s.maps.values = read_expect(dir / e.at("maps").get<std::string>(), dims32({s.maps.stamps, m, n})).values;
    s.signature = read_expect(dir / e.at("signature").get<std::string>(), dims32({m, n})).values;
    if (e.contains("truth")) {
      NoiseMap truth(m, n);
      truth.values = read_expect(dir / e.at("truth").get<std::string>(), dims32({m, n})).values;
      s.truth = std::move(truth);
    }
    s.provenance.grid_id = e.at("grid_id").get<std::string>();
    s.provenance.trace_id = e.at("trace_id").get<std::size_t>();
    s.provenance.rate = e.at("rate").get<double>();
    s.provenance.split = e.at("r_s").get<double>();
    d.samples.push_back(std::move(s));
    d.splits.push_back(split_from_string(e.at("split").get<std::string>()));
  }
  return d;
}

}  // namespace pdnoise
