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

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "pdnoise/error.hpp"
#include "pdnoise/eval.hpp"
#include "pdnoise/features.hpp"
#include "pdnoise/grid.hpp"
#include "pdnoise/json_util.hpp"
#include "pdnoise/parallel.hpp"
#include "pdnoise/pipeline.hpp"
#include "pdnoise/predictor.hpp"
#include "pdnoise/svg.hpp"
#include "pdnoise/system.hpp"
#include "pdnoise/tiling.hpp"
#include "pdnoise/tns.hpp"
#include "pdnoise/training.hpp"
#include "pdnoise/vectorgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pdnoise;

namespace {

// Options shared by every command.
struct Common {
  std::optional<std::uint64_t> seed;
  std::size_t threads = default_threads();
  std::string manifest;
};

// Collects what a command read and wrote for its run manifest.
struct Run {
  std::string command;
  json args = json::object();
  json inputs = json::object();
  json outputs = json::object();
  json seeds = json::object();
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "RNG seed (overrides the one in the config)");
  cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--manifest", c.manifest, "run manifest path (default: next to the output)");
}

void add_input(Run& run, const std::string& key, const fs::path& path) {
  json entry{{"path", path.string()}};
  if (fs::is_regular_file(path)) {
    entry["hash"] = file_hash(path);
  } else if (fs::is_regular_file(path / "manifest.json")) {
    entry["manifest_hash"] = file_hash(path / "manifest.json");
  }
  run.inputs[key] = entry;
}

fs::path default_manifest(const fs::path& out) {
  if (fs::is_directory(out)) return out / "run_manifest.json";
  return fs::path(out.string() + ".run.json");
}

void write_manifest(const Run& run, const Common& c, const fs::path& primary_out, double wall) {
  auto j = schema_header("run-manifest", 1);
  j["command"] = run.command;
  j["args"] = run.args;
  // Inputs enter the hash by content, so the same configuration on the same
  // data hashes equal regardless of where it runs.
  json hashed{{"command", run.command}, {"args", run.args}, {"seeds", run.seeds}, {"threads", c.threads}};
  for (const auto& [k, v] : run.inputs.items()) hashed["inputs"][k] = v.value("hash", v.value("manifest_hash", ""));
  j["config_hash"] = hex64(fnv1a(hashed.dump()));
  j["seeds"] = run.seeds;
  j["threads"] = c.threads;
  j["versions"] = {{"pdnoise", kVersion},
                   {"pdn_json", kPdnSchemaMajor},
                   {"vector_set", kVectorSetSchemaMajor},
                   {"noise_maps", kNoiseMapSchemaMajor},
                   {"dataset", kDatasetSchemaMajor},
                   {"checkpoint", kCheckpointSchemaMajor},
                   {"train_report", kTrainReportSchemaMajor},
                   {"metrics", kMetricsSchemaMajor}};
  j["inputs"] = run.inputs;
  j["outputs"] = run.outputs;
  j["wall_seconds"] = wall;
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["finished_utc"] = stamp;
  write_json(c.manifest.empty() ? default_manifest(primary_out) : fs::path(c.manifest), j);
}

std::pair<std::size_t, std::size_t> parse_tiles(const std::string& s) {
  const auto x = s.find_first_of("xX");
  if (x == std::string::npos) throw InvalidArgument("--tiles expects MxN, got '" + s + "'");
  try {
    std::size_t used = 0;
    const auto m = std::stoul(s.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(s);
    const auto n = std::stoul(s.substr(x + 1), &used);
    if (used != s.size() - x - 1) throw std::invalid_argument(s);
    return {m, n};
  } catch (const std::logic_error&) {
    throw InvalidArgument("--tiles expects MxN, got '" + s + "'");
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw InvalidArgument("bad number '" + item + "' in list");
    }
  }
  if (out.empty()) throw InvalidArgument("empty list");
  return out;
}

// Maps of `b` reordered to the ids of `a`.
std::vector<NoiseMap> align(const NoiseMapSet& a, const NoiseMapSet& b, const char* what) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < b.ids.size(); ++i) index[b.ids[i]] = i;
  std::vector<NoiseMap> out;
  for (const auto& id : a.ids) {
    const auto it = index.find(id);
    if (it == index.end()) throw InvalidArgument(std::string(what) + ": no map for " + id);
    out.push_back(b.maps[it->second]);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct GenDesign {
  std::string spec, out;
};

fs::path run_gen_design(const GenDesign& o, const Common& c, Run& run) {
  auto spec = grid_spec_from_json(read_json(o.spec));
  if (c.seed) spec.seed = *c.seed;
  add_input(run, "spec", o.spec);
  run.seeds["grid"] = spec.seed;
  run.args = {{"spec", to_json(spec)}};
  const auto grid = generate_grid(spec);
  save_grid(grid, o.out);
  spdlog::info("design: {} nodes, {} edges, {} bumps, {} loads", grid.node_count(), grid.edges.size(),
               grid.bump_count(), grid.load_count());
  run.outputs["design"] = {{"path", o.out}, {"hash", file_hash(o.out)}};
  return o.out;
}

struct GenVectors {
  std::string design, spec, out;
  std::size_t count = 500;
};

fs::path run_gen_vectors(const GenVectors& o, const Common& c, Run& run) {
  auto spec = vector_spec_from_json(read_json(o.spec));
  if (c.seed) spec.seed = *c.seed;
  add_input(run, "design", o.design);
  add_input(run, "spec", o.spec);
  run.seeds["vectors"] = spec.seed;
  run.args = {{"spec", to_json(spec)}, {"count", o.count}};
  const auto grid = load_grid(o.design);
  write_vectors(spec, grid, o.count, o.out, c.threads);
  spdlog::info("wrote {} vectors of {} stamps", o.count, spec.stamps);
  run.outputs["vectors"] = {{"path", o.out}, {"manifest_hash", file_hash(fs::path(o.out) / "manifest.json")}};
  return o.out;
}

struct Simulate {
  std::string design, vectors, tiles = "24x24", out;
};

fs::path run_simulate(const Simulate& o, const Common& c, Run& run) {
  const auto [m, n] = parse_tiles(o.tiles);
  add_input(run, "design", o.design);
  add_input(run, "vectors", o.vectors);
  run.args = {{"tiles", {m, n}}};
  const auto grid = load_grid(o.design);
  const auto vectors = open_vectors(o.vectors);
  const auto tiling = build_tiling(grid, m, n);
  NoiseMapSet set{m, n, vectors.ids, simulate_set(grid, vectors.spec.dt, tiling, vectors.source(), vectors.size(), c.threads)};
  save_noise_maps(set, o.out, "oracle");
  spdlog::info("simulated {} vectors on {}x{} tiles", set.maps.size(), m, n);
  run.outputs["truth"] = {{"path", o.out}};
  return o.out;
}

struct BuildDataset {
  std::string design, vectors, truth, tau = "auto", out;
  double r = 0.3, dr = 0.05, fraction = 0.6;
};

fs::path run_build_dataset(const BuildDataset& o, const Common& c, Run& run) {
  add_input(run, "design", o.design);
  add_input(run, "vectors", o.vectors);
  add_input(run, "truth", o.truth);
  DatasetOptions opt;
  opt.rate = o.r;
  opt.rate_step = o.dr;
  opt.accept_fraction = o.fraction;
  opt.seed = c.seed.value_or(1);
  opt.threads = c.threads;
  if (o.tau != "auto") {
    try {
      opt.tau = std::stod(o.tau);
    } catch (const std::logic_error&) {
      throw InvalidArgument("--tau expects a number or 'auto'");
    }
  }
  run.seeds["split"] = opt.seed;
  run.args = {{"r", o.r}, {"dr", o.dr}, {"tau", o.tau}, {"accept_fraction", o.fraction}};
  const auto grid = load_grid(o.design);
  const auto vectors = open_vectors(o.vectors);
  const auto truth_set = load_noise_maps(o.truth);
  NoiseMapSet ordered{truth_set.m, truth_set.n, vectors.ids, {}};
  const auto truth = align(ordered, truth_set, "build-dataset");
  const auto tiling = build_tiling(grid, truth_set.m, truth_set.n);
  auto d = build_dataset(grid, tiling, vectors.source(), truth, opt);
  for (auto& s : d.samples) s.provenance.grid_id = file_hash(o.design);
  save_dataset(d, o.out);
  run.outputs["dataset"] = {{"path", o.out}, {"tau", d.tau}};
  return o.out;
}

struct Train {
  std::string dataset, config, out;
  std::optional<std::size_t> epochs;
  std::optional<double> lr;
};

fs::path run_train(const Train& o, const Common& c, Run& run) {
  add_input(run, "dataset", o.dataset);
  ModelConfig mc;
  TrainConfig tc;
  if (!o.config.empty()) {
    add_input(run, "config", o.config);
    const auto j = read_json(o.config);
    if (j.contains("model")) mc = model_config_from_json(j.at("model"));
    if (j.contains("train")) tc = train_config_from_json(j.at("train"));
  }
  if (c.seed) mc.seed = tc.seed = *c.seed;
  if (o.epochs) tc.epochs = *o.epochs;
  if (o.lr) tc.lr = *o.lr;
  tc.threads = c.threads;
  const auto d = load_dataset(o.dataset);
  mc = model_config_for(d, mc);
  run.seeds["init"] = mc.seed;
  run.seeds["shuffle"] = tc.seed;
  run.args = {{"model", to_json(mc)}, {"train", to_json(tc)}};
  TrainReport report;
  const auto t0 = std::chrono::steady_clock::now();
  const auto model = train_on(d, mc, tc, &report, [&](const EpochRecord& e) {
    const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    spdlog::info("epoch {} train {:.6g} val {:.6g} ({:.0f} s)", e.epoch, e.train_loss, e.val_loss, el);
  });
  save_model(model, o.out);
  write_json(fs::path(o.out) / "train_report.json", to_json(report));
  write_text(fs::path(o.out) / "train_log.csv", to_csv(report));
  spdlog::info("best epoch {} val loss {:.6g}", report.best_epoch, report.best_val_loss);
  run.outputs["checkpoint"] = {{"path", o.out}, {"manifest_hash", file_hash(fs::path(o.out) / "manifest.json")}};
  return o.out;
}

struct Predict {
  std::string ckpt, design, vectors, out;
};

fs::path run_predict(const Predict& o, const Common& c, Run& run) {
  add_input(run, "checkpoint", o.ckpt);
  add_input(run, "design", o.design);
  add_input(run, "vectors", o.vectors);
  const auto model = load_model(o.ckpt);
  const auto grid = load_grid(o.design);
  const auto vectors = open_vectors(o.vectors);
  NoiseMapSet set{model.config().m, model.config().n, vectors.ids,
                  predict_set(model, grid, vectors.source(), vectors.size(), c.threads)};
  save_noise_maps(set, o.out, "predicted");
  run.outputs["pred"] = {{"path", o.out}};
  return o.out;
}

struct Evaluate {
  std::string pred, truth, report = "report.json", plots;
  double vspec = 0.1;
};

void write_plots(const fs::path& dir, const std::vector<NoiseMap>& pred, const std::vector<NoiseMap>& truth,
                 const std::vector<std::string>& ids) {
  fs::create_directories(dir);
  // The map with the largest true noise is the one a designer looks at first.
  std::size_t worst = 0;
  for (std::size_t i = 1; i < truth.size(); ++i) {
    if (truth[i].max() > truth[worst].max()) worst = i;
  }
  const double hi = std::max(truth[worst].max(), pred[worst].max());
  NoiseMap err(truth[worst].m, truth[worst].n);
  std::vector<double> ae, re;
  for (std::size_t t = 0; t < err.values.size(); ++t) err.values[t] = pred[worst].values[t] - truth[worst].values[t];
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (std::size_t t = 0; t < truth[i].values.size(); ++t) {
      const double e = std::abs(pred[i].values[t] - truth[i].values[t]);
      ae.push_back(e * 1e3);
      if (truth[i].values[t] >= 1e-3) re.push_back(100.0 * e / truth[i].values[t]);
    }
  }
  double span = 0.0;
  for (double v : err.values) span = std::max(span, std::abs(v));
  write_text(dir / "truth_heatmap.svg", svg::heatmap(truth[worst], "Oracle noise, " + ids[worst], 0.0, hi));
  write_text(dir / "pred_heatmap.svg", svg::heatmap(pred[worst], "Predicted noise, " + ids[worst], 0.0, hi));
  write_text(dir / "error_heatmap.svg", svg::heatmap(err, "Prediction error, " + ids[worst], -span, span));
  write_text(dir / "ae_histogram.svg", svg::histogram(ae, 40, "Absolute error per tile", "AE (mV)"));
  if (!re.empty()) write_text(dir / "re_histogram.svg", svg::histogram(re, 40, "Relative error per tile", "RE (%)"));
}

fs::path run_evaluate(const Evaluate& o, const Common& c, Run& run) {
  add_input(run, "pred", o.pred);
  add_input(run, "truth", o.truth);
  run.args = {{"vspec", o.vspec}};
  const auto pred = load_noise_maps(o.pred);
  const auto truth_set = load_noise_maps(o.truth);
  const auto truth = align(pred, truth_set, "evaluate");
  const auto report = evaluate_maps(pred.maps, truth, o.vspec);
  write_json(o.report, to_json(report));
  fs::path csv = o.report;
  csv.replace_extension(".csv");
  write_text(csv, to_csv(report));
  if (!o.plots.empty()) write_plots(o.plots, pred.maps, truth, pred.ids);
  spdlog::info("mean AE {:.3f} mV, mean RE {:.3f}%", report.accuracy.ae.mean * 1e3, report.accuracy.re.mean * 100);
  run.outputs["report"] = {{"path", o.report}, {"hash", file_hash(o.report)}};
  (void)c;
  return o.report;
}

struct Sweep {
  std::string ckpt, design, vectors, truth, dataset, r_list = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
                                                     out = "sweep.csv", plots;
  double dr = 0.05;
};

fs::path run_sweep(const Sweep& o, const Common& c, Run& run) {
  add_input(run, "checkpoint", o.ckpt);
  add_input(run, "design", o.design);
  add_input(run, "vectors", o.vectors);
  add_input(run, "truth", o.truth);
  const auto rates = parse_list(o.r_list);
  run.args = {{"rates", rates}, {"dr", o.dr}, {"model", "fixed"}};
  const auto model = load_model(o.ckpt);
  const auto grid = load_grid(o.design);
  const auto vectors = open_vectors(o.vectors);
  const auto truth_set = load_noise_maps(o.truth);
  const auto tiling = build_tiling(grid, model.config().m, model.config().n);

  std::vector<std::size_t> which;
  if (!o.dataset.empty()) {
    add_input(run, "dataset", o.dataset);
    const auto d = load_dataset(o.dataset);
    for (auto i : d.indices(Split::kTest)) which.push_back(d.samples[i].provenance.trace_id);
  } else {
    for (std::size_t i = 0; i < vectors.size(); ++i) which.push_back(i);
  }
  NoiseMapSet picked{truth_set.m, truth_set.n, {}, {}};
  for (auto i : which) picked.ids.push_back(vectors.ids.at(i));
  SweepInput input;
  input.truth = align(picked, truth_set, "sweep-compression");
  input.raw = raw_maps(grid, tiling, vectors.source(), which, c.threads);
  input.distance = std::make_shared<const DistanceTensor>(distance_tensor(grid, tiling));
  const auto rows = sweep_compression([&](double) -> const Model& { return model; }, input, rates, o.dr);
  write_text(o.out, to_csv(rows));
  if (!o.plots.empty()) {
    fs::create_directories(o.plots);
    svg::Series re{"mean RE", {}, {}}, rt{"runtime", {}, {}};
    for (const auto& r : rows) {
      re.x.push_back(r.rate);
      re.y.push_back(100.0 * r.mean_re);
      rt.x.push_back(r.rate);
      rt.y.push_back(1e3 * r.runtime_s);
    }
    write_text(fs::path(o.plots) / "sweep_re.svg",
               svg::line_plot(std::span(&re, 1), "Relative error vs compression rate", "r", "mean RE (%)"));
    write_text(fs::path(o.plots) / "sweep_runtime.svg",
               svg::line_plot(std::span(&rt, 1), "Inference time vs compression rate", "r", "ms per vector"));
  }
  run.outputs["sweep"] = {{"path", o.out}};
  return o.out;
}

struct Benchmark {
  std::string ckpt, design, vectors, report = "benchmark.json";
  std::size_t count = 10, repeats = 3;
};

fs::path run_benchmark(const Benchmark& o, const Common& c, Run& run) {
  add_input(run, "checkpoint", o.ckpt);
  add_input(run, "design", o.design);
  add_input(run, "vectors", o.vectors);
  run.args = {{"count", o.count}, {"repeats", o.repeats}};
  const auto model = load_model(o.ckpt);
  const auto grid = load_grid(o.design);
  const auto vectors = open_vectors(o.vectors);
  const auto tiling = build_tiling(grid, model.config().m, model.config().n);
  auto distance = std::make_shared<const DistanceTensor>(distance_tensor(grid, tiling));
  const auto sys = factor(stamp_system(grid, vectors.spec.dt));
  std::vector<CurrentTrace> traces;
  for (std::size_t i = 0; i < std::min(o.count, vectors.size()); ++i) traces.push_back(vectors.load(i));
  const auto t = benchmark(model, grid, sys, tiling, distance, traces, o.repeats);
  auto j = schema_header("benchmark", 1);
  j["vectors"] = t.vectors;
  j["threads"] = t.threads;
  j["predictor_s"] = t.predictor_s;
  j["oracle_s"] = t.oracle_s;
  j["speedup"] = t.speedup;
  write_json(o.report, j);
  spdlog::info("oracle {:.3f} s, predictor {:.4f} s per vector, speedup {:.1f}x", t.oracle_s, t.predictor_s,
               t.speedup);
  (void)c;
  run.outputs["report"] = {{"path", o.report}};
  return o.report;
}

const char* error_type(const std::exception& e) {
  if (dynamic_cast<const NotSpd*>(&e)) return "NotSpd";
  if (dynamic_cast<const ShapeMismatch*>(&e)) return "ShapeMismatch";
  if (dynamic_cast<const InvalidRate*>(&e)) return "InvalidRate";
  if (dynamic_cast<const FormatError*>(&e)) return "FormatError";
  if (dynamic_cast<const TrainingDiverged*>(&e)) return "TrainingDiverged";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "InvalidArgument";
  if (dynamic_cast<const json::exception*>(&e)) return "FormatError";
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return "IoError";
  return "Error";
}

void report_error(const std::string& type, const std::string& message, int code) {
  std::cerr << json{{"error", {{"type", type}, {"message", message}, {"exit_code", code}}}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Worst-case dynamic power-supply noise prediction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");
  app.add_flag("-q,--quiet", quiet, "warnings and errors only");

  Common common;
  Run run;
  std::function<fs::path()> action;

  GenDesign gd;
  auto* c_gd = app.add_subcommand("gen-design", "synthesize a power grid from a spec");
  c_gd->add_option("--spec", gd.spec, "grid spec JSON")->required();
  c_gd->add_option("--out", gd.out, "design .pdn.json")->required();
  add_common(c_gd, common);
  c_gd->callback([&] { action = [&] { return run_gen_design(gd, common, run); }; });

  GenVectors gv;
  auto* c_gv = app.add_subcommand("gen-vectors", "generate random current traces");
  c_gv->add_option("--design", gv.design)->required();
  c_gv->add_option("--spec", gv.spec, "vector spec JSON")->required();
  c_gv->add_option("--count", gv.count)->check(CLI::PositiveNumber);
  c_gv->add_option("--out", gv.out, "output directory")->required();
  add_common(c_gv, common);
  c_gv->callback([&] { action = [&] { return run_gen_vectors(gv, common, run); }; });

  Simulate sim;
  auto* c_sim = app.add_subcommand("simulate", "oracle worst-case tile noise");
  c_sim->add_option("--design", sim.design)->required();
  c_sim->add_option("--vectors", sim.vectors)->required();
  c_sim->add_option("--tiles", sim.tiles, "MxN");
  c_sim->add_option("--out", sim.out, "output directory")->required();
  add_common(c_sim, common);
  c_sim->callback([&] { action = [&] { return run_simulate(sim, common, run); }; });

  BuildDataset bd;
  auto* c_bd = app.add_subcommand("build-dataset", "compress, expand and split into a dataset");
  c_bd->add_option("--design", bd.design)->required();
  c_bd->add_option("--vectors", bd.vectors)->required();
  c_bd->add_option("--truth", bd.truth)->required();
  c_bd->add_option("--r", bd.r, "compression rate");
  c_bd->add_option("--dr", bd.dr, "split-ratio step");
  c_bd->add_option("--tau", bd.tau, "expansion threshold or 'auto'");
  c_bd->add_option("--accept-fraction", bd.fraction, "target accepted share for --tau auto");
  c_bd->add_option("--out", bd.out, "output directory")->required();
  add_common(c_bd, common);
  c_bd->callback([&] { action = [&] { return run_build_dataset(bd, common, run); }; });

  Train tr;
  auto* c_tr = app.add_subcommand("train", "train the predictor");
  c_tr->add_option("--dataset", tr.dataset)->required();
  c_tr->add_option("--config", tr.config, "JSON with optional 'model' and 'train' sections");
  c_tr->add_option("--epochs", tr.epochs);
  c_tr->add_option("--lr", tr.lr);
  c_tr->add_option("--out", tr.out, "checkpoint directory")->required();
  add_common(c_tr, common);
  c_tr->callback([&] { action = [&] { return run_train(tr, common, run); }; });

  Predict pr;
  auto* c_pr = app.add_subcommand("predict", "predict worst-case noise maps");
  c_pr->add_option("--ckpt", pr.ckpt)->required();
  c_pr->add_option("--design", pr.design)->required();
  c_pr->add_option("--vectors", pr.vectors)->required();
  c_pr->add_option("--out", pr.out, "output directory")->required();
  add_common(c_pr, common);
  c_pr->callback([&] { action = [&] { return run_predict(pr, common, run); }; });

  Evaluate ev;
  auto* c_ev = app.add_subcommand("evaluate", "accuracy and hotspot metrics");
  c_ev->add_option("--pred", ev.pred)->required();
  c_ev->add_option("--truth", ev.truth)->required();
  c_ev->add_option("--vspec", ev.vspec, "hotspot threshold (V)");
  c_ev->add_option("--report", ev.report, "JSON report; a CSV is written beside it");
  c_ev->add_option("--plots", ev.plots, "SVG output directory");
  add_common(c_ev, common);
  c_ev->callback([&] { action = [&] { return run_evaluate(ev, common, run); }; });

  Sweep sw;
  auto* c_sw = app.add_subcommand("sweep-compression", "accuracy and runtime across compression rates");
  c_sw->add_option("--ckpt", sw.ckpt)->required();
  c_sw->add_option("--design", sw.design)->required();
  c_sw->add_option("--vectors", sw.vectors)->required();
  c_sw->add_option("--truth", sw.truth)->required();
  c_sw->add_option("--dataset", sw.dataset, "restrict to this dataset's test split");
  c_sw->add_option("--r-list", sw.r_list);
  c_sw->add_option("--dr", sw.dr);
  c_sw->add_option("--out", sw.out);
  c_sw->add_option("--plots", sw.plots, "SVG output directory");
  add_common(c_sw, common);
  c_sw->callback([&] { action = [&] { return run_sweep(sw, common, run); }; });

  Benchmark bm;
  auto* c_bm = app.add_subcommand("benchmark", "single-threaded oracle vs predictor runtime");
  c_bm->add_option("--ckpt", bm.ckpt)->required();
  c_bm->add_option("--design", bm.design)->required();
  c_bm->add_option("--vectors", bm.vectors)->required();
  c_bm->add_option("--count", bm.count)->check(CLI::PositiveNumber);
  c_bm->add_option("--repeats", bm.repeats)->check(CLI::PositiveNumber);
  c_bm->add_option("--report", bm.report);
  add_common(c_bm, common);
  c_bm->callback([&] { action = [&] { return run_benchmark(bm, common, run); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("UsageError", e.what(), 2);
    return 2;
  }

  auto logger = spdlog::stderr_color_mt("pdnoise");
  spdlog::set_default_logger(logger);
  spdlog::set_level(verbose ? spdlog::level::debug : quiet ? spdlog::level::warn : spdlog::level::info);

  run.command = app.get_subcommands().front()->get_name();
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = action();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(run, common, out, wall);
  } catch (const std::exception& e) {
    report_error(error_type(e), e.what(), 1);
    return 1;
  }
  return 0;
}
