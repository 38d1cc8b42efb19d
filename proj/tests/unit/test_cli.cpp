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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pdnoise/json_util.hpp"
#include "pdnoise/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::temp_directory_path() / "pdnoise_cli_test";

int cli(const std::string& args, const std::string& tag = "cmd") {
  const std::string cmd = std::string(PDNOISE_CLI) + " -q " + args + " 2> " + (kWork / (tag + ".err")).string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string w(const std::string& name) { return (kWork / name).string(); }

void write(const std::string& name, const json& j) { pdnoise::write_json(kWork / name, j); }

}  // namespace

TEST_CASE("command-line pipeline") {
  fs::remove_all(kWork);
  fs::create_directories(kWork);
  write("grid.json", {{"format", "pdn-grid-spec"},
                      {"version", "1.0"},
                      {"die_width_um", 80.0},
                      {"die_height_um", 80.0},
                      {"pitch_um", 10.0},
                      {"bump_count", 4},
                      {"load_count", 24},
                      {"wire_resistance_ohm_per_um", 0.1},
                      {"bump_resistance_ohm", 0.3}});
  write("vec.json", {{"format", "vector-spec"},
                     {"version", "1.0"},
                     {"stamps", 120},
                     {"idle_min", 10},
                     {"idle_max", 30},
                     {"burst_min", 5},
                     {"burst_max", 15},
                     {"ramp", 2},
                     {"activity_blocks", 2},
                     {"amplitude_min", 5e-3},
                     {"amplitude_max", 2e-2}});
  write("train.json", {{"model",
                        {{"format", "model-config"},
                         {"version", "1.0"},
                         {"distance_channels", 2},
                         {"fusion_channels", 2},
                         {"noise_channels", 4}}},
                       {"train", {{"format", "train-config"}, {"version", "1.0"}, {"epochs", 3}, {"lr", 1e-3}}}});

  SUBCASE("gen-design is reproducible") {
    REQUIRE(cli("gen-design --spec " + w("grid.json") + " --out " + w("a.pdn.json") + " --seed 5") == 0);
    REQUIRE(cli("gen-design --spec " + w("grid.json") + " --out " + w("b.pdn.json") + " --seed 5") == 0);
    CHECK(slurp(w("a.pdn.json")) == slurp(w("b.pdn.json")));
    const auto m = pdnoise::read_json(w("a.pdn.json.run.json"));
    CHECK(m["command"] == "gen-design");
    CHECK(m["seeds"]["grid"] == 5);
    CHECK(m.contains("config_hash"));
    CHECK(m.contains("wall_seconds"));
    CHECK(m["versions"]["pdnoise"] == pdnoise::kVersion);
  }

  SUBCASE("end to end on 8x8 tiles and 20 vectors") {
    REQUIRE(cli("gen-design --spec " + w("grid.json") + " --out " + w("d.pdn.json")) == 0);
    REQUIRE(cli("gen-vectors --design " + w("d.pdn.json") + " --spec " + w("vec.json") + " --count 20 --out " +
                w("vec") + " --threads 2") == 0);
    REQUIRE(cli("simulate --design " + w("d.pdn.json") + " --vectors " + w("vec") + " --tiles 8x8 --out " +
                w("truth")) == 0);
    REQUIRE(cli("build-dataset --design " + w("d.pdn.json") + " --vectors " + w("vec") + " --truth " + w("truth") +
                " --r 0.3 --dr 0.05 --tau auto --seed 3 --out " + w("ds")) == 0);
    REQUIRE(cli("train --dataset " + w("ds") + " --config " + w("train.json") + " --out " + w("ckpt")) == 0);
    REQUIRE(cli("predict --ckpt " + w("ckpt") + " --design " + w("d.pdn.json") + " --vectors " + w("vec") +
                " --out " + w("pred")) == 0);
    REQUIRE(cli("evaluate --pred " + w("pred") + " --truth " + w("truth") + " --vspec 0.1 --report " +
                w("report.json") + " --plots " + w("plots")) == 0);
    REQUIRE(cli("sweep-compression --ckpt " + w("ckpt") + " --design " + w("d.pdn.json") + " --vectors " +
                w("vec") + " --truth " + w("truth") + " --dataset " + w("ds") + " --r-list 0.2,0.5 --out " +
                w("sweep.csv") + " --plots " + w("plots")) == 0);
    REQUIRE(cli("benchmark --ckpt " + w("ckpt") + " --design " + w("d.pdn.json") + " --vectors " + w("vec") +
                " --count 2 --repeats 1 --report " + w("bench.json")) == 0);

    const auto report = pdnoise::read_json(w("report.json"));
    CHECK(report["format"] == "metrics-report");
    CHECK(report["maps"] == 20);
    for (const char* k : {"ae_v", "re"}) {
      const double mean = report[k]["mean"], p99 = report[k]["p99"], max = report[k]["max"];
      CHECK(mean <= p99);
      CHECK(p99 <= max);
    }
    const auto& h = report["hotspot"];
    CHECK(h["v_spec"] == 0.1);
    if (h["auc"].is_number()) CHECK((h["auc"] >= 0.0 && h["auc"] <= 1.0));
    if (h["missing_rate"].is_number()) CHECK((h["missing_rate"] >= 0.0 && h["missing_rate"] <= 1.0));
    CHECK(fs::exists(w("report.csv")));
    CHECK(fs::exists(w("plots/truth_heatmap.svg")));
    CHECK(fs::exists(w("plots/sweep_re.svg")));
    CHECK(fs::exists(w("ckpt/train_report.json")));
    CHECK(fs::exists(w("ckpt/run_manifest.json")));
    CHECK(pdnoise::read_json(w("bench.json"))["speedup"] > 0.0);
    std::ifstream sweep(w("sweep.csv"));
    std::string header;
    std::getline(sweep, header);
    CHECK(header == "rate,kept,mean_re,mean_ae_v,runtime_s");

    SUBCASE("evaluate on identical maps reports zero error") {
      REQUIRE(cli("evaluate --pred " + w("truth") + " --truth " + w("truth") + " --report " + w("self.json")) == 0);
      const auto self = pdnoise::read_json(w("self.json"));
      CHECK(self["ae_v"]["max"] == 0.0);
      CHECK(self["re"]["max"] == 0.0);
    }
    SUBCASE("training is reproducible") {
      REQUIRE(cli("train --dataset " + w("ds") + " --config " + w("train.json") + " --out " + w("ckpt2") +
                  " --threads 3") == 0);
      for (const auto& e : fs::directory_iterator(w("ckpt"))) {
        if (e.path().filename() == "run_manifest.json") continue;
        CHECK_MESSAGE(slurp(e.path()) == slurp(fs::path(w("ckpt2")) / e.path().filename()), e.path().string());
      }
    }
  }

  SUBCASE("failures produce error JSON and a nonzero exit") {
    CHECK(cli("gen-design --spec " + w("missing.json") + " --out " + w("x.pdn.json"), "missing") == 1);
    const auto err = json::parse(slurp(kWork / "missing.err"));
    CHECK(err["error"].contains("type"));
    CHECK(err["error"].contains("message"));
    CHECK(cli("simulate --design x --vectors y --tiles 8by8 --out z", "tiles") == 1);
    CHECK(cli("no-such-command", "usage") == 2);
    CHECK(json::parse(slurp(kWork / "usage.err"))["error"]["type"] == "UsageError");
  }
  fs::remove_all(kWork);
}
