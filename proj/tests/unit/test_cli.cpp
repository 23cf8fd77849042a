// Copyright 2026 The ladri Authors
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

#include "cli.hpp"
#include "ladri/json_io.hpp"
#include "ladri/text.hpp"

namespace fs = std::filesystem;
using namespace ladri;

namespace
{

struct Result
{
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args)
{
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path workdir()
{
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "ladri_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path & p)
{
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string config(const std::string & name) { return (fs::path(LADRI_CONFIG_DIR) / name).string(); }

std::vector<std::string> lines(const std::string & text)
{
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

/// Small dataset plus a quickly trained model, shared by the tests below.
struct Pipeline
{
  fs::path data = workdir() / "data.csv";
  fs::path spec = workdir() / "spec.json";
  fs::path model = workdir() / "model.json";

  Pipeline()
  {
    const fs::path sweep = workdir() / "sweep.json";
    std::ofstream(sweep) << R"({"magnitudes": [0.35, 0.65], "lead_speeds": [11.11, 16.67, 22.22]})";
    std::ofstream(spec) << R"({"train": {"epochs": 4, "seed": 3}, "split": {"seed": 1}})";
    REQUIRE(run({"generate", "--sweep", sweep.string(), "--out", data.string()}).code == 0);
    REQUIRE(run({"train", "--data", data.string(), "--spec", spec.string(), "--out", model.string()}).code == 0);
  }
};

const Pipeline & pipeline()
{
  static const Pipeline p;
  return p;
}

}  // namespace

TEST_SUITE("cli")
{
  TEST_CASE("simulate reports a finite time to Critical for the stuck throttle")
  {
    const auto out = workdir() / "fig3.csv";
    const auto r = run({"simulate", "--config", config("fig3_unintended_accel.json"), "--out", out.string()});
    REQUIRE(r.code == 0);
    CHECK(r.err.empty());
    CHECK(r.out.find("Critical=none") == std::string::npos);
    CHECK(r.out.find("time_to_stage[front]:") != std::string::npos);
    const auto rows = lines(slurp(out));
    REQUIRE(rows.size() > 2);
    CHECK(rows[0].rfind("time,fault_active,v0_Ego_position", 0) == 0);
    CHECK(rows[0].find(",stage") != std::string::npos);
  }

  TEST_CASE("simulate on equilibrium never reaches Critical")
  {
    const auto r = run({"simulate", "--config", config("equilibrium.json"), "--out", (workdir() / "eq.csv").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("terminal: Completed") != std::string::npos);
    CHECK(r.out.find("Critical=none") != std::string::npos);
  }

  TEST_CASE("simulate with a follower reports the rear timeline")
  {
    const auto r = run({"simulate", "--config", config("fig4_unintended_brake.json"), "--out", (workdir() / "fig4.csv").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("time_to_stage[rear]:") != std::string::npos);
    CHECK(lines(slurp(workdir() / "fig4.csv"))[0].find("rear_stage") != std::string::npos);
  }

  TEST_CASE("missing config exits 2 with a parsable error line")
  {
    const auto r = run({"simulate", "--config", "/nonexistent.json", "--out", (workdir() / "x.csv").string()});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.rfind("error: ConfigError: ", 0) == 0);
  }

  TEST_CASE("invalid config field exits 2")
  {
    const auto cfg = workdir() / "bad.json";
    std::ofstream(cfg) << R"({"dt": 0, "vehicles": [{"role": "Ego"}]})";
    const auto r = run({"simulate", "--config", cfg.string(), "--out", (workdir() / "x.csv").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("ConfigError: dt") != std::string::npos);
  }

  TEST_CASE("usage errors exit 2")
  {
    CHECK(run({}).code == 2);
    CHECK(run({"fly"}).code == 2);
    CHECK(run({"simulate", "--config", "a.json"}).code == 2);
    const auto r = run({"evaluate", "--data", "x.csv"});
    CHECK(r.code == 2);
    CHECK(r.err.rfind("error: UsageError: ", 0) == 0);
    const auto h = run({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("simulate") != std::string::npos);
  }

  TEST_CASE("generate, train and evaluate")
  {
    const auto & p = pipeline();
    CHECK(slurp(p.data).rfind("scenario_id,time,rel_distance", 0) == 0);
    CHECK(fs::exists(p.model.string() + ".history.csv"));
    CHECK(lines(slurp(p.model.string() + ".history.csv")).size() == 1 + 5);

    const auto csv = workdir() / "metrics.csv";
    const auto r = run({"evaluate", "--data", p.data.string(), "--model", p.model.string(), "--baseline", "--kfold", "3", "--csv", csv.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("nn.test.accuracy: ") != std::string::npos);
    CHECK(r.out.find("baseline.test.macro_f1: ") != std::string::npos);
    CHECK(r.out.find("cv.accuracy: mean=") != std::string::npos);
    const auto rows = lines(slurp(csv));
    CHECK(rows.size() == 1 + 1 + 1 + 3);
    CHECK(rows[1].rfind("nn,test,", 0) == 0);
  }

  TEST_CASE("commands are deterministic")
  {
    const auto & p = pipeline();
    const auto again = workdir() / "model_again.json";
    REQUIRE(run({"train", "--data", p.data.string(), "--spec", p.spec.string(), "--out", again.string()}).code == 0);
    CHECK(slurp(again) == slurp(p.model));
    const auto a = run({"evaluate", "--data", p.data.string(), "--model", p.model.string()});
    const auto b = run({"evaluate", "--data", p.data.string(), "--model", again.string()});
    auto strip = [](const std::string & s) {
      std::string kept;
      for (const auto & l : lines(s)) {
        if (l.find("latency") == std::string::npos) kept += l + "\n";
      }
      return kept;
    };
    CHECK(strip(a.out) == strip(b.out));
  }

  TEST_CASE("LADRI_SEED overrides the configured seed")
  {
    const auto & p = pipeline();
    const auto seeded = workdir() / "model_seeded.json";
    setenv("LADRI_SEED", "12345", 1);
    const auto r = run({"train", "--data", p.data.string(), "--spec", p.spec.string(), "--out", seeded.string()});
    unsetenv("LADRI_SEED");
    REQUIRE(r.code == 0);
    CHECK(slurp(seeded) != slurp(p.model));
    const auto model = load_model(seeded);
    REQUIRE(model.training);
    CHECK(model.training->train.seed == 12345);

    setenv("LADRI_SEED", "abc", 1);
    CHECK(run({"train", "--data", p.data.string(), "--spec", p.spec.string(), "--out", seeded.string()}).code == 2);
    unsetenv("LADRI_SEED");
  }

  TEST_CASE("assess writes per-frame predictions")
  {
    const auto & p = pipeline();
    const auto out = workdir() / "assess.csv";
    const auto r = run({"assess", "--config", config("fig3_unintended_accel.json"), "--model", p.model.string(), "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto rows = lines(slurp(out));
    CHECK(rows[0] == "time,oracle_stage,predicted_stage,p_Safe,p_Warning,p_Hazardous,p_Critical,inference_latency");
    CHECK(r.out.find("agreement: ") != std::string::npos);
    const auto pos = r.out.find("mean_inference_latency: ");
    REQUIRE(pos != std::string::npos);
    const auto latency = parse_double(lines(r.out.substr(pos + 24))[0]);
    REQUIRE(latency);
    CHECK(*latency < 1e-3);
  }

  TEST_CASE("assess with a zero-weight model predicts Critical everywhere")
  {
    const auto model = workdir() / "zero.json";
    save_model(ModelFile{ModelWeights::zeros(NetworkSpec{}), std::nullopt}, model);
    const auto out = workdir() / "zero.csv";
    REQUIRE(run({"assess", "--config", config("equilibrium.json"), "--model", model.string(), "--out", out.string()}).code == 0);
    const auto rows = lines(slurp(out));
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto fields = split(rows[i], ',');
      CHECK(fields[2] == "3");
    }
  }

  TEST_CASE("a model from another feature contract exits 1 with VersionError")
  {
    auto j = model_to_json(ModelFile{ModelWeights::zeros(NetworkSpec{}), std::nullopt});
    j["feature_contract_version"] = 99;
    const auto model = workdir() / "old.json";
    std::ofstream(model) << j.dump();
    const auto r = run({"assess", "--config", config("equilibrium.json"), "--model", model.string(), "--out", (workdir() / "o.csv").string()});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: VersionError: ", 0) == 0);
  }

  TEST_CASE("runtime errors exit 1")
  {
    const auto r = run({"train", "--data", "/nonexistent.csv", "--spec", config("training.json"), "--out", (workdir() / "m.json").string()});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: DataError: ", 0) == 0);
  }
}
