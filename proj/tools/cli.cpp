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

#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ladri/dataset.hpp"
#include "ladri/error.hpp"
#include "ladri/evaluation.hpp"
#include "ladri/features.hpp"
#include "ladri/json_io.hpp"
#include "ladri/labeling.hpp"
#include "ladri/network.hpp"
#include "ladri/scenario.hpp"
#include "ladri/sensors.hpp"
#include "ladri/text.hpp"

namespace ladri::cli
{

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

std::optional<std::uint64_t> env_seed()
{
  const char * raw = std::getenv("LADRI_SEED");
  if (!raw || !*raw) return std::nullopt;
  const auto v = parse_integer(raw);
  if (!v || *v < 0) throw ConfigError("LADRI_SEED", "must be a non-negative integer");
  return static_cast<std::uint64_t>(*v);
}

std::ofstream open_out(const std::string & path)
{
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Data, "cannot open " + path + " for writing");
  return out;
}

std::string opt_time(const std::optional<double> & t)
{
  return t ? format_double(*t) : std::string("none");
}

void print_stage_times(std::ostream & out, const char * side, const TraceLabels & labels)
{
  out << "time_to_stage[" << side << "]:";
  for (int k = 0; k < kStageCount; ++k) {
    out << ' ' << to_string(static_cast<RiskStage>(k)) << '='
        << opt_time(labels.time_to_stage[static_cast<std::size_t>(k)]);
  }
  out << '\n';
}

ScenarioConfig load_scenario(const std::string & path)
{
  auto config = scenario_from_json(load_json_file(path));
  if (const auto seed = env_seed()) config.seed = *seed;
  return config;
}

// ---- simulate ----

struct SimulateArgs
{
  std::string config;
  std::string out;
};

int simulate(const SimulateArgs & a, std::ostream & out)
{
  const auto config = load_scenario(a.config);
  const auto trace = run_scenario(config);
  const auto front = label_trace(trace, Perspective::EgoFront, config.hara);
  std::optional<TraceLabels> rear;
  if (trace.behind_ego) rear = label_trace(trace, Perspective::EgoRear, config.hara);

  auto csv = open_out(a.out);
  csv << "time,fault_active";
  const auto & first = trace.records.front();
  for (std::size_t v = 0; v < first.vehicles.size(); ++v) {
    const std::string p = "v" + std::to_string(v) + "_" + std::string(to_string(first.vehicles[v].role));
    csv << ',' << p << "_position," << p << "_speed," << p << "_accel_cmd," << p << "_accel_eff";
  }
  csv << ",s_level,c_level,stage";
  if (rear) csv << ",rear_s_level,rear_c_level,rear_stage";
  csv << '\n';
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto & r = trace.records[i];
    csv << format_double(r.time) << ',' << (r.fault_active ? 1 : 0);
    for (std::size_t v = 0; v < r.vehicles.size(); ++v) {
      csv << ',' << format_double(r.vehicles[v].position) << ','
          << format_double(r.vehicles[v].speed) << ',' << format_double(r.commanded[v]) << ','
          << format_double(r.effective[v]);
    }
    const auto & l = front.labels[i];
    csv << ',' << static_cast<int>(l.severity) << ',' << static_cast<int>(l.controllability) << ','
        << static_cast<int>(l.stage);
    if (rear) {
      const auto & b = rear->labels[i];
      csv << ',' << static_cast<int>(b.severity) << ',' << static_cast<int>(b.controllability)
          << ',' << static_cast<int>(b.stage);
    }
    csv << '\n';
  }

  out << "records: " << trace.records.size() << '\n';
  if (trace.collision) {
    out << "terminal: Collision time=" << format_double(trace.collision->time)
        << " impact_dv=" << format_double(trace.collision->impact_dv) << '\n';
  } else {
    out << "terminal: Completed\n";
  }
  print_stage_times(out, "front", front);
  if (rear) print_stage_times(out, "rear", *rear);
  return kExitOk;
}

// ---- generate ----

struct GenerateArgs
{
  std::string sweep;
  std::string out;
};

int generate(const GenerateArgs & a, std::ostream & out)
{
  auto sweep = sweep_from_json(load_json_file(a.sweep));
  if (const auto seed = env_seed()) sweep.master_seed = *seed;
  const auto data = generate_dataset(sweep);
  write_csv(data.rows, std::filesystem::path(a.out));

  std::size_t collisions = 0;
  for (const auto & s : data.meta.scenarios) collisions += s.terminal == TerminalEvent::Collision;
  out << "scenarios: " << data.meta.scenarios.size() << '\n';
  out << "collisions: " << collisions << '\n';
  out << "rows: " << data.rows.size() << '\n';
  for (int k = 0; k < kStageCount; ++k) {
    out << "class_count[" << to_string(static_cast<RiskStage>(k))
        << "]: " << data.meta.class_counts[static_cast<std::size_t>(k)] << '\n';
  }
  return kExitOk;
}

// ---- train ----

struct TrainArgs
{
  std::string data;
  std::string spec;
  std::string out;
};

void print_metrics(std::ostream & out, const std::string & name, const Metrics & m)
{
  out << name << ".samples: " << m.sample_count << '\n';
  out << name << ".accuracy: " << format_double(m.accuracy) << '\n';
  out << name << ".macro_f1: " << format_double(m.macro_f1) << '\n';
  for (std::size_t k = 0; k < m.per_class.size(); ++k) {
    const auto & c = m.per_class[k];
    out << name << ".class[" << to_string(static_cast<RiskStage>(k)) << "]: precision="
        << format_double(c.precision) << " recall=" << format_double(c.recall)
        << " f1=" << format_double(c.f1) << " support=" << c.support << '\n';
  }
  out << name << ".confusion:";
  for (const auto & row : m.confusion) {
    out << " [";
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? " " : "") << row[k];
    out << ']';
  }
  out << '\n';
}

int train_cmd(const TrainArgs & a, std::ostream & out)
{
  auto spec = training_spec_from_json(load_json_file(a.spec));
  if (const auto seed = env_seed()) spec.train.seed = *seed;
  const auto rows = read_csv(std::filesystem::path(a.data));
  const auto split = split_dataset(rows, spec.split_fractions, spec.split_seed);
  const auto result =
    train(spec.network, spec.train, to_labeled_set(split.train), to_labeled_set(split.val));

  save_model(ModelFile{result.weights, spec}, a.out);
  auto hist = open_out(a.out + ".history.csv");
  hist << "epoch,train_loss,train_accuracy,val_loss,val_accuracy\n";
  for (const auto & e : result.history) {
    hist << e.epoch << ',' << format_double(e.train_loss) << ',' << format_double(e.train_accuracy)
         << ',' << format_double(e.val_loss) << ',' << format_double(e.val_accuracy) << '\n';
  }

  const auto & best = result.history[result.best_epoch];
  out << "train_rows: " << split.train.size() << '\n';
  out << "val_rows: " << split.val.size() << '\n';
  out << "test_rows: " << split.test.size() << '\n';
  out << "parameters: " << result.weights.parameter_count() << '\n';
  out << "best_epoch: " << result.best_epoch << '\n';
  out << "best_val_loss: " << format_double(best.val_loss) << '\n';
  out << "best_val_accuracy: " << format_double(best.val_accuracy) << '\n';
  return kExitOk;
}

// ---- evaluate ----

struct EvaluateArgs
{
  std::string data;
  std::string model;
  std::size_t kfold = 0;
  bool baseline = false;
  std::string csv;
};

void csv_metrics(std::ostream & csv, const std::string & model, const std::string & fold, const Metrics & m)
{
  csv << model << ',' << fold << ',' << m.sample_count << ',' << format_double(m.accuracy) << ','
      << format_double(m.macro_f1);
  for (const auto & c : m.per_class) csv << ',' << format_double(c.f1);
  csv << ',' << format_double(m.mean_inference_latency) << '\n';
}

int evaluate_cmd(const EvaluateArgs & a, std::ostream & out)
{
  const auto model = load_model(a.model);
  TrainingSpec spec;
  spec.network = model.weights.spec;
  if (model.training) spec = *model.training;
  const auto rows = read_csv(std::filesystem::path(a.data));

  // A model that records its split is scored on that split's test part only.
  DatasetSplit split;
  if (model.training) {
    split = split_dataset(rows, spec.split_fractions, spec.split_seed);
  } else {
    split.test = rows;
  }
  const auto test = to_labeled_set(split.test);

  std::optional<std::ofstream> csv;
  if (!a.csv.empty()) {
    csv = open_out(a.csv);
    *csv << "model,fold,samples,accuracy,macro_f1,f1_safe,f1_warning,f1_hazardous,f1_critical,"
            "mean_inference_latency\n";
  }

  const auto nn = evaluate_model(model.weights, test);
  print_metrics(out, "nn.test", nn);
  out << "nn.test.mean_inference_latency: " << format_double(nn.mean_inference_latency) << '\n';
  if (csv) csv_metrics(*csv, "nn", "test", nn);

  if (a.baseline) {
    if (split.train.empty()) throw Error(ErrorKind::Data, "--baseline needs a model with a recorded split");
    const auto base =
      train_baseline(spec.train, to_labeled_set(split.train), to_labeled_set(split.val));
    const auto bm = evaluate_model(base.weights, test);
    print_metrics(out, "baseline.test", bm);
    out << "macro_f1: nn=" << format_double(nn.macro_f1) << " baseline=" << format_double(bm.macro_f1)
        << '\n';
    if (csv) csv_metrics(*csv, "baseline", "test", bm);
  }

  if (a.kfold > 0) {
    const auto cv = cross_validate(spec.network, spec.train, to_labeled_set(rows), a.kfold);
    for (std::size_t f = 0; f < cv.folds.size(); ++f) {
      out << "cv.fold[" << f << "]: accuracy=" << format_double(cv.folds[f].accuracy)
          << " macro_f1=" << format_double(cv.folds[f].macro_f1) << '\n';
      if (csv) csv_metrics(*csv, "nn", "cv" + std::to_string(f), cv.folds[f]);
    }
    out << "cv.accuracy: mean=" << format_double(cv.mean_accuracy)
        << " std=" << format_double(cv.std_accuracy) << '\n';
    out << "cv.macro_f1: mean=" << format_double(cv.mean_macro_f1)
        << " std=" << format_double(cv.std_macro_f1) << '\n';
  }
  return kExitOk;
}

// ---- assess ----

struct AssessArgs
{
  std::string config;
  std::string model;
  std::string out;
};

int assess(const AssessArgs & a, std::ostream & out)
{
  const auto model = load_model(a.model);
  const auto config = load_scenario(a.config);
  const auto trace = run_scenario(config);

  Predictor predictor(model.weights);
  Rng rng(config.seed);
  auto csv = open_out(a.out);
  csv << "time,oracle_stage,predicted_stage";
  for (int k = 0; k < kStageCount; ++k) csv << ",p_" << to_string(static_cast<RiskStage>(k));
  csv << ",inference_latency\n";

  std::size_t agree = 0;
  double latency_sum = 0.0;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto truth = scene_truth(trace, i, Perspective::EgoFront);
    const auto frame = sample_sensors(*truth, config.noise, trace.detection_range, trace.limits, rng);
    const auto features = build_feature_vector(frame, trace.detection_range).to_array();
    const auto oracle =
      static_cast<int>(label_features(*ground_truth_features(trace, i, Perspective::EgoFront), config.hara).stage);

    const auto t0 = std::chrono::steady_clock::now();
    const auto probs = predictor.probabilities(features);
    const int predicted = argmax_severe(probs);
    const double latency =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    agree += predicted == oracle;
    latency_sum += latency;
    csv << format_double(trace.records[i].time) << ',' << oracle << ',' << predicted;
    for (const double p : probs) csv << ',' << format_double(p);
    csv << ',' << format_double(latency) << '\n';
  }

  const auto n = static_cast<double>(trace.records.size());
  out << "frames: " << trace.records.size() << '\n';
  out << "agreement: " << format_double(static_cast<double>(agree) / n) << '\n';
  out << "mean_inference_latency: " << format_double(latency_sum / n) << '\n';
  return kExitOk;
}

int exit_code(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::Config:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

}  // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Learned dynamic risk indicator: simulate, generate, train, evaluate, assess"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  SimulateArgs sim;
  auto * c_sim = app.add_subcommand("simulate", "Run one scenario; write its trace and stage timeline");
  c_sim->add_option("--config", sim.config, "Scenario JSON")->required();
  c_sim->add_option("--out", sim.out, "Trace CSV")->required();

  GenerateArgs gen;
  auto * c_gen = app.add_subcommand("generate", "Run a scenario sweep into a labeled dataset CSV");
  c_gen->add_option("--sweep", gen.sweep, "Sweep JSON")->required();
  c_gen->add_option("--out", gen.out, "Dataset CSV")->required();

  TrainArgs tr;
  auto * c_tr = app.add_subcommand("train", "Train a model; writes MODEL and MODEL.history.csv");
  c_tr->add_option("--data", tr.data, "Dataset CSV")->required();
  c_tr->add_option("--spec", tr.spec, "Training spec JSON")->required();
  c_tr->add_option("--out", tr.out, "Model JSON")->required();

  EvaluateArgs ev;
  auto * c_ev = app.add_subcommand("evaluate", "Score a model on a dataset");
  c_ev->add_option("--data", ev.data, "Dataset CSV")->required();
  c_ev->add_option("--model", ev.model, "Model JSON")->required();
  c_ev->add_option("--kfold", ev.kfold, "Also run K-fold cross-validation")->check(CLI::Range(2, 100));
  c_ev->add_flag("--baseline", ev.baseline, "Also train and score the logistic baseline");
  c_ev->add_option("--csv", ev.csv, "Write the metrics as CSV");

  AssessArgs as;
  auto * c_as = app.add_subcommand("assess", "Run a scenario with the model in the loop");
  c_as->add_option("--config", as.config, "Scenario JSON")->required();
  c_as->add_option("--model", as.model, "Model JSON")->required();
  c_as->add_option("--out", as.out, "Per-frame CSV")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError & e) {
    err << "error: UsageError: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*c_sim) return simulate(sim, out);
    if (*c_gen) return generate(gen, out);
    if (*c_tr) return train_cmd(tr, out);
    if (*c_ev) return evaluate_cmd(ev, out);
    return assess(as, out);
  } catch (const Error & e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception & e) {
    err << "error: InternalError: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace ladri::cli
