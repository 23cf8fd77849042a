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

#include "ladri/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "ladri/error.hpp"
#include "ladri/labeling.hpp"
#include "ladri/text.hpp"

namespace ladri
{

namespace
{

std::size_t find_role(const ScenarioConfig & config, Role role)
{
  for (std::size_t i = 0; i < config.vehicles.size(); ++i) {
    if (config.vehicles[i].initial.role == role) return i;
  }
  return config.vehicles.size();
}

void require_grid(const std::vector<double> & grid, const char * field, bool positive)
{
  if (grid.empty()) throw ConfigError(field, "grid must not be empty");
  for (const double v : grid) {
    if (!std::isfinite(v) || v < 0.0 || (positive && v == 0.0)) {
      throw ConfigError(field, positive ? "values must be > 0" : "values must be >= 0");
    }
  }
}

}  // namespace

void SweepConfig::validate() const
{
  base.validate();
  if (find_role(base, Role::Lead) == base.vehicles.size()) {
    throw ConfigError("base.vehicles", "sweep base needs a Lead vehicle");
  }
  if (!include_fault_free) {
    throw ConfigError("include_fault_free", "at least one fault-free scenario is required");
  }
  if (!fault_kinds.empty()) {
    require_grid(magnitudes, "magnitudes", true);
    for (const double m : magnitudes) {
      if (m > 1.0) throw ConfigError("magnitudes", "values must be in (0, 1]");
    }
  }
  require_grid(initial_gaps, "initial_gaps", true);
  require_grid(lead_speeds, "lead_speeds", false);
  require_grid(ego_speeds, "ego_speeds", false);
  if (!(fault_t_start >= 0.0) || !(fault_t_start < base.duration)) {
    throw ConfigError("fault_t_start", "must lie inside the run");
  }
  if (!(sample_period >= base.dt)) throw ConfigError("sample_period", "must be >= dt");
}

std::vector<FaultChoice> SweepConfig::fault_axis() const
{
  std::vector<FaultChoice> axis;
  if (include_fault_free) axis.push_back({});
  for (const auto kind : fault_kinds) {
    for (const double m : magnitudes) axis.push_back({kind, m});
  }
  return axis;
}

SweepConfig default_sweep()
{
  SweepConfig sweep;
  sweep.base.duration = 25.0;
  sweep.base.acc_params.v_set = 20.0;
  sweep.base.vehicles = {
    {VehicleState{0.0, 16.67, 0.0, Role::Ego}, PolicyKind::Acc, {}, std::nullopt},
    {VehicleState{40.0, 16.67, 0.0, Role::Lead}, PolicyKind::ConstantSpeed, {}, std::nullopt},
  };
  sweep.master_seed = 20231101;
  return sweep;
}

std::vector<DatasetRow> rows_from_trace(
  const SimulationTrace & trace, const ScenarioConfig & config, std::uint64_t scenario_id,
  double sample_period, bool noise)
{
  const auto stride =
    std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sample_period / config.dt)));
  Rng rng(config.seed);
  std::vector<DatasetRow> rows;
  for (std::size_t i = 0; i < trace.records.size(); i += stride) {
    const auto truth = scene_truth(trace, i, Perspective::EgoFront);
    const SensorFrame frame =
      noise ? sample_sensors(*truth, config.noise, trace.detection_range, trace.limits, rng)
            : truth_frame(*truth, trace.detection_range, trace.limits);
    const auto label = label_features(*ground_truth_features(trace, i, Perspective::EgoFront), config.hara);

    DatasetRow row;
    row.scenario_id = scenario_id;
    row.time = trace.records[i].time;
    row.features = build_feature_vector(frame, trace.detection_range);
    row.s_level = static_cast<int>(label.severity);
    row.c_level = static_cast<int>(label.controllability);
    row.stage = static_cast<int>(label.stage);
    rows.push_back(row);
  }
  return rows;
}

GeneratedDataset generate_dataset(const SweepConfig & sweep)
{
  sweep.validate();
  const std::size_t ego = find_role(sweep.base, Role::Ego);
  const std::size_t lead = find_role(sweep.base, Role::Lead);

  GeneratedDataset out;
  std::uint64_t index = 0;
  for (const auto & fault : sweep.fault_axis()) {
    for (const double gap : sweep.initial_gaps) {
      for (const double lead_speed : sweep.lead_speeds) {
        for (const double ego_speed : sweep.ego_speeds) {
          ScenarioConfig config = sweep.base;
          config.seed = sweep.master_seed ^ index;
          auto & ego_cfg = config.vehicles[ego];
          auto & lead_cfg = config.vehicles[lead];
          ego_cfg.initial.speed = ego_speed;
          lead_cfg.initial.position = ego_cfg.initial.position + gap;
          lead_cfg.initial.speed = lead_speed;
          lead_cfg.policy = PolicyKind::ConstantSpeed;
          if (fault.kind) {
            config.fault =
              FaultSpec{*fault.kind, fault.magnitude, sweep.fault_t_start, config.duration};
          } else {
            config.fault.reset();
          }
          if (!sweep.noise) config.noise = NoiseSpec::none();

          const auto trace = run_scenario(config);
          auto rows = rows_from_trace(trace, config, index, sweep.sample_period, sweep.noise);

          ScenarioSummary summary;
          summary.scenario_id = index;
          summary.fault = fault;
          summary.initial_gap = gap;
          summary.lead_speed = lead_speed;
          summary.ego_speed = ego_speed;
          summary.terminal = trace.terminal;
          if (trace.collision) summary.collision_time = trace.collision->time;
          summary.rows = rows.size();
          out.meta.scenarios.push_back(summary);

          for (const auto & row : rows) ++out.meta.class_counts[static_cast<std::size_t>(row.stage)];
          out.rows.insert(out.rows.end(), rows.begin(), rows.end());
          ++index;
        }
      }
    }
  }
  for (int k = 0; k < kStageCount; ++k) {
    if (out.meta.class_counts[static_cast<std::size_t>(k)] == 0) {
      throw CoverageError(
        k, std::string(to_string(static_cast<RiskStage>(k))) + " never occurs in the sweep");
    }
  }
  return out;
}

void write_csv(std::span<const DatasetRow> rows, std::ostream & out)
{
  for (std::size_t c = 0; c < kDatasetColumns.size(); ++c) {
    out << (c ? "," : "") << kDatasetColumns[c];
  }
  out << '\n';
  for (const auto & row : rows) {
    out << row.scenario_id << ',' << format_double(row.time);
    for (const double v : row.features.to_array()) out << ',' << format_double(v);
    out << ',' << row.s_level << ',' << row.c_level << ',' << row.stage << '\n';
  }
}

void write_csv(std::span<const DatasetRow> rows, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Data, "cannot open " + path.string() + " for writing");
  write_csv(rows, out);
  if (!out) throw Error(ErrorKind::Data, "failed writing " + path.string());
}

std::vector<DatasetRow> read_csv(std::istream & in)
{
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Schema, "missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  bool header_ok = header.size() == kDatasetColumns.size();
  for (std::size_t c = 0; header_ok && c < header.size(); ++c) {
    header_ok = header[c] == kDatasetColumns[c];
  }
  if (!header_ok) {
    throw Error(
      ErrorKind::Schema, "header does not match the dataset contract (" +
                           std::to_string(header.size()) + " columns)");
  }

  std::vector<DatasetRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != kDatasetColumns.size()) {
      throw ParseError(line_no, "expected 13 fields, got " + std::to_string(fields.size()));
    }
    DatasetRow row;
    const auto id = parse_integer(fields[0]);
    if (!id || *id < 0) throw ParseError(line_no, "bad scenario_id");
    row.scenario_id = static_cast<std::uint64_t>(*id);
    const auto t = parse_double(fields[1]);
    if (!t) throw ParseError(line_no, "bad time");
    row.time = *t;
    std::array<double, kFeatureCount> values{};
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      const auto v = parse_double(fields[2 + k]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(line_no, "bad value in column " + std::string(kDatasetColumns[2 + k]));
      }
      values[k] = *v;
    }
    row.features = FeatureVector::from_array(values);
    int * levels[3] = {&row.s_level, &row.c_level, &row.stage};
    for (std::size_t k = 0; k < 3; ++k) {
      const auto v = parse_integer(fields[10 + k]);
      if (!v || *v < 0 || *v > 3) {
        throw ParseError(
          line_no, "column " + std::string(kDatasetColumns[10 + k]) + " must be an integer in 0..3");
      }
      *levels[k] = static_cast<int>(*v);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<DatasetRow> read_csv(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Data, "cannot open " + path.string());
  return read_csv(in);
}

DatasetSplit split_dataset(
  std::span<const DatasetRow> rows, std::array<double, 3> fractions, std::uint64_t seed)
{
  const double total = fractions[0] + fractions[1] + fractions[2];
  if (std::abs(total - 1.0) > 1e-9 || fractions[0] < 0.0 || fractions[1] < 0.0 ||
      fractions[2] < 0.0) {
    throw Error(ErrorKind::InvalidInput, "split fractions must be non-negative and sum to 1");
  }
  std::array<std::size_t, kStageCount> counts{};
  std::map<std::uint64_t, int> worst;  // scenario -> most severe stage
  for (const auto & row : rows) {
    if (row.stage < 0 || row.stage >= kStageCount) {
      throw Error(ErrorKind::Data, "stage out of range");
    }
    ++counts[static_cast<std::size_t>(row.stage)];
    auto [it, inserted] = worst.emplace(row.scenario_id, row.stage);
    if (!inserted) it->second = std::max(it->second, row.stage);
  }
  for (int k = 0; k < kStageCount; ++k) {
    const auto n = counts[static_cast<std::size_t>(k)];
    if (n > 0 && n < 3) throw StratifyError(k, "has fewer than 3 rows");
  }

  std::array<std::vector<std::uint64_t>, kStageCount> strata;
  for (const auto & [id, stage] : worst) strata[static_cast<std::size_t>(stage)].push_back(id);

  // Per-scenario class counts, to score how well a candidate keeps the mix.
  std::map<std::uint64_t, std::array<double, kStageCount>> scenario_counts;
  for (const auto & row : rows) scenario_counts[row.scenario_id][static_cast<std::size_t>(row.stage)] += 1.0;

  auto deviation = [&](const std::map<std::uint64_t, int> & assignment) {
    std::array<std::array<double, kStageCount>, 3> part{};
    for (const auto & [id, where] : assignment) {
      for (int k = 0; k < kStageCount; ++k) part[where][k] += scenario_counts[id][k];
    }
    double worst_gap = 0.0;
    for (const auto & p : part) {
      double n = 0.0;
      for (const double c : p) n += c;
      if (n == 0.0) continue;
      for (int k = 0; k < kStageCount; ++k) {
        const double global = static_cast<double>(counts[k]) / static_cast<double>(rows.size());
        worst_gap = std::max(worst_gap, std::abs(p[k] / n - global));
      }
    }
    return worst_gap;
  };

  // Scenario counts per split are fixed by the rounding allocation; among a
  // fixed number of seeded shuffles, keep the one closest to the global mix.
  constexpr int kCandidates = 64;
  std::mt19937_64 rng(seed);
  std::map<std::uint64_t, int> assignment;  // 0 train, 1 val, 2 test
  double best = std::numeric_limits<double>::infinity();
  for (int candidate = 0; candidate < kCandidates; ++candidate) {
    std::map<std::uint64_t, int> trial;
    for (auto & ids : strata) {
      std::shuffle(ids.begin(), ids.end(), rng);
      const auto n = static_cast<double>(ids.size());
      const auto n_train = static_cast<std::size_t>(std::llround(fractions[0] * n));
      const auto n_val =
        std::min(ids.size() - n_train, static_cast<std::size_t>(std::llround(fractions[1] * n)));
      for (std::size_t i = 0; i < ids.size(); ++i) {
        trial[ids[i]] = i < n_train ? 0 : (i < n_train + n_val ? 1 : 2);
      }
    }
    const double score = deviation(trial);
    if (score < best) {
      best = score;
      assignment = std::move(trial);
    }
  }

  DatasetSplit split;
  for (const auto & row : rows) {
    switch (assignment[row.scenario_id]) {
      case 0: split.train.push_back(row); break;
      case 1: split.val.push_back(row); break;
      default: split.test.push_back(row); break;
    }
  }
  return split;
}

LabeledSet to_labeled_set(std::span<const DatasetRow> rows)
{
  LabeledSet set;
  set.x = Matrix(rows.size(), kFeatureCount);
  set.y.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto values = rows[i].features.to_array();
    std::copy(values.begin(), values.end(), set.x.row(i).begin());
    set.y.push_back(rows[i].stage);
  }
  return set;
}

}  // namespace ladri
