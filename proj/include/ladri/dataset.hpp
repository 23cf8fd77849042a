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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ladri/features.hpp"
#include "ladri/network.hpp"
#include "ladri/scenario.hpp"

namespace ladri
{

inline constexpr std::array<std::string_view, 13> kDatasetColumns{
  "scenario_id", "time", "rel_distance", "rel_speed", "ego_speed", "ttc", "headway",
  "required_decel", "throttle_pos", "brake_pos", "s_level", "c_level", "stage",
};

struct DatasetRow
{
  std::uint64_t scenario_id = 0;
  double time = 0.0;
  FeatureVector features;  // noisy, as the on-board sensors see it
  int s_level = 0;         // from ground truth
  int c_level = 0;
  int stage = 0;

  bool operator==(const DatasetRow &) const = default;
};

/// One point on the fault axis; no kind means the fault-free scenario.
struct FaultChoice
{
  std::optional<FaultKind> kind;
  double magnitude = 0.0;
};

/// Grid over faults x initial gap x lead speed x ego speed. Each grid point
/// reuses `base` with the ego at its configured position, the lead placed
/// `gap` ahead at constant speed, and the fault active from
/// `fault_t_start` until the end of the run.
struct SweepConfig
{
  ScenarioConfig base;
  std::vector<FaultKind> fault_kinds{FaultKind::UnintendedAccel, FaultKind::UnintendedBrake};
  std::vector<double> magnitudes{0.2, 0.35, 0.5, 0.65, 0.8};
  bool include_fault_free = true;
  std::vector<double> initial_gaps{25.0, 50.0, 90.0};
  std::vector<double> lead_speeds{11.11, 16.67, 22.22, 27.78};
  std::vector<double> ego_speeds{16.67, 25.0};
  double fault_t_start = 5.0;
  double sample_period = 0.1;  // s between dataset rows
  bool noise = true;
  std::uint64_t master_seed = 0;

  void validate() const;
  std::vector<FaultChoice> fault_axis() const;
};

/// The default sweep used for training and acceptance.
SweepConfig default_sweep();

struct ScenarioSummary
{
  std::uint64_t scenario_id = 0;
  FaultChoice fault;
  double initial_gap = 0.0;
  double lead_speed = 0.0;
  double ego_speed = 0.0;
  TerminalEvent terminal = TerminalEvent::Completed;
  std::optional<double> collision_time;
  std::size_t rows = 0;
};

struct DatasetMeta
{
  std::array<std::size_t, kStageCount> class_counts{};
  std::vector<ScenarioSummary> scenarios;
};

struct GeneratedDataset
{
  std::vector<DatasetRow> rows;
  DatasetMeta meta;
};

/// Scenario i uses seed master_seed ^ i for its sensor noise. Throws
/// CoverageError when a stage never occurs in the whole sweep.
GeneratedDataset generate_dataset(const SweepConfig & sweep);

/// Noisy dataset rows for one run, sampled every `sample_period` seconds.
std::vector<DatasetRow> rows_from_trace(
  const SimulationTrace & trace, const ScenarioConfig & config, std::uint64_t scenario_id,
  double sample_period, bool noise);

void write_csv(std::span<const DatasetRow> rows, std::ostream & out);
void write_csv(std::span<const DatasetRow> rows, const std::filesystem::path & path);
/// Throws SchemaError on a header mismatch and ParseError on a bad row.
std::vector<DatasetRow> read_csv(std::istream & in);
std::vector<DatasetRow> read_csv(const std::filesystem::path & path);

struct DatasetSplit
{
  std::vector<DatasetRow> train;
  std::vector<DatasetRow> val;
  std::vector<DatasetRow> test;
};

/// Scenario-grouped split. Scenarios are stratified by the most severe stage
/// they contain and allocated per stratum by rounding; of 64 seeded
/// shuffles, the one whose per-split stage mix is closest to the whole is kept.
DatasetSplit split_dataset(
  std::span<const DatasetRow> rows, std::array<double, 3> fractions = {0.70, 0.15, 0.15},
  std::uint64_t seed = 0);

LabeledSet to_labeled_set(std::span<const DatasetRow> rows);

}  // namespace ladri
