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
#include <cstdint>
#include <filesystem>
#include <optional>

#include <json.hpp>

#include "ladri/dataset.hpp"
#include "ladri/network.hpp"
#include "ladri/scenario.hpp"

namespace ladri
{

using Json = nlohmann::json;

/// Parses a file; a missing or malformed file is a ConfigError.
Json load_json_file(const std::filesystem::path & path);

/// Missing keys take their defaults; unknown keys are rejected.
ScenarioConfig scenario_from_json(const Json & j);
Json to_json(const ScenarioConfig & config);

SweepConfig sweep_from_json(const Json & j);
Json to_json(const SweepConfig & sweep);

/// Contents of a `--spec` file for training.
struct TrainingSpec
{
  NetworkSpec network;
  TrainConfig train;
  std::array<double, 3> split_fractions{0.70, 0.15, 0.15};
  std::uint64_t split_seed = 0;
};

TrainingSpec training_spec_from_json(const Json & j);
Json to_json(const TrainingSpec & spec);

/// Persisted model: weights plus the training recipe that produced them.
struct ModelFile
{
  ModelWeights weights;
  std::optional<TrainingSpec> training;
};

/// Numbers are written as 17-significant-digit decimal strings, so a
/// load/save round trip is value-exact.
Json model_to_json(const ModelFile & model);
/// Throws VersionError when the format or feature contract differs from
/// this build, ModelError on malformed content.
ModelFile model_from_json(const Json & j);

void save_model(const ModelFile & model, const std::filesystem::path & path);
ModelFile load_model(const std::filesystem::path & path);

}  // namespace ladri
