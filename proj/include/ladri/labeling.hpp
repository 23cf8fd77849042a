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
#include <optional>
#include <vector>

#include "ladri/features.hpp"
#include "ladri/hara.hpp"
#include "ladri/scenario.hpp"

namespace ladri
{

/// Oracle label for a feature vector (uses rel_speed, required_decel and ttc only).
RiskLabel label_features(const FeatureVector & features, const HaraThresholds & t = {});

/// Noise-free features at one record. With no vehicle on the observed side
/// the free-road encoding applies; for EgoRear with no follower, nullopt.
std::optional<FeatureVector> ground_truth_features(
  const SimulationTrace & trace, std::size_t record, Perspective perspective);

struct TraceLabels
{
  std::vector<RiskLabel> labels;
  /// time_to_stage[k]: first record time with stage >= k.
  std::array<std::optional<double>, kStageCount> time_to_stage;
};

/// Labels every record from ground truth. Records without an observed
/// vehicle (EgoRear and no follower) are Safe.
TraceLabels label_trace(
  const SimulationTrace & trace, Perspective perspective, const HaraThresholds & t = {});

}  // namespace ladri
