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
#include <string_view>

namespace ladri
{

enum class Severity
{
  S0,
  S1,
  S2,
  S3,
};

enum class Controllability
{
  C0,
  C1,
  C2,
  C3,
};

enum class RiskStage
{
  Safe = 0,
  Warning = 1,
  Hazardous = 2,
  Critical = 3,
};

inline constexpr int kStageCount = 4;

std::string_view to_string(RiskStage stage);

/// Rule set behind the labeling oracle. Exposure is deliberately absent;
/// only severity and controllability are graded.
struct HaraThresholds
{
  /// Projected impact dv upper bounds for S0, S1, S2 (m/s): 10, 30, 50 km/h.
  std::array<double, 3> severity_dv{2.78, 8.33, 13.89};
  /// Required deceleration upper bounds for C0, C1, C2 (m/s^2).
  std::array<double, 3> controllability_decel{1.0, 3.0, 6.0};
  double ttc_force_c3 = 1.0;  // s
  double ttc_raise = 2.0;     // s
  /// stage_table[c][s]
  std::array<std::array<int, 4>, 4> stage_table{{
    {0, 0, 1, 1},
    {0, 1, 1, 2},
    {1, 1, 2, 3},
    {1, 2, 3, 3},
  }};

  void validate() const;
  bool operator==(const HaraThresholds &) const = default;
};

struct RiskLabel
{
  Severity severity = Severity::S0;
  Controllability controllability = Controllability::C0;
  RiskStage stage = RiskStage::Safe;

  bool operator==(const RiskLabel &) const = default;
};

/// Throws InvalidInput for negative or non-finite dv.
Severity severity_level(double projected_impact_dv, const HaraThresholds & t = {});

Controllability controllability_level(
  double required_decel, double ttc, const HaraThresholds & t = {});

RiskStage risk_stage(Severity s, Controllability c, const HaraThresholds & t = {});

/// Oracle label from the kinematic quantities of one vehicle pair.
RiskLabel classify(
  double closing_speed, double required_decel, double ttc, const HaraThresholds & t = {});

}  // namespace ladri
