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

#include "ladri/hara.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ladri/error.hpp"

namespace ladri
{

std::string_view to_string(RiskStage stage)
{
  switch (stage) {
    case RiskStage::Safe: return "Safe";
    case RiskStage::Warning: return "Warning";
    case RiskStage::Hazardous: return "Hazardous";
    case RiskStage::Critical: return "Critical";
  }
  return "?";
}

void HaraThresholds::validate() const
{
  for (std::size_t i = 0; i < 3; ++i) {
    if (!std::isfinite(severity_dv[i]) || severity_dv[i] < 0.0 ||
        (i > 0 && !(severity_dv[i] > severity_dv[i - 1]))) {
      throw ConfigError("hara.severity_dv", "must be non-negative and strictly increasing");
    }
    if (!std::isfinite(controllability_decel[i]) || controllability_decel[i] < 0.0 ||
        (i > 0 && !(controllability_decel[i] > controllability_decel[i - 1]))) {
      throw ConfigError(
        "hara.controllability_decel", "must be non-negative and strictly increasing");
    }
  }
  if (!(ttc_force_c3 >= 0.0) || !(ttc_raise >= ttc_force_c3)) {
    throw ConfigError("hara.ttc_raise", "need 0 <= ttc_force_c3 <= ttc_raise");
  }
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t s = 0; s < 4; ++s) {
      const int v = stage_table[c][s];
      if (v < 0 || v > 3) throw ConfigError("hara.stage_table", "entries must be in 0..3");
    }
  }
}

Severity severity_level(double dv, const HaraThresholds & t)
{
  if (!(dv >= 0.0) || !std::isfinite(dv)) {
    throw Error(ErrorKind::InvalidInput, "severity_level: dv must be finite and >= 0");
  }
  if (dv < t.severity_dv[0]) return Severity::S0;
  if (dv < t.severity_dv[1]) return Severity::S1;
  if (dv < t.severity_dv[2]) return Severity::S2;
  return Severity::S3;
}

Controllability controllability_level(double required_decel, double ttc, const HaraThresholds & t)
{
  int level = 3;
  if (required_decel < t.controllability_decel[0]) {
    level = 0;
  } else if (required_decel < t.controllability_decel[1]) {
    level = 1;
  } else if (required_decel < t.controllability_decel[2]) {
    level = 2;
  }
  if (ttc < t.ttc_force_c3) {
    level = 3;
  } else if (ttc < t.ttc_raise) {
    level = std::min(level + 1, 3);
  }
  return static_cast<Controllability>(level);
}

RiskStage risk_stage(Severity s, Controllability c, const HaraThresholds & t)
{
  return static_cast<RiskStage>(
    t.stage_table[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)]);
}

RiskLabel classify(
  double closing_speed, double required_decel, double ttc, const HaraThresholds & t)
{
  RiskLabel label;
  label.severity = severity_level(std::max(0.0, closing_speed), t);
  label.controllability = controllability_level(required_decel, ttc, t);
  label.stage = risk_stage(label.severity, label.controllability, t);
  return label;
}

}  // namespace ladri
