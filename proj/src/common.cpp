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

#include <algorithm>
#include <cmath>
#include <string>

#include "ladri/error.hpp"
#include "ladri/vehicle.hpp"

namespace ladri
{

std::string_view to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InvalidScene: return "InvalidScene";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::Model: return "ModelError";
    case ErrorKind::Data: return "DataError";
    case ErrorKind::Stratify: return "StratifyError";
    case ErrorKind::Coverage: return "CoverageError";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::Version: return "VersionError";
  }
  return "Error";
}

std::string_view to_string(Role role)
{
  switch (role) {
    case Role::Ego: return "Ego";
    case Role::Lead: return "Lead";
    case Role::Follower: return "Follower";
  }
  return "?";
}

void ActuatorLimits::validate() const
{
  if (!std::isfinite(a_min) || !(a_min < 0.0)) {
    throw ConfigError("limits.a_min", "must be finite and negative");
  }
  if (!std::isfinite(a_max) || !(a_max > 0.0)) {
    throw ConfigError("limits.a_max", "must be finite and positive");
  }
}

double ActuatorLimits::clamp(double accel) const { return std::clamp(accel, a_min, a_max); }

}  // namespace ladri
