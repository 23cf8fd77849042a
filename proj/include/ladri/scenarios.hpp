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

#include "ladri/scenario.hpp"

namespace ladri
{

/// Ego on ACC following a lead cruising at 60 km/h, 60 m ahead, with a stuck
/// throttle of the given magnitude from t = 2 s on.
ScenarioConfig unintended_accel_scenario(double magnitude);

/// Ego on ACC at 100 km/h with an open road ahead and a close, speed-matched
/// follower; the ego brakes by itself from t = 15 s to t = 20 s.
ScenarioConfig unintended_brake_scenario(double magnitude);

inline constexpr double kUnintendedBrakeOnset = 15.0;

/// Ego following a lead at the ACC equilibrium gap, no fault.
ScenarioConfig equilibrium_scenario();

}  // namespace ladri
