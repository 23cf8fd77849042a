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

#include <string_view>

namespace ladri
{

enum class Role
{
  Ego,
  Lead,
  Follower,
};

std::string_view to_string(Role role);

/// Longitudinal state of one vehicle on a straight lane.
struct VehicleState
{
  double position = 0.0;  // m
  double speed = 0.0;     // m/s, never negative
  double accel = 0.0;     // m/s^2 applied over the step that produced this state
  Role role = Role::Ego;

  bool operator==(const VehicleState &) const = default;
};

/// Actuator envelope shared by the controller, the fault layer and the pedal map.
struct ActuatorLimits
{
  double a_min = -8.0;
  double a_max = 3.0;

  void validate() const;
  double clamp(double accel) const;
};

}  // namespace ladri
