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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ladri/hara.hpp"
#include "ladri/sensors.hpp"
#include "ladri/vehicle.hpp"

namespace ladri
{

/// Linear gap/speed feedback ACC.
struct AccParams
{
  double v_set = 20.0;          // m/s
  double gap_des_time = 1.5;    // s
  double gap_min = 2.0;         // m
  double k_gap = 0.5;           // 1/s^2
  double k_speed = 0.8;         // 1/s
  double detection_range = 150.0;  // m
  /// Perception-reaction delay: the law acts on the scene as it was this
  /// long ago. Zero gives the plain instantaneous law.
  double reaction_time = 0.0;  // s

  void validate() const;
  bool operator==(const AccParams &) const = default;
};

enum class FaultKind
{
  UnintendedAccel,
  UnintendedBrake,
};

std::string_view to_string(FaultKind kind);

/// Actuator fault on the ego vehicle, active on [t_start, t_end).
struct FaultSpec
{
  FaultKind kind = FaultKind::UnintendedAccel;
  double magnitude = 0.5;  // fraction of actuator full scale, (0, 1]
  double t_start = 0.0;
  double t_end = 0.0;

  bool active_at(double t) const;
  bool operator==(const FaultSpec &) const = default;
};

enum class PolicyKind
{
  ConstantSpeed,
  Scripted,
  Acc,
};

std::string_view to_string(PolicyKind kind);

/// Piecewise-constant acceleration: `accel` holds from `time` until the next point.
struct ProfilePoint
{
  double time = 0.0;
  double accel = 0.0;

  bool operator==(const ProfilePoint &) const = default;
};

struct VehicleConfig
{
  VehicleState initial;
  PolicyKind policy = PolicyKind::Acc;
  std::vector<ProfilePoint> profile;  // Scripted only
  std::optional<AccParams> acc;       // overrides ScenarioConfig::acc_params

  bool operator==(const VehicleConfig &) const = default;
};

struct ScenarioConfig
{
  double dt = 0.01;
  double duration = 30.0;
  std::vector<VehicleConfig> vehicles;
  AccParams acc_params;
  ActuatorLimits limits;
  std::optional<FaultSpec> fault;
  std::uint64_t seed = 0;
  NoiseSpec noise;
  HaraThresholds hara;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  std::size_t step_count() const;
};

struct CollisionEvent
{
  double time = 0.0;
  double impact_dv = 0.0;  // rear speed minus front speed
  std::size_t front = 0;
  std::size_t rear = 0;
};

enum class TerminalEvent
{
  Completed,
  Collision,
};

/// Vehicles are stored rear to front; indices are stable for the whole run.
struct TraceRecord
{
  double time = 0.0;
  std::vector<VehicleState> vehicles;
  std::vector<double> commanded;  // controller or policy output
  std::vector<double> effective;  // after fault injection and clamping
  bool fault_active = false;
};

struct SimulationTrace
{
  std::vector<TraceRecord> records;
  TerminalEvent terminal = TerminalEvent::Completed;
  std::optional<CollisionEvent> collision;
  std::size_t ego = 0;
  std::optional<std::size_t> ahead_of_ego;
  std::optional<std::size_t> behind_ego;
  ActuatorLimits limits;
  double detection_range = 150.0;
};

/// Semi-implicit Euler step with actuator and zero-speed clamps.
///
/// The returned state's `accel` is the acceleration actually realized, which
/// differs from the clamped command only when the vehicle comes to rest.
VehicleState step_vehicle(
  const VehicleState & state, double accel_cmd, double dt, const ActuatorLimits & limits = {});

/// ACC command towards `lead` (or free cruise when absent / out of range).
double acc_command(
  const VehicleState & ego, const std::optional<VehicleState> & lead, const AccParams & params,
  const ActuatorLimits & limits = {});

double apply_fault(
  double accel_cmd, const std::optional<FaultSpec> & fault, double t,
  const ActuatorLimits & limits = {});

std::optional<CollisionEvent> detect_collision(
  const VehicleState & front, const VehicleState & rear);

SimulationTrace run_scenario(const ScenarioConfig & config);

/// Ground truth seen from the ego (looking ahead) or from the vehicle behind
/// the ego (looking at the ego) at one trace record.
enum class Perspective
{
  EgoFront,
  EgoRear,
};

std::optional<SceneTruth> scene_truth(
  const SimulationTrace & trace, std::size_t record, Perspective perspective);

}  // namespace ladri
