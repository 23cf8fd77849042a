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

#include <optional>
#include <random>

#include "ladri/vehicle.hpp"

namespace ladri
{

/// Per-channel Gaussian noise and radar dropout.
struct NoiseSpec
{
  double sigma_range = 0.3;       // m
  double sigma_range_rate = 0.2;  // m/s
  double sigma_wheel = 0.1;       // m/s, also used for the engine speed proxy
  double sigma_pedal = 0.01;      // fraction
  double dropout_prob = 0.0;      // per frame

  static NoiseSpec none() { return {0.0, 0.0, 0.0, 0.0, 0.0}; }

  void validate() const;
  bool operator==(const NoiseSpec &) const = default;
};

/// One timestep of on-board sensor readings as seen from a vehicle.
///
/// Radar, LiDAR and ultrasonic are modeled as one fused range/range-rate
/// channel; the range rate is negative while closing.
struct SensorFrame
{
  double time = 0.0;
  std::optional<double> radar_range;
  std::optional<double> radar_range_rate;
  double wheel_speed = 0.0;
  double engine_speed_proxy = 0.0;
  double throttle_pos = 0.0;
  double brake_pos = 0.0;
};

/// Ground truth visible to the sensors of one vehicle (the "observer").
struct SceneTruth
{
  double time = 0.0;
  VehicleState observer;
  std::optional<VehicleState> ahead;
  double observer_effective_accel = 0.0;
};

struct PedalPositions
{
  double throttle = 0.0;
  double brake = 0.0;
};

using Rng = std::mt19937_64;

/// Inverse actuator map. Throws InvalidState when `a_eff` is outside the envelope.
PedalPositions pedals_from_accel(double a_eff, const ActuatorLimits & limits);

/// Noise-free readings; the radar channels are empty beyond `detection_range`.
SensorFrame truth_frame(
  const SceneTruth & truth, double detection_range, const ActuatorLimits & limits);

/// Noisy readings. Draws a fixed number of variates per call regardless of
/// detection state, so the stream stays aligned across frames.
SensorFrame sample_sensors(
  const SceneTruth & truth, const NoiseSpec & noise, double detection_range,
  const ActuatorLimits & limits, Rng & rng);

}  // namespace ladri
