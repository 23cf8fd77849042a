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

#include "ladri/scenarios.hpp"

namespace ladri
{

namespace
{

VehicleConfig vehicle(Role role, double position, double speed, PolicyKind policy)
{
  VehicleConfig v;
  v.initial.role = role;
  v.initial.position = position;
  v.initial.speed = speed;
  v.policy = policy;
  return v;
}

}  // namespace

ScenarioConfig unintended_accel_scenario(double magnitude)
{
  constexpr double kLeadSpeed = 60.0 / 3.6;
  ScenarioConfig c;
  c.duration = 30.0;
  c.acc_params.v_set = 20.0;
  c.vehicles = {
    vehicle(Role::Ego, 0.0, kLeadSpeed, PolicyKind::Acc),
    vehicle(Role::Lead, 60.0, kLeadSpeed, PolicyKind::ConstantSpeed),
  };
  c.fault = FaultSpec{FaultKind::UnintendedAccel, magnitude, 2.0, c.duration};
  return c;
}

ScenarioConfig unintended_brake_scenario(double magnitude)
{
  constexpr double kSpeed = 100.0 / 3.6;
  ScenarioConfig c;
  c.duration = 25.0;
  c.acc_params.v_set = kSpeed;

  AccParams follower_acc = c.acc_params;
  follower_acc.v_set = 33.0;
  follower_acc.gap_des_time = 0.3;
  follower_acc.reaction_time = 1.0;
  auto follower = vehicle(
    Role::Follower, -(follower_acc.gap_min + follower_acc.gap_des_time * kSpeed), kSpeed,
    PolicyKind::Acc);
  follower.acc = follower_acc;

  c.vehicles = {follower, vehicle(Role::Ego, 0.0, kSpeed, PolicyKind::Acc)};
  c.fault = FaultSpec{FaultKind::UnintendedBrake, magnitude, kUnintendedBrakeOnset, 20.0};
  return c;
}

ScenarioConfig equilibrium_scenario()
{
  constexpr double kSpeed = 60.0 / 3.6;
  ScenarioConfig c;
  c.duration = 30.0;
  c.acc_params.v_set = 20.0;
  const double gap = c.acc_params.gap_min + c.acc_params.gap_des_time * kSpeed;
  c.vehicles = {
    vehicle(Role::Ego, 0.0, kSpeed, PolicyKind::Acc),
    vehicle(Role::Lead, gap, kSpeed, PolicyKind::ConstantSpeed),
  };
  return c;
}

}  // namespace ladri
