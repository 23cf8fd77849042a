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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ladri/error.hpp"
#include "ladri/scenario.hpp"
#include "ladri/scenarios.hpp"
#include "oracles.hpp"

using namespace ladri;

namespace
{

VehicleConfig make_vehicle(Role role, double x, double v, PolicyKind policy)
{
  VehicleConfig c;
  c.initial = {x, v, 0.0, role};
  c.policy = policy;
  return c;
}

ScenarioConfig two_car(double gap, double v_ego, double v_lead)
{
  ScenarioConfig c;
  c.duration = 10.0;
  c.vehicles = {
    make_vehicle(Role::Ego, 0.0, v_ego, PolicyKind::Acc),
    make_vehicle(Role::Lead, gap, v_lead, PolicyKind::ConstantSpeed),
  };
  return c;
}

template <typename F>
std::string config_field(F && mutate)
{
  auto c = two_car(30.0, 15.0, 15.0);
  mutate(c);
  try {
    c.validate();
  } catch (const ConfigError & e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_SUITE("scenario")
{
  TEST_CASE("step_vehicle follows the update rule")
  {
    const auto s = step_vehicle({0.0, 20.0, 0.0, Role::Ego}, 2.0, 0.01);
    CHECK(s.speed == doctest::Approx(20.02).epsilon(1e-15));
    CHECK(s.position == doctest::Approx(0.2002).epsilon(1e-14));
    CHECK(s.accel == 2.0);

    const auto c = step_vehicle({5.0, 15.0, 0.0, Role::Ego}, 0.0, 0.5);
    CHECK(c.speed == 15.0);
    CHECK(c.position == doctest::Approx(12.5));
  }

  TEST_CASE("step_vehicle clamps speed at zero and records the realized accel")
  {
    const auto s = step_vehicle({0.0, 0.5, 0.0, Role::Ego}, -2.0, 0.5);
    CHECK(s.speed == 0.0);
    CHECK(s.position == 0.0);
    CHECK(s.accel == doctest::Approx(-1.0));
  }

  TEST_CASE("step_vehicle clamps the command to the actuator envelope")
  {
    CHECK(step_vehicle({0.0, 10.0, 0.0, Role::Ego}, 50.0, 0.1).accel == 3.0);
    CHECK(step_vehicle({0.0, 10.0, 0.0, Role::Ego}, -50.0, 0.1).accel == -8.0);
  }

  TEST_CASE("step_vehicle rejects non-finite input")
  {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(step_vehicle({0.0, 10.0, 0.0, Role::Ego}, nan, 0.01), Error);
    CHECK_THROWS_AS(step_vehicle({inf, 10.0, 0.0, Role::Ego}, 0.0, 0.01), Error);
    CHECK_THROWS_AS(step_vehicle({0.0, 10.0, 0.0, Role::Ego}, 0.0, 0.0), Error);
    try {
      step_vehicle({0.0, nan, 0.0, Role::Ego}, 0.0, 0.01);
      FAIL("no throw");
    } catch (const Error & e) {
      CHECK(e.kind() == ErrorKind::InvalidState);
    }
  }

  TEST_CASE("acc_command examples")
  {
    AccParams p;
    const VehicleState ego{0.0, 20.0, 0.0, Role::Ego};
    CHECK(acc_command(ego, std::nullopt, p) == 0.0);

    p.v_set = 25.0;
    const double gap_des = p.gap_min + p.gap_des_time * 20.0;
    CHECK(acc_command(ego, VehicleState{gap_des, 20.0, 0.0, Role::Lead}, p) == doctest::Approx(0.0));
    CHECK(
      acc_command(ego, VehicleState{gap_des - 10.0, 20.0, 0.0, Role::Lead}, p) ==
      doctest::Approx(-5.0));
  }

  TEST_CASE("acc_command combines follow and cruise terms")
  {
    AccParams p;
    p.v_set = 20.0;
    // A fast lead far ahead would ask for more than cruise allows.
    const VehicleState ego{0.0, 20.0, 0.0, Role::Ego};
    CHECK(acc_command(ego, VehicleState{100.0, 30.0, 0.0, Role::Lead}, p) == doctest::Approx(0.0));
    // Beyond detection range only the cruise term applies.
    const VehicleState slow{0.0, 10.0, 0.0, Role::Ego};
    CHECK(
      acc_command(slow, VehicleState{200.0, 0.0, 0.0, Role::Lead}, p) ==
      3.0);
    // Clamped at a_min when far too close.
    CHECK(acc_command(ego, VehicleState{3.0, 0.0, 0.0, Role::Lead}, p) == -8.0);
  }

  TEST_CASE("acc_command rejects a lead behind the ego")
  {
    const VehicleState ego{10.0, 20.0, 0.0, Role::Ego};
    try {
      acc_command(ego, VehicleState{5.0, 20.0, 0.0, Role::Lead}, AccParams{});
      FAIL("no throw");
    } catch (const Error & e) {
      CHECK(e.kind() == ErrorKind::InvalidScene);
    }
  }

  TEST_CASE("apply_fault examples")
  {
    CHECK(apply_fault(1.25, std::nullopt, 3.0) == 1.25);
    const FaultSpec accel{FaultKind::UnintendedAccel, 0.5, 0.0, 10.0};
    CHECK(apply_fault(1.0, accel, 5.0) == doctest::Approx(2.5));
    CHECK(apply_fault(2.0, accel, 5.0) == 3.0);
    const FaultSpec brake{FaultKind::UnintendedBrake, 0.8, 0.0, 10.0};
    CHECK(apply_fault(1.0, brake, 5.0) == doctest::Approx(-6.4));
    CHECK(apply_fault(-7.5, brake, 5.0) == doctest::Approx(-6.4));
    CHECK(apply_fault(3.0, brake, 5.0) == doctest::Approx(-6.4));
  }

  TEST_CASE("stuck throttle cancels the controller's braking")
  {
    const FaultSpec accel{FaultKind::UnintendedAccel, 0.2, 0.0, 10.0};
    CHECK(apply_fault(-4.0, accel, 1.0) == doctest::Approx(0.6));
  }

  TEST_CASE("apply_fault is the identity outside the window")
  {
    const FaultSpec f{FaultKind::UnintendedBrake, 1.0, 2.0, 4.0};
    CHECK(apply_fault(1.0, f, 1.99) == 1.0);
    CHECK(apply_fault(1.0, f, 2.0) == -8.0);
    CHECK(apply_fault(1.0, f, 3.99) == -8.0);
    CHECK(apply_fault(1.0, f, 4.0) == 1.0);
  }

  TEST_CASE("detect_collision examples")
  {
    const VehicleState rear{0.0, 13.0, 0.0, Role::Ego};
    CHECK_FALSE(detect_collision({5.0, 10.0, 0.0, Role::Lead}, rear));
    const auto touch = detect_collision({0.0, 10.0, 0.0, Role::Lead}, rear);
    REQUIRE(touch);
    CHECK(touch->impact_dv == doctest::Approx(3.0));
    CHECK(detect_collision({-0.1, 10.0, 0.0, Role::Lead}, rear));
  }

  TEST_CASE("ScenarioConfig validation names the field")
  {
    CHECK(config_field([](auto &) {}) == "");
    CHECK(config_field([](auto & c) { c.dt = 0.0; }) == "dt");
    CHECK(config_field([](auto & c) { c.duration = 0.001; }) == "duration");
    CHECK(config_field([](auto & c) { c.vehicles[1].initial.speed = -1.0; }) == "vehicles[1].speed");
    CHECK(config_field([](auto & c) { c.vehicles[1].initial.position = 0.0; }) == "vehicles");
    CHECK(config_field([](auto & c) { c.vehicles[1].initial.role = Role::Ego; }) == "vehicles");
    CHECK(config_field([](auto & c) { c.acc_params.k_gap = 0.0; }) == "acc_params.k_gap");
    CHECK(config_field([](auto & c) { c.acc_params.gap_min = -1.0; }) == "acc_params.gap_min");
    CHECK(config_field([](auto & c) {
            c.fault = FaultSpec{FaultKind::UnintendedAccel, 1.5, 0.0, 1.0};
          }) == "fault.magnitude");
    CHECK(config_field([](auto & c) {
            c.fault = FaultSpec{FaultKind::UnintendedAccel, 0.5, 3.0, 2.0};
          }) != "");
    CHECK(config_field([](auto & c) { c.vehicles.clear(); }) == "vehicles");
    CHECK(config_field([](auto & c) { c.noise.sigma_range = -0.1; }) != "");
  }

  TEST_CASE("run_scenario with an invalid config throws ConfigError")
  {
    auto c = two_car(30.0, 15.0, 15.0);
    c.dt = -1.0;
    CHECK_THROWS_AS(run_scenario(c), ConfigError);
  }

  TEST_CASE("record count and timing")
  {
    const auto c = two_car(200.0, 15.0, 15.0);
    const auto trace = run_scenario(c);
    CHECK(trace.terminal == TerminalEvent::Completed);
    REQUIRE(trace.records.size() == 1001);
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
      CHECK(trace.records[i].time - trace.records[i - 1].time == doctest::Approx(0.01));
    }
  }

  TEST_CASE("ACC following converges to the equilibrium gap")
  {
    auto c = two_car(40.0, 16.67, 16.67);
    c.acc_params.v_set = 20.0;
    c.duration = 60.0;
    const auto trace = run_scenario(c);
    CHECK(trace.terminal == TerminalEvent::Completed);
    const auto & last = trace.records.back();
    const double gap = last.vehicles[1].position - last.vehicles[0].position;
    CHECK(gap == doctest::Approx(2.0 + 1.5 * 16.67).epsilon(1e-3));
    CHECK(last.vehicles[0].speed == doctest::Approx(16.67).epsilon(1e-4));
  }

  TEST_CASE("ego just behind a stopped lead collides at once")
  {
    auto c = two_car(0.5, 10.0, 0.0);
    const auto trace = run_scenario(c);
    REQUIRE(trace.terminal == TerminalEvent::Collision);
    REQUIRE(trace.collision);
    CHECK(trace.collision->time <= 0.1);
    CHECK(trace.records.back().time == doctest::Approx(trace.collision->time));
  }

  TEST_CASE("scripted lead follows its profile")
  {
    auto c = two_car(80.0, 20.0, 20.0);
    c.vehicles[1].policy = PolicyKind::Scripted;
    c.vehicles[1].profile = {{0.0, 0.0}, {2.0, -4.0}, {4.0, 0.0}};
    const auto trace = run_scenario(c);
    const auto & r = trace.records[300];  // t = 3
    CHECK(r.commanded[1] == -4.0);
    CHECK(trace.records.back().vehicles[1].speed == doctest::Approx(12.0).epsilon(1e-9));
  }

  TEST_CASE("vehicles are stored rear to front with role indices")
  {
    const auto c = unintended_brake_scenario(1.0);
    const auto trace = run_scenario(c);
    CHECK(trace.ego == 1);
    CHECK(trace.behind_ego == std::optional<std::size_t>{0});
    CHECK_FALSE(trace.ahead_of_ego);
    CHECK(trace.records.front().vehicles[0].role == Role::Follower);
  }

  TEST_CASE("reaction time delays the follower's response")
  {
    auto c = unintended_brake_scenario(1.0);
    const auto delayed = run_scenario(c);
    c.vehicles[0].acc->reaction_time = 0.0;
    const auto instant = run_scenario(c);
    // 0.2 s after onset only the undelayed follower has started braking.
    const std::size_t i = static_cast<std::size_t>(std::llround(15.2 / c.dt));
    CHECK(instant.records[i].commanded[0] < -1.0);
    CHECK(delayed.records[i].commanded[0] > -1.0);
  }

  TEST_CASE("scene_truth perspectives")
  {
    const auto trace = run_scenario(unintended_brake_scenario(1.0));
    const auto front = scene_truth(trace, 0, Perspective::EgoFront);
    REQUIRE(front);
    CHECK(front->observer.role == Role::Ego);
    CHECK_FALSE(front->ahead);
    const auto rear = scene_truth(trace, 0, Perspective::EgoRear);
    REQUIRE(rear);
    CHECK(rear->observer.role == Role::Follower);
    REQUIRE(rear->ahead);
    CHECK(rear->ahead->role == Role::Ego);

    const auto solo = run_scenario(two_car(50.0, 10.0, 10.0));
    CHECK_FALSE(scene_truth(solo, 0, Perspective::EgoRear));
  }
}
