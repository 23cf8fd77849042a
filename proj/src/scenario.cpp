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

#include "ladri/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ladri/error.hpp"

namespace ladri
{

namespace
{

// Guards the [t_start, t_end) window against i * dt rounding.
constexpr double kTimeEps = 1e-9;

bool finite(double v) { return std::isfinite(v); }

void require(bool ok, const std::string & field, const std::string & what)
{
  if (!ok) throw ConfigError(field, what);
}

void validate_acc(const AccParams & p, const std::string & prefix)
{
  require(finite(p.v_set) && p.v_set >= 0.0, prefix + ".v_set", "must be finite and >= 0");
  require(finite(p.gap_des_time) && p.gap_des_time > 0.0, prefix + ".gap_des_time", "must be > 0");
  require(finite(p.gap_min) && p.gap_min > 0.0, prefix + ".gap_min", "must be > 0");
  require(finite(p.k_gap) && p.k_gap > 0.0, prefix + ".k_gap", "must be > 0");
  require(finite(p.k_speed) && p.k_speed > 0.0, prefix + ".k_speed", "must be > 0");
  require(
    finite(p.detection_range) && p.detection_range > 0.0, prefix + ".detection_range",
    "must be > 0");
  require(
    finite(p.reaction_time) && p.reaction_time >= 0.0, prefix + ".reaction_time", "must be >= 0");
}

double profile_accel(const std::vector<ProfilePoint> & profile, double t)
{
  double accel = 0.0;
  for (const auto & point : profile) {
    if (point.time <= t + kTimeEps) {
      accel = point.accel;
    } else {
      break;
    }
  }
  return accel;
}

}  // namespace

std::string_view to_string(FaultKind kind)
{
  return kind == FaultKind::UnintendedAccel ? "UnintendedAccel" : "UnintendedBrake";
}

std::string_view to_string(PolicyKind kind)
{
  switch (kind) {
    case PolicyKind::ConstantSpeed: return "ConstantSpeed";
    case PolicyKind::Scripted: return "Scripted";
    case PolicyKind::Acc: return "Acc";
  }
  return "?";
}

void AccParams::validate() const { validate_acc(*this, "acc_params"); }

bool FaultSpec::active_at(double t) const
{
  return t >= t_start - kTimeEps && t < t_end - kTimeEps;
}

void ScenarioConfig::validate() const
{
  require(finite(dt) && dt > 0.0, "dt", "must be > 0");
  require(finite(duration) && duration >= dt, "duration", "must be >= dt");
  limits.validate();
  validate_acc(acc_params, "acc_params");
  noise.validate();
  hara.validate();

  require(!vehicles.empty(), "vehicles", "at least one vehicle is required");
  std::size_t egos = 0;
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const auto & v = vehicles[i];
    const std::string prefix = "vehicles[" + std::to_string(i) + "]";
    require(finite(v.initial.position), prefix + ".position", "must be finite");
    require(finite(v.initial.speed) && v.initial.speed >= 0.0, prefix + ".speed", "must be >= 0");
    if (v.initial.role == Role::Ego) ++egos;
    if (v.acc) validate_acc(*v.acc, prefix + ".acc_params");
    if (v.policy == PolicyKind::Scripted) {
      require(!v.profile.empty(), prefix + ".profile", "scripted policy needs a profile");
      for (std::size_t k = 0; k < v.profile.size(); ++k) {
        const auto & point = v.profile[k];
        require(
          finite(point.time) && finite(point.accel) &&
            (k == 0 || point.time > v.profile[k - 1].time),
          prefix + ".profile[" + std::to_string(k) + "]",
          "times must be finite and strictly increasing");
      }
    }
  }
  require(egos == 1, "vehicles", "exactly one Ego vehicle is required");

  std::vector<double> positions;
  for (const auto & v : vehicles) positions.push_back(v.initial.position);
  std::sort(positions.begin(), positions.end());
  require(
    std::adjacent_find(positions.begin(), positions.end()) == positions.end(), "vehicles",
    "initial positions must be strictly ordered");

  if (fault) {
    require(
      finite(fault->magnitude) && fault->magnitude > 0.0 && fault->magnitude <= 1.0,
      "fault.magnitude", "must be in (0, 1]");
    require(
      finite(fault->t_start) && finite(fault->t_end) && fault->t_start < fault->t_end,
      "fault.t_start", "must be before t_end");
    require(fault->t_end <= duration + kTimeEps, "fault.t_end", "must not exceed duration");
  }
}

std::size_t ScenarioConfig::step_count() const
{
  return static_cast<std::size_t>(std::floor(duration / dt + kTimeEps));
}

VehicleState step_vehicle(
  const VehicleState & state, double accel_cmd, double dt, const ActuatorLimits & limits)
{
  if (!finite(accel_cmd) || !finite(dt) || !(dt > 0.0) || !finite(state.position) ||
      !finite(state.speed)) {
    throw Error(ErrorKind::InvalidState, "step_vehicle: non-finite input or dt <= 0");
  }
  VehicleState next = state;
  const double a = limits.clamp(accel_cmd);
  double v = state.speed + a * dt;
  next.accel = a;
  if (v < 0.0) {
    v = 0.0;
    next.accel = (0.0 - state.speed) / dt;
  }
  next.speed = v;
  next.position = state.position + v * dt;
  return next;
}

double acc_command(
  const VehicleState & ego, const std::optional<VehicleState> & lead, const AccParams & params,
  const ActuatorLimits & limits)
{
  const double cruise = params.k_speed * (params.v_set - ego.speed);
  double command = cruise;
  if (lead) {
    const double gap = lead->position - ego.position;
    if (!(gap > 0.0)) {
      throw Error(ErrorKind::InvalidScene, "acc_command: lead is not ahead of ego");
    }
    if (gap <= params.detection_range) {
      const double gap_des = params.gap_min + params.gap_des_time * ego.speed;
      const double follow =
        params.k_gap * (gap - gap_des) + params.k_speed * (lead->speed - ego.speed);
      command = std::min(follow, cruise);
    }
  }
  return limits.clamp(command);
}

double apply_fault(
  double accel_cmd, const std::optional<FaultSpec> & fault, double t,
  const ActuatorLimits & limits)
{
  if (!fault || !fault->active_at(t)) return accel_cmd;
  switch (fault->kind) {
    case FaultKind::UnintendedAccel:
      // The stuck throttle leaves the controller no brake authority.
      return limits.clamp(std::max(accel_cmd, 0.0) + fault->magnitude * limits.a_max);
    case FaultKind::UnintendedBrake:
      return std::clamp(fault->magnitude * limits.a_min, limits.a_min, 0.0);
  }
  return accel_cmd;
}

std::optional<CollisionEvent> detect_collision(const VehicleState & front, const VehicleState & rear)
{
  if (front.position - rear.position > 0.0) return std::nullopt;
  CollisionEvent event;
  event.impact_dv = rear.speed - front.speed;
  return event;
}

SimulationTrace run_scenario(const ScenarioConfig & config)
{
  config.validate();

  std::vector<std::size_t> order(config.vehicles.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return config.vehicles[a].initial.position < config.vehicles[b].initial.position;
  });

  std::vector<const VehicleConfig *> setup;
  std::vector<VehicleState> states;
  for (const auto index : order) {
    setup.push_back(&config.vehicles[index]);
    VehicleState s = config.vehicles[index].initial;
    s.accel = 0.0;
    states.push_back(s);
  }
  const std::size_t n = states.size();

  SimulationTrace trace;
  trace.limits = config.limits;
  trace.detection_range = config.acc_params.detection_range;
  for (std::size_t j = 0; j < n; ++j) {
    if (states[j].role == Role::Ego) trace.ego = j;
  }
  if (trace.ego + 1 < n) trace.ahead_of_ego = trace.ego + 1;
  if (trace.ego > 0) trace.behind_ego = trace.ego - 1;

  const std::size_t steps = config.step_count();
  trace.records.reserve(steps + 1);

  // Delayed ACC policies read the scene from the already recorded history.
  auto delay_steps = [&](const VehicleConfig & vc) {
    const double tau = (vc.acc ? *vc.acc : config.acc_params).reaction_time;
    return static_cast<std::size_t>(std::llround(tau / config.dt));
  };

  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * config.dt;

    TraceRecord record;
    record.time = t;
    record.vehicles = states;
    record.commanded.assign(n, 0.0);
    record.effective.assign(n, 0.0);
    record.fault_active = config.fault && config.fault->active_at(t);

    for (std::size_t j = 0; j + 1 < n; ++j) {
      if (auto hit = detect_collision(states[j + 1], states[j])) {
        hit->time = t;
        hit->front = j + 1;
        hit->rear = j;
        trace.collision = hit;
        trace.terminal = TerminalEvent::Collision;
        break;
      }
    }
    if (trace.collision) {
      trace.records.push_back(std::move(record));
      break;
    }

    for (std::size_t j = 0; j < n; ++j) {
      const VehicleConfig & vc = *setup[j];
      double command = 0.0;
      switch (vc.policy) {
        case PolicyKind::ConstantSpeed:
          command = 0.0;
          break;
        case PolicyKind::Scripted:
          command = profile_accel(vc.profile, t);
          break;
        case PolicyKind::Acc: {
          const std::size_t delay = delay_steps(vc);
          const auto & view = (delay == 0 || i == 0)
                                ? states
                                : trace.records[i >= delay ? i - delay : 0].vehicles;
          std::optional<VehicleState> ahead;
          if (j + 1 < n) ahead = view[j + 1];
          command = acc_command(
            view[j], ahead, vc.acc ? *vc.acc : config.acc_params, config.limits);
          break;
        }
      }
      record.commanded[j] = command;
      const double faulted = j == trace.ego ? apply_fault(command, config.fault, t, config.limits)
                                            : command;
      record.effective[j] = config.limits.clamp(faulted);
    }

    if (i < steps) {
      for (std::size_t j = 0; j < n; ++j) {
        states[j] = step_vehicle(states[j], record.effective[j], config.dt, config.limits);
      }
    }
    trace.records.push_back(std::move(record));
  }
  return trace;
}

std::optional<SceneTruth> scene_truth(
  const SimulationTrace & trace, std::size_t record, Perspective perspective)
{
  const TraceRecord & r = trace.records.at(record);
  SceneTruth truth;
  truth.time = r.time;
  if (perspective == Perspective::EgoFront) {
    truth.observer = r.vehicles[trace.ego];
    truth.observer_effective_accel = r.effective[trace.ego];
    if (trace.ahead_of_ego) truth.ahead = r.vehicles[*trace.ahead_of_ego];
    return truth;
  }
  if (!trace.behind_ego) return std::nullopt;
  truth.observer = r.vehicles[*trace.behind_ego];
  truth.observer_effective_accel = r.effective[*trace.behind_ego];
  truth.ahead = r.vehicles[trace.ego];
  return truth;
}

}  // namespace ladri
