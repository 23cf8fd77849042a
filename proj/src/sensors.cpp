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

#include "ladri/sensors.hpp"

#include <algorithm>
#include <cmath>

#include "ladri/error.hpp"

namespace ladri
{

namespace
{
constexpr double kPedalTolerance = 1e-12;
}

void NoiseSpec::validate() const
{
  auto sigma_ok = [](double s) { return std::isfinite(s) && s >= 0.0; };
  if (!sigma_ok(sigma_range)) throw ConfigError("noise.sigma_range", "must be >= 0");
  if (!sigma_ok(sigma_range_rate)) throw ConfigError("noise.sigma_range_rate", "must be >= 0");
  if (!sigma_ok(sigma_wheel)) throw ConfigError("noise.sigma_wheel", "must be >= 0");
  if (!sigma_ok(sigma_pedal)) throw ConfigError("noise.sigma_pedal", "must be >= 0");
  if (!(dropout_prob >= 0.0 && dropout_prob < 1.0)) {
    throw ConfigError("noise.dropout_prob", "must be in [0, 1)");
  }
}

PedalPositions pedals_from_accel(double a_eff, const ActuatorLimits & limits)
{
  if (!std::isfinite(a_eff) || a_eff < limits.a_min - kPedalTolerance ||
      a_eff > limits.a_max + kPedalTolerance) {
    throw Error(ErrorKind::InvalidState, "pedals_from_accel: acceleration outside actuator limits");
  }
  if (a_eff >= 0.0) return {std::min(a_eff / limits.a_max, 1.0), 0.0};
  return {0.0, std::min(a_eff / limits.a_min, 1.0)};
}

SensorFrame truth_frame(
  const SceneTruth & truth, double detection_range, const ActuatorLimits & limits)
{
  SensorFrame frame;
  frame.time = truth.time;
  if (truth.ahead) {
    const double gap = truth.ahead->position - truth.observer.position;
    if (gap <= detection_range) {
      frame.radar_range = std::max(gap, 0.0);
      frame.radar_range_rate = truth.ahead->speed - truth.observer.speed;
    }
  }
  frame.wheel_speed = truth.observer.speed;
  frame.engine_speed_proxy = truth.observer.speed;
  const auto pedals = pedals_from_accel(truth.observer_effective_accel, limits);
  frame.throttle_pos = pedals.throttle;
  frame.brake_pos = pedals.brake;
  return frame;
}

SensorFrame sample_sensors(
  const SceneTruth & truth, const NoiseSpec & noise, double detection_range,
  const ActuatorLimits & limits, Rng & rng)
{
  SensorFrame frame = truth_frame(truth, detection_range, limits);

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double n_range = gauss(rng);
  const double n_rate = gauss(rng);
  const double n_wheel = gauss(rng);
  const double n_engine = gauss(rng);
  const double n_throttle = gauss(rng);
  const double n_brake = gauss(rng);
  const double u_dropout = uniform(rng);

  if (frame.radar_range) {
    frame.radar_range = std::max(0.0, *frame.radar_range + noise.sigma_range * n_range);
    frame.radar_range_rate = *frame.radar_range_rate + noise.sigma_range_rate * n_rate;
  }
  if (u_dropout < noise.dropout_prob) {
    frame.radar_range.reset();
    frame.radar_range_rate.reset();
  }
  frame.wheel_speed = std::max(0.0, frame.wheel_speed + noise.sigma_wheel * n_wheel);
  frame.engine_speed_proxy =
    std::max(0.0, frame.engine_speed_proxy + noise.sigma_wheel * n_engine);
  frame.throttle_pos = std::clamp(frame.throttle_pos + noise.sigma_pedal * n_throttle, 0.0, 1.0);
  frame.brake_pos = std::clamp(frame.brake_pos + noise.sigma_pedal * n_brake, 0.0, 1.0);
  return frame;
}

}  // namespace ladri
