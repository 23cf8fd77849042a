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

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ladri/matrix.hpp"
#include "ladri/sensors.hpp"

namespace ladri
{

inline constexpr double kTtcCap = 60.0;             // s
inline constexpr double kHeadwayCap = 10.0;         // s
inline constexpr double kRequiredDecelCap = 12.0;   // m/s^2
inline constexpr double kStandstillSpeed = 0.1;     // m/s

inline constexpr std::size_t kFeatureCount = 8;

/// Bumped whenever the names, order or meaning of the features change.
inline constexpr int kFeatureContractVersion = 1;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{
  "rel_distance", "rel_speed", "ego_speed", "ttc",
  "headway", "required_decel", "throttle_pos", "brake_pos",
};

/// Classifier input. `rel_speed` is positive while closing.
struct FeatureVector
{
  double rel_distance = 0.0;
  double rel_speed = 0.0;
  double ego_speed = 0.0;
  double ttc = kTtcCap;
  double headway = kHeadwayCap;
  double required_decel = 0.0;
  double throttle_pos = 0.0;
  double brake_pos = 0.0;

  std::array<double, kFeatureCount> to_array() const;
  static FeatureVector from_array(std::span<const double> values);

  bool operator==(const FeatureVector &) const = default;
};

double compute_ttc(double gap, double closing_speed);
double compute_headway(double gap, double ego_speed);
double compute_required_decel(double gap, double closing_speed);

/// Radar NoDetection maps to "free road": rel_distance = detection_range, rel_speed = 0.
FeatureVector build_feature_vector(const SensorFrame & frame, double detection_range);

/// Population z-score statistics; stored with the model.
struct NormStats
{
  std::vector<double> mean;
  std::vector<double> stddev;

  bool operator==(const NormStats &) const = default;
};

NormStats fit_normalizer(const Matrix & rows);

/// Features with zero spread map to 0.
void apply_normalizer(const NormStats & stats, std::span<const double> in, std::span<double> out);
std::vector<double> apply_normalizer(const NormStats & stats, std::span<const double> v);
Matrix apply_normalizer(const NormStats & stats, const Matrix & rows);

std::vector<double> invert_normalizer(const NormStats & stats, std::span<const double> z);

}  // namespace ladri
