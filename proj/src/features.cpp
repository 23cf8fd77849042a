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

#include "ladri/features.hpp"

#include <algorithm>
#include <cmath>

#include "ladri/error.hpp"

namespace ladri
{

std::array<double, kFeatureCount> FeatureVector::to_array() const
{
  return {rel_distance, rel_speed, ego_speed, ttc, headway, required_decel, throttle_pos, brake_pos};
}

FeatureVector FeatureVector::from_array(std::span<const double> v)
{
  if (v.size() != kFeatureCount) {
    throw Error(ErrorKind::InvalidInput, "feature vector must have 8 entries");
  }
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
}

double compute_ttc(double gap, double closing_speed)
{
  if (!(gap >= 0.0) || std::isnan(closing_speed)) {
    throw Error(ErrorKind::InvalidInput, "compute_ttc: gap must be >= 0");
  }
  if (closing_speed <= 0.0) return kTtcCap;
  return std::min(gap / closing_speed, kTtcCap);
}

double compute_headway(double gap, double ego_speed)
{
  if (!(gap >= 0.0) || !(ego_speed >= 0.0)) {
    throw Error(ErrorKind::InvalidInput, "compute_headway: inputs must be >= 0");
  }
  if (ego_speed < kStandstillSpeed) return kHeadwayCap;
  return std::min(gap / ego_speed, kHeadwayCap);
}

double compute_required_decel(double gap, double closing_speed)
{
  if (!(gap >= 0.0) || std::isnan(closing_speed)) {
    throw Error(ErrorKind::InvalidInput, "compute_required_decel: gap must be >= 0");
  }
  if (closing_speed <= 0.0) return 0.0;
  if (gap == 0.0) return kRequiredDecelCap;
  return std::min(closing_speed * closing_speed / (2.0 * gap), kRequiredDecelCap);
}

FeatureVector build_feature_vector(const SensorFrame & frame, double detection_range)
{
  FeatureVector f;
  if (frame.radar_range && frame.radar_range_rate) {
    f.rel_distance = *frame.radar_range;
    f.rel_speed = -*frame.radar_range_rate;
  } else {
    f.rel_distance = detection_range;
    f.rel_speed = 0.0;
  }
  f.ego_speed = frame.wheel_speed;
  f.ttc = compute_ttc(f.rel_distance, f.rel_speed);
  f.headway = compute_headway(f.rel_distance, f.ego_speed);
  f.required_decel = compute_required_decel(f.rel_distance, f.rel_speed);
  f.throttle_pos = frame.throttle_pos;
  f.brake_pos = frame.brake_pos;
  return f;
}

NormStats fit_normalizer(const Matrix & rows)
{
  if (rows.rows() < 2 || rows.cols() == 0) {
    throw Error(ErrorKind::InvalidInput, "fit_normalizer: need at least 2 rows");
  }
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  NormStats stats;
  stats.mean.assign(d, 0.0);
  stats.stddev.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) stats.mean[c] += rows(r, c);
  }
  for (auto & m : stats.mean) m /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double delta = rows(r, c) - stats.mean[c];
      stats.stddev[c] += delta * delta;
    }
  }
  for (auto & s : stats.stddev) s = std::sqrt(s / static_cast<double>(n));
  return stats;
}

void apply_normalizer(const NormStats & stats, std::span<const double> in, std::span<double> out)
{
  if (in.size() != stats.mean.size() || out.size() != in.size()) {
    throw Error(ErrorKind::InvalidInput, "apply_normalizer: dimension mismatch");
  }
  for (std::size_t c = 0; c < in.size(); ++c) {
    out[c] = stats.stddev[c] > 0.0 ? (in[c] - stats.mean[c]) / stats.stddev[c] : 0.0;
  }
}

std::vector<double> apply_normalizer(const NormStats & stats, std::span<const double> v)
{
  std::vector<double> out(v.size());
  apply_normalizer(stats, v, out);
  return out;
}

Matrix apply_normalizer(const NormStats & stats, const Matrix & rows)
{
  Matrix out(rows.rows(), rows.cols());
  for (std::size_t r = 0; r < rows.rows(); ++r) apply_normalizer(stats, rows.row(r), out.row(r));
  return out;
}

std::vector<double> invert_normalizer(const NormStats & stats, std::span<const double> z)
{
  if (z.size() != stats.mean.size()) {
    throw Error(ErrorKind::InvalidInput, "invert_normalizer: dimension mismatch");
  }
  std::vector<double> out(z.size());
  for (std::size_t c = 0; c < z.size(); ++c) out[c] = z[c] * stats.stddev[c] + stats.mean[c];
  return out;
}

}  // namespace ladri
