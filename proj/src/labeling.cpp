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

#include "ladri/labeling.hpp"

namespace ladri
{

RiskLabel label_features(const FeatureVector & f, const HaraThresholds & t)
{
  return classify(f.rel_speed, f.required_decel, f.ttc, t);
}

std::optional<FeatureVector> ground_truth_features(
  const SimulationTrace & trace, std::size_t record, Perspective perspective)
{
  const auto truth = scene_truth(trace, record, perspective);
  if (!truth) return std::nullopt;
  return build_feature_vector(
    truth_frame(*truth, trace.detection_range, trace.limits), trace.detection_range);
}

TraceLabels label_trace(
  const SimulationTrace & trace, Perspective perspective, const HaraThresholds & t)
{
  TraceLabels out;
  out.labels.reserve(trace.records.size());
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto features = ground_truth_features(trace, i, perspective);
    const RiskLabel label = features ? label_features(*features, t) : RiskLabel{};
    out.labels.push_back(label);
    for (int k = 0; k <= static_cast<int>(label.stage); ++k) {
      if (!out.time_to_stage[k]) out.time_to_stage[k] = trace.records[i].time;
    }
  }
  return out;
}

}  // namespace ladri
