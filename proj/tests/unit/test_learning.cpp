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

#include "ladri/dataset.hpp"
#include "ladri/evaluation.hpp"
#include "ladri/json_io.hpp"
#include "ladri/labeling.hpp"
#include "ladri/scenarios.hpp"
#include "ladri/sensors.hpp"

using namespace ladri;

namespace
{

struct Standard
{
  DatasetSplit split;
  LabeledSet train;
  LabeledSet val;
  LabeledSet test;
  TrainingSpec spec;
};

const Standard & standard()
{
  static const Standard s = [] {
    Standard out;
    out.spec = training_spec_from_json(load_json_file(LADRI_CONFIG_DIR "/training.json"));
    const auto data = generate_dataset(default_sweep());
    out.split = split_dataset(data.rows, out.spec.split_fractions, out.spec.split_seed);
    out.train = to_labeled_set(out.split.train);
    out.val = to_labeled_set(out.split.val);
    out.test = to_labeled_set(out.split.test);
    return out;
  }();
  return s;
}

const ModelWeights & standard_model()
{
  static const ModelWeights w = [] {
    const auto & s = standard();
    return train(s.spec.network, s.spec.train, s.train, s.val).weights;
  }();
  return w;
}

}  // namespace

TEST_SUITE("learning")
{
  TEST_CASE("held-out accuracy is stable across minibatch shuffles")
  {
    const auto & s = standard();
    const double reference = evaluate_model(standard_model(), s.test).accuracy;
    for (const std::uint64_t shuffle : {101u, 202u}) {
      auto cfg = s.spec.train;
      cfg.shuffle_seed = shuffle;
      const auto w = train(s.spec.network, cfg, s.train, s.val).weights;
      CHECK(std::abs(evaluate_model(w, s.test).accuracy - reference) <= 0.02);
    }
  }

  TEST_CASE("cross-validation agrees with the held-out split")
  {
    const auto & s = standard();
    LabeledSet all = s.train;
    for (const auto * part : {&s.val, &s.test}) {
      for (std::size_t i = 0; i < part->size(); ++i) all.x.append_row(part->x.row(i));
      all.y.insert(all.y.end(), part->y.begin(), part->y.end());
    }
    const auto cv = cross_validate(s.spec.network, s.spec.train, all, 5);
    const double held_out = evaluate_model(standard_model(), s.test).accuracy;
    CHECK(std::abs(cv.mean_accuracy - held_out) <= 0.03);
  }

  TEST_CASE("model in the loop agrees with the oracle on a training-like scenario")
  {
    const auto & w = standard_model();
    auto config = unintended_accel_scenario(0.5);
    config.seed = 3;
    const auto trace = run_scenario(config);
    Rng rng(config.seed);
    Predictor predictor(w);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
      const auto truth = scene_truth(trace, i, Perspective::EgoFront);
      const auto frame = sample_sensors(*truth, config.noise, trace.detection_range, trace.limits, rng);
      const auto oracle = label_features(*ground_truth_features(trace, i, Perspective::EgoFront));
      agree += predictor.predict(build_feature_vector(frame, trace.detection_range).to_array()) ==
               static_cast<int>(oracle.stage);
    }
    CHECK(static_cast<double>(agree) / trace.records.size() >= 0.90);
  }

  TEST_CASE("shuffling row order with the same shuffle seed path is reproducible")
  {
    const auto & s = standard();
    const auto a = train(s.spec.network, s.spec.train, s.train, s.val);
    CHECK(a.weights == standard_model());
  }
}
