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
#include <random>

#include "gradient_oracle.hpp"
#include "ladri/error.hpp"
#include "ladri/network.hpp"

using namespace ladri;

namespace
{

Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64 & rng)
{
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (auto & v : m.data()) v = g(rng);
  return m;
}

ModelWeights randomized(const NetworkSpec & spec, std::uint64_t seed)
{
  auto w = ModelWeights::random(spec, seed);
  std::mt19937_64 rng(seed + 1);
  std::normal_distribution<double> g(0.0, 0.3);
  for (auto & layer : w.layers) {
    for (auto & b : layer.bias) b = g(rng);
  }
  return w;
}

/// Four well separated clusters, one per class.
LabeledSet toy_set(std::size_t per_class, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, 0.1);
  LabeledSet s;
  s.x = Matrix(per_class * 4, 8);
  for (std::size_t i = 0; i < per_class * 4; ++i) {
    const int y = static_cast<int>(i % 4);
    for (std::size_t c = 0; c < 8; ++c) {
      s.x(i, c) = (c % 4 == static_cast<std::size_t>(y) ? 3.0 : 0.0) + jitter(rng);
    }
    s.y.push_back(y);
  }
  return s;
}

}  // namespace

TEST_SUITE("network")
{
  TEST_CASE("zero weights give a uniform distribution")
  {
    const auto w = ModelWeights::zeros(NetworkSpec{});
    const std::vector<double> x(8, 0.7);
    for (const double p : forward(w, x)) CHECK(p == 0.25);
  }

  TEST_CASE("a large output bias dominates")
  {
    auto w = ModelWeights::zeros(NetworkSpec{});
    w.layers.back().bias = {10.0, 0.0, 0.0, 0.0};
    const std::vector<double> x(8, 0.0);
    const double e10 = std::exp(10.0);
    CHECK(forward(w, x)[0] == doctest::Approx(e10 / (e10 + 3.0)).epsilon(1e-14));
    CHECK(forward(w, x)[0] > 0.9998);
  }

  TEST_CASE("softmax output is a distribution for random weights")
  {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 3.0);
    for (int t = 0; t < 200; ++t) {
      const auto w = randomized(NetworkSpec{}, static_cast<std::uint64_t>(t));
      std::vector<double> x(8);
      for (auto & v : x) v = g(rng);
      const auto p = forward(w, x);
      double sum = 0.0;
      for (const double v : p) {
        CHECK(v > 0.0);
        sum += v;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("huge logits stay finite")
  {
    auto w = ModelWeights::zeros(NetworkSpec{8, {}, 4});
    w.layers.back().bias = {1000.0, 999.0, -1000.0, 0.0};
    const auto p = forward(w, std::vector<double>(8, 0.0));
    for (const double v : p) CHECK(std::isfinite(v));
    CHECK(p[0] > p[1]);
  }

  TEST_CASE("forward rejects a wrong input width")
  {
    const auto w = ModelWeights::zeros(NetworkSpec{});
    try {
      forward(w, std::vector<double>(5, 0.0));
      FAIL("no throw");
    } catch (const Error & e) {
      CHECK(e.kind() == ErrorKind::Model);
    }
  }

  TEST_CASE("argmax prefers the more severe stage on ties")
  {
    const std::vector<double> uniform{0.25, 0.25, 0.25, 0.25};
    CHECK(argmax_severe(uniform) == 3);
    const std::vector<double> warn{0.1, 0.7, 0.1, 0.1};
    CHECK(argmax_severe(warn) == 1);
    const std::vector<double> tie{0.4, 0.1, 0.4, 0.1};
    CHECK(argmax_severe(tie) == 2);
    CHECK(predict(ModelWeights::zeros(NetworkSpec{}), std::vector<double>(8, 1.0)) == 3);
  }

  TEST_CASE("Predictor matches forward after normalization")
  {
    auto w = randomized(NetworkSpec{}, 17);
    w.norm_stats.mean = {1, 2, 3, 4, 5, 6, 7, 8};
    w.norm_stats.stddev = {2, 2, 2, 2, 0, 1, 1, 1};
    Predictor pred(w);
    const std::vector<double> raw{3, 1, 4, 1, 5, 9, 2, 6};
    const auto expected = forward(w, apply_normalizer(w.norm_stats, raw));
    const auto got = pred.probabilities(raw);
    REQUIRE(got.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) CHECK(got[k] == expected[k]);
    CHECK(pred.predict(raw) == predict(w, raw));
  }

  TEST_CASE("loss at zero weights is ln 4 and the bias gradient is p - y")
  {
    const auto w = ModelWeights::zeros(NetworkSpec{});
    Matrix x(1, 8, 0.5);
    const std::vector<int> y{2};
    const auto lg = loss_and_grad(w, x, y);
    CHECK(lg.loss == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    const auto & gb = lg.grad.back().bias;
    CHECK(gb[0] == doctest::Approx(0.25));
    CHECK(gb[1] == doctest::Approx(0.25));
    CHECK(gb[2] == doctest::Approx(-0.75));
    CHECK(gb[3] == doctest::Approx(0.25));
  }

  TEST_CASE("output bias gradient is the weighted mean of p - y")
  {
    const auto w = ModelWeights::zeros(NetworkSpec{8, {}, 4});
    Matrix x(2, 8, 0.0);
    const std::vector<int> y{0, 1};
    const std::vector<double> cw{3.0, 1.0, 1.0, 1.0};
    const auto lg = loss_and_grad(w, x, y, cw);
    // (3 * (p - e0) + 1 * (p - e1)) / 4
    CHECK(lg.grad.back().bias[0] == doctest::Approx((3 * -0.75 + 0.25) / 4));
    CHECK(lg.grad.back().bias[1] == doctest::Approx((3 * 0.25 - 0.75) / 4));
    CHECK(lg.grad.back().bias[2] == doctest::Approx(0.25));
  }

  TEST_CASE("gradient matches finite differences on a small net")
  {
    NetworkSpec spec{8, {3}, 4};
    std::mt19937_64 rng(21);
    const auto w = randomized(spec, 5);
    const auto x = random_matrix(5, 8, rng);
    const std::vector<int> y{0, 3, 1, 2, 3};
    const auto check = test::check_gradient(w, x, y, {}, 0.0);
    CHECK(check.checked == w.parameter_count());
    CHECK(check.max_rel_error <= 1e-4);
  }

  TEST_CASE("baseline gradient matches finite differences, with l2 and class weights")
  {
    NetworkSpec spec{8, {}, 4};
    std::mt19937_64 rng(22);
    const auto w = randomized(spec, 6);
    const auto x = random_matrix(7, 8, rng);
    const std::vector<int> y{0, 1, 1, 2, 3, 3, 3};
    const std::vector<double> cw{2.0, 1.0, 0.5, 1.5};
    CHECK(test::check_gradient(w, x, y, cw, 0.01).max_rel_error <= 1e-4);
  }

  TEST_CASE("loss_and_grad rejects bad batches")
  {
    const auto w = ModelWeights::zeros(NetworkSpec{});
    Matrix x(1, 8);
    const std::vector<int> bad{4};
    try {
      loss_and_grad(w, x, bad);
      FAIL("no throw");
    } catch (const Error & e) {
      CHECK(e.kind() == ErrorKind::Data);
    }
    CHECK_THROWS_AS(loss_and_grad(w, Matrix(0, 8), std::vector<int>{}), Error);
    const std::vector<int> y{1};
    const std::vector<double> zero{1.0, 0.0, 1.0, 1.0};
    CHECK_THROWS_AS(loss_and_grad(w, x, y, zero), Error);
  }

  TEST_CASE("inverse-frequency weights")
  {
    const std::vector<int> y{0, 0, 0, 1};
    const auto cw = inverse_frequency_weights(y, 4);
    CHECK(cw[0] == doctest::Approx(4.0 / (4 * 3)));
    CHECK(cw[1] == doctest::Approx(1.0));
    CHECK(cw[2] == 0.0);
  }

  TEST_CASE("weight validation")
  {
    auto w = ModelWeights::random(NetworkSpec{}, 1);
    CHECK_NOTHROW(w.validate());
    CHECK(w.parameter_count() == 8 * 16 + 16 + 16 * 16 + 16 + 16 * 4 + 4);
    auto bad = w;
    bad.layers[1].bias.pop_back();
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = w;
    bad.layers[0].weights(0, 0) = std::nan("");
    CHECK_THROWS_AS(bad.validate(), Error);
    CHECK_THROWS_AS(NetworkSpec({8, {0}, 4}).validate(), Error);
  }

  TEST_CASE("tiny set is learned to 100 percent")
  {
    const auto data = toy_set(2, 1);
    TrainConfig cfg;
    cfg.epochs = 500;
    cfg.batch_size = 4;
    cfg.learning_rate = 0.01;
    const auto r = train(NetworkSpec{}, cfg, data, {});
    CHECK(r.history.back().train_accuracy == 1.0);
    CHECK(r.history.size() == 501);
  }

  TEST_CASE("training lowers the loss and is deterministic")
  {
    const auto data = toy_set(50, 2);
    const auto val = toy_set(10, 3);
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.seed = 9;
    const auto a = train(NetworkSpec{}, cfg, data, val);
    const auto b = train(NetworkSpec{}, cfg, data, val);
    CHECK(a.history.back().train_loss < a.history.front().train_loss);
    CHECK(a.weights == b.weights);
    CHECK(a.best_epoch == b.best_epoch);
    cfg.seed = 10;
    CHECK_FALSE(train(NetworkSpec{}, cfg, data, val).weights == a.weights);
  }

  TEST_CASE("trained model agrees with its labels on a separable set")
  {
    const auto data = toy_set(100, 4);
    TrainConfig cfg;
    cfg.epochs = 20;
    const auto r = train(NetworkSpec{}, cfg, data, {});
    std::size_t agree = 0;
    for (std::size_t i = 0; i < data.size(); ++i) agree += predict(r.weights, data.x.row(i)) == data.y[i];
    CHECK(agree >= 0.99 * data.size());
  }

  TEST_CASE("best epoch follows validation loss")
  {
    const auto data = toy_set(30, 5);
    const auto val = toy_set(10, 6);
    TrainConfig cfg;
    cfg.epochs = 10;
    const auto r = train(NetworkSpec{}, cfg, data, val);
    for (const auto & e : r.history) CHECK(r.history[r.best_epoch].val_loss <= e.val_loss);
  }

  TEST_CASE("normalizer is fit on training rows only")
  {
    const auto data = toy_set(20, 7);
    auto val = toy_set(5, 8);
    TrainConfig cfg;
    cfg.epochs = 1;
    const auto a = train(NetworkSpec{}, cfg, data, val);
    for (auto & v : val.x.data()) v *= 100.0;
    const auto b = train(NetworkSpec{}, cfg, data, val);
    CHECK(a.weights.norm_stats == b.weights.norm_stats);
  }

  TEST_CASE("baseline is the no-hidden-layer network")
  {
    const auto data = toy_set(20, 9);
    TrainConfig cfg;
    cfg.epochs = 3;
    const auto base = train_baseline(cfg, data, {});
    CHECK(base.weights.layers.size() == 1);
    const auto same = train(NetworkSpec{8, {}, 4}, cfg, data, {});
    CHECK(base.weights == same.weights);
  }

  TEST_CASE("train rejects bad input")
  {
    TrainConfig cfg;
    CHECK_THROWS_AS(train(NetworkSpec{}, cfg, {}, {}), Error);
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(train(NetworkSpec{}, cfg, toy_set(2, 1), {}), ConfigError);
    cfg = TrainConfig{};
    cfg.epochs = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
}
