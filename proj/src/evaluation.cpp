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

#include "ladri/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <numeric>
#include <random>
#include <string>

#include "ladri/error.hpp"

namespace ladri
{

namespace
{

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

void mean_std(const std::vector<double> & v, double & mean, double & stddev)
{
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
}

}  // namespace

Metrics evaluate(
  std::span<const int> predictions, std::span<const int> labels,
  std::span<const double> latencies, std::size_t classes)
{
  if (predictions.size() != labels.size() || labels.empty()) {
    throw Error(ErrorKind::Data, "evaluate: predictions and labels must have equal, non-zero length");
  }
  if (!latencies.empty() && latencies.size() != labels.size()) {
    throw Error(ErrorKind::Data, "evaluate: latency count does not match");
  }
  Metrics m;
  m.sample_count = labels.size();
  m.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    const int p = predictions[i];
    if (y < 0 || p < 0 || static_cast<std::size_t>(y) >= classes ||
        static_cast<std::size_t>(p) >= classes) {
      throw Error(ErrorKind::Data, "evaluate: class index out of range");
    }
    ++m.confusion[static_cast<std::size_t>(y)][static_cast<std::size_t>(p)];
  }

  std::size_t correct = 0;
  m.per_class.resize(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    correct += m.confusion[c][c];
    std::size_t predicted = 0;
    std::size_t actual = 0;
    for (std::size_t o = 0; o < classes; ++o) {
      predicted += m.confusion[o][c];
      actual += m.confusion[c][o];
    }
    auto & cm = m.per_class[c];
    cm.support = actual;
    const double tp = static_cast<double>(m.confusion[c][c]);
    cm.precision = ratio(tp, static_cast<double>(predicted));
    cm.recall = ratio(tp, static_cast<double>(actual));
    cm.f1 = ratio(2.0 * cm.precision * cm.recall, cm.precision + cm.recall);
    m.macro_f1 += cm.f1;
  }
  m.macro_f1 /= static_cast<double>(classes);
  m.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());
  if (!latencies.empty()) {
    m.mean_inference_latency =
      std::accumulate(latencies.begin(), latencies.end(), 0.0) / static_cast<double>(labels.size());
  }
  return m;
}

Metrics evaluate_model(const ModelWeights & weights, const LabeledSet & data)
{
  Predictor predictor(weights);
  std::vector<int> predictions(data.size());
  std::vector<double> latencies(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    predictions[i] = predictor.predict(data.x.row(i));
    const auto stop = std::chrono::steady_clock::now();
    latencies[i] = std::chrono::duration<double>(stop - start).count();
  }
  return evaluate(predictions, data.y, latencies, weights.spec.output_dim);
}

std::vector<std::vector<std::size_t>> stratified_folds(
  std::span<const int> labels, std::size_t k, std::uint64_t seed, std::size_t classes)
{
  if (k < 2) throw Error(ErrorKind::InvalidInput, "stratified_folds: k must be >= 2");
  if (labels.size() < k) throw Error(ErrorKind::InvalidInput, "stratified_folds: fewer rows than folds");

  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= classes) {
      throw Error(ErrorKind::Data, "stratified_folds: label out of range");
    }
    by_class[static_cast<std::size_t>(y)].push_back(i);
  }
  for (std::size_t c = 0; c < classes; ++c) {
    const auto n = by_class[c].size();
    if (n > 0 && n < k) {
      throw StratifyError(
        static_cast<int>(c),
        "has " + std::to_string(n) + " samples, fewer than k = " + std::to_string(k));
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;  // carried across classes so fold totals stay balanced
  for (auto & members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (const auto index : members) {
      folds[next].push_back(index);
      next = (next + 1) % k;
    }
  }
  for (auto & fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

LabeledSet subset(const LabeledSet & data, std::span<const std::size_t> indices)
{
  LabeledSet out;
  out.x = Matrix(indices.size(), data.x.cols());
  out.y.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = data.x.row(indices[i]);
    std::copy(src.begin(), src.end(), out.x.row(i).begin());
    out.y.push_back(data.y[indices[i]]);
  }
  return out;
}

CrossValidationResult cross_validate(
  const NetworkSpec & spec, const TrainConfig & config, const LabeledSet & data, std::size_t k)
{
  const auto folds = stratified_folds(data.y, k, config.seed, spec.output_dim);

  auto run_fold = [&](std::size_t f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t g = 0; g < k; ++g) {
      if (g != f) train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    TrainConfig fold_config = config;
    fold_config.seed = config.seed + f;
    if (config.shuffle_seed) fold_config.shuffle_seed = *config.shuffle_seed + f;
    const auto trained = train(spec, fold_config, subset(data, train_idx), LabeledSet{});
    return evaluate_model(trained.weights, subset(data, folds[f]));
  };

  // Folds share only the immutable dataset.
  std::vector<std::future<Metrics>> pending;
  for (std::size_t f = 0; f < k; ++f) pending.push_back(std::async(std::launch::async, run_fold, f));

  CrossValidationResult result;
  std::vector<double> acc;
  std::vector<double> f1;
  for (auto & p : pending) {
    result.folds.push_back(p.get());
    acc.push_back(result.folds.back().accuracy);
    f1.push_back(result.folds.back().macro_f1);
  }
  mean_std(acc, result.mean_accuracy, result.std_accuracy);
  mean_std(f1, result.mean_macro_f1, result.std_macro_f1);
  return result;
}

}  // namespace ladri
