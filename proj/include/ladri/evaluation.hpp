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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ladri/network.hpp"

namespace ladri
{

struct ClassMetrics
{
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct Metrics
{
  std::size_t sample_count = 0;
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;
  double macro_f1 = 0.0;
  /// confusion[true][predicted]
  std::vector<std::vector<std::size_t>> confusion;
  double mean_inference_latency = 0.0;  // s/frame
};

/// Standard definitions; 0/0 precision, recall or F1 count as 0.
/// `latencies` may be empty, in which case the mean latency is 0.
Metrics evaluate(
  std::span<const int> predictions, std::span<const int> labels,
  std::span<const double> latencies = {}, std::size_t classes = 4);

/// Runs the model over every row, timing each inference.
Metrics evaluate_model(const ModelWeights & weights, const LabeledSet & data);

/// Stratified k-fold assignment: returns the row indices of each fold.
/// Classes are dealt round-robin after a seeded shuffle, so every fold holds
/// floor or ceil of n_c / k rows of each class.
std::vector<std::vector<std::size_t>> stratified_folds(
  std::span<const int> labels, std::size_t k, std::uint64_t seed, std::size_t classes = 4);

struct CrossValidationResult
{
  std::vector<Metrics> folds;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // sample standard deviation over folds
  double mean_macro_f1 = 0.0;
  double std_macro_f1 = 0.0;
};

/// Fold i trains on the other folds with seed config.seed + i and is scored
/// on fold i. No validation split is carved out: each fold keeps the epoch
/// with the lowest training loss.
CrossValidationResult cross_validate(
  const NetworkSpec & spec, const TrainConfig & config, const LabeledSet & data,
  std::size_t k = 5);

LabeledSet subset(const LabeledSet & data, std::span<const std::size_t> indices);

}  // namespace ladri
