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
#include <optional>
#include <span>
#include <vector>

#include "ladri/features.hpp"
#include "ladri/matrix.hpp"

namespace ladri
{

/// Dense ReLU network with a softmax head. No hidden layers gives
/// multinomial logistic regression through the same code path.
struct NetworkSpec
{
  std::size_t input_dim = kFeatureCount;
  std::vector<std::size_t> hidden{16, 16};
  std::size_t output_dim = 4;

  void validate() const;
  bool operator==(const NetworkSpec &) const = default;
};

struct DenseLayer
{
  Matrix weights;  // out x in
  std::vector<double> bias;

  bool operator==(const DenseLayer &) const = default;
};

struct ModelWeights
{
  static constexpr int kFormatVersion = 1;

  NetworkSpec spec;
  std::vector<DenseLayer> layers;
  NormStats norm_stats;
  int format_version = kFormatVersion;

  static ModelWeights zeros(const NetworkSpec & spec);
  /// He-normal weights, zero biases, identity normalization.
  static ModelWeights random(const NetworkSpec & spec, std::uint64_t seed);

  /// Throws ModelError on shape mismatch or non-finite entries.
  void validate() const;
  std::size_t parameter_count() const;
  bool operator==(const ModelWeights &) const = default;
};

/// Probabilities for an already normalized input.
std::vector<double> forward(const ModelWeights & weights, std::span<const double> x);

/// Argmax with ties resolved towards the more severe (higher) index.
int argmax_severe(std::span<const double> probabilities);

/// Stage for a raw (unnormalized) feature row.
int predict(const ModelWeights & weights, std::span<const double> raw_features);

/// Allocation-free inference on raw feature rows. Holds a reference to the
/// weights, which must outlive it.
class Predictor
{
public:
  explicit Predictor(const ModelWeights & weights);

  std::span<const double> probabilities(std::span<const double> raw_features);
  int predict(std::span<const double> raw_features);

private:
  const ModelWeights & weights_;
  std::vector<double> a_;
  std::vector<double> b_;
};

struct LossAndGrad
{
  double loss = 0.0;
  std::vector<DenseLayer> grad;  // congruent with ModelWeights::layers
};

/// Weighted mean softmax cross-entropy plus 0.5 * l2 * sum(W^2), and its
/// gradient by backpropagation. Inputs are normalized rows. An empty
/// `class_weights` means unit weights.
LossAndGrad loss_and_grad(
  const ModelWeights & weights, const Matrix & x, std::span<const int> labels,
  std::span<const double> class_weights = {}, double l2 = 0.0);

/// Inverse-frequency weights n / (k * n_c); absent classes get 0.
std::vector<double> inverse_frequency_weights(std::span<const int> labels, std::size_t classes);

struct LabeledSet
{
  Matrix x;  // raw features
  std::vector<int> y;

  std::size_t size() const { return y.size(); }
};

struct TrainConfig
{
  double learning_rate = 1e-3;
  std::size_t batch_size = 64;
  std::size_t epochs = 30;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  /// Seeds minibatch shuffling; derived from `seed` when unset.
  std::optional<std::uint64_t> shuffle_seed;
  double l2 = 0.0;
  bool class_weighting = true;

  void validate() const;
  bool operator==(const TrainConfig &) const = default;
};

struct EpochRecord
{
  std::size_t epoch = 0;  // 0 is the untrained initialization
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainResult
{
  ModelWeights weights;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
};

/// Adam over seeded, shuffled minibatches. The normalizer is fit on `train`
/// only. Returns the weights of the epoch with the lowest validation loss,
/// or the lowest training loss when `val` is empty.
TrainResult train(
  const NetworkSpec & spec, const TrainConfig & config, const LabeledSet & train,
  const LabeledSet & val);

/// Logistic-regression baseline: `train` with no hidden layers.
TrainResult train_baseline(
  const TrainConfig & config, const LabeledSet & train, const LabeledSet & val);

}  // namespace ladri
