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

#include "ladri/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "ladri/error.hpp"

namespace ladri
{

namespace
{

std::size_t max_width(const NetworkSpec & spec)
{
  std::size_t w = std::max(spec.input_dim, spec.output_dim);
  for (const auto h : spec.hidden) w = std::max(w, h);
  return w;
}

std::vector<std::size_t> layer_widths(const NetworkSpec & spec)
{
  std::vector<std::size_t> widths{spec.input_dim};
  widths.insert(widths.end(), spec.hidden.begin(), spec.hidden.end());
  widths.push_back(spec.output_dim);
  return widths;
}

// out = W * in + b
void affine(const DenseLayer & layer, std::span<const double> in, std::span<double> out)
{
  const std::size_t rows = layer.weights.rows();
  const std::size_t cols = layer.weights.cols();
  const double * w = layer.weights.data().data();
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = layer.bias[r];
    const double * wr = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * in[c];
    out[r] = acc;
  }
}

void softmax_in_place(std::span<double> z)
{
  const double peak = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (auto & v : z) {
    v = std::exp(v - peak);
    sum += v;
  }
  for (auto & v : z) v /= sum;
}

NormStats identity_norm(std::size_t dim)
{
  return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

void check_labels(std::span<const int> labels, std::size_t classes)
{
  for (const int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= classes) {
      throw Error(ErrorKind::Data, "label " + std::to_string(y) + " out of range");
    }
  }
}

struct AdamState
{
  std::vector<DenseLayer> m;
  std::vector<DenseLayer> v;
  std::size_t step = 0;
};

std::vector<DenseLayer> zeros_like(const std::vector<DenseLayer> & layers)
{
  std::vector<DenseLayer> out;
  for (const auto & l : layers) {
    out.push_back({Matrix(l.weights.rows(), l.weights.cols()), std::vector<double>(l.bias.size())});
  }
  return out;
}

void adam_update(
  std::vector<double> & param, std::vector<double> & m, std::vector<double> & v,
  const std::vector<double> & g, const TrainConfig & c, double lr_t)
{
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
    param[i] -= lr_t * m[i] / (std::sqrt(v[i]) + c.epsilon);
  }
}

void adam_step(ModelWeights & w, AdamState & state, const LossAndGrad & lg, const TrainConfig & c)
{
  ++state.step;
  const double t = static_cast<double>(state.step);
  // Bias correction folded into the step size; epsilon is applied to the uncorrected v.
  const double lr_t =
    c.learning_rate * std::sqrt(1.0 - std::pow(c.beta2, t)) / (1.0 - std::pow(c.beta1, t));
  for (std::size_t l = 0; l < w.layers.size(); ++l) {
    adam_update(
      w.layers[l].weights.data(), state.m[l].weights.data(), state.v[l].weights.data(),
      lg.grad[l].weights.data(), c, lr_t);
    adam_update(w.layers[l].bias, state.m[l].bias, state.v[l].bias, lg.grad[l].bias, c, lr_t);
  }
}

struct SetScore
{
  double loss = 0.0;
  double accuracy = 0.0;
};

SetScore score(
  const ModelWeights & w, const Matrix & xn, std::span<const int> y,
  std::span<const double> class_weights, double l2)
{
  if (y.empty()) return {};
  double weight_sum = 0.0;
  for (const int label : y) weight_sum += class_weights.empty() ? 1.0 : class_weights[label];
  SetScore s;
  s.loss = loss_and_grad(w, xn, y, weight_sum > 0.0 ? class_weights : std::span<const double>{}, l2)
             .loss;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (argmax_severe(forward(w, xn.row(i))) == y[i]) ++hits;
  }
  s.accuracy = static_cast<double>(hits) / static_cast<double>(y.size());
  return s;
}

}  // namespace

void NetworkSpec::validate() const
{
  if (input_dim == 0) throw Error(ErrorKind::Model, "input_dim must be >= 1");
  if (output_dim == 0) throw Error(ErrorKind::Model, "output_dim must be >= 1");
  for (const auto h : hidden) {
    if (h == 0) throw Error(ErrorKind::Model, "hidden widths must be >= 1");
  }
}

ModelWeights ModelWeights::zeros(const NetworkSpec & spec)
{
  spec.validate();
  ModelWeights w;
  w.spec = spec;
  const auto widths = layer_widths(spec);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    w.layers.push_back({Matrix(widths[l + 1], widths[l]), std::vector<double>(widths[l + 1], 0.0)});
  }
  w.norm_stats = identity_norm(spec.input_dim);
  return w;
}

ModelWeights ModelWeights::random(const NetworkSpec & spec, std::uint64_t seed)
{
  ModelWeights w = zeros(spec);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (auto & layer : w.layers) {
    const double scale = std::sqrt(2.0 / static_cast<double>(layer.weights.cols()));
    for (auto & v : layer.weights.data()) v = scale * gauss(rng);
  }
  return w;
}

void ModelWeights::validate() const
{
  spec.validate();
  const auto widths = layer_widths(spec);
  if (layers.size() + 1 != widths.size()) {
    throw Error(ErrorKind::Model, "layer count does not match spec");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto & layer = layers[l];
    if (layer.weights.rows() != widths[l + 1] || layer.weights.cols() != widths[l] ||
        layer.bias.size() != widths[l + 1]) {
      throw Error(ErrorKind::Model, "layer " + std::to_string(l) + " shape does not match spec");
    }
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(layer.weights.data().begin(), layer.weights.data().end(), finite) ||
        !std::all_of(layer.bias.begin(), layer.bias.end(), finite)) {
      throw Error(ErrorKind::Model, "layer " + std::to_string(l) + " has non-finite entries");
    }
  }
  if (norm_stats.mean.size() != spec.input_dim || norm_stats.stddev.size() != spec.input_dim) {
    throw Error(ErrorKind::Model, "normalization stats do not match input_dim");
  }
}

std::size_t ModelWeights::parameter_count() const
{
  std::size_t n = 0;
  for (const auto & l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

std::vector<double> forward(const ModelWeights & weights, std::span<const double> x)
{
  if (x.size() != weights.spec.input_dim || weights.layers.empty()) {
    throw Error(ErrorKind::Model, "forward: input does not match input_dim");
  }
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> z;
  for (std::size_t l = 0; l < weights.layers.size(); ++l) {
    const auto & layer = weights.layers[l];
    if (layer.weights.cols() != a.size()) throw Error(ErrorKind::Model, "forward: shape mismatch");
    z.assign(layer.weights.rows(), 0.0);
    affine(layer, a, z);
    if (l + 1 < weights.layers.size()) {
      for (auto & v : z) v = std::max(v, 0.0);
    }
    std::swap(a, z);
  }
  softmax_in_place(a);
  return a;
}

int argmax_severe(std::span<const double> p)
{
  int best = 0;
  for (std::size_t k = 1; k < p.size(); ++k) {
    if (p[k] >= p[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  }
  return best;
}

int predict(const ModelWeights & weights, std::span<const double> raw_features)
{
  return argmax_severe(forward(weights, apply_normalizer(weights.norm_stats, raw_features)));
}

Predictor::Predictor(const ModelWeights & weights)
: weights_(weights), a_(max_width(weights.spec)), b_(max_width(weights.spec))
{
  weights_.validate();
}

std::span<const double> Predictor::probabilities(std::span<const double> raw)
{
  const auto & spec = weights_.spec;
  if (raw.size() != spec.input_dim) {
    throw Error(ErrorKind::Model, "predictor: input does not match input_dim");
  }
  std::span<double> in(a_.data(), spec.input_dim);
  apply_normalizer(weights_.norm_stats, raw, in);
  double * cur = a_.data();
  double * nxt = b_.data();
  std::size_t width = spec.input_dim;
  for (std::size_t l = 0; l < weights_.layers.size(); ++l) {
    const auto & layer = weights_.layers[l];
    const std::size_t out_w = layer.weights.rows();
    affine(layer, {cur, width}, {nxt, out_w});
    if (l + 1 < weights_.layers.size()) {
      for (std::size_t k = 0; k < out_w; ++k) nxt[k] = std::max(nxt[k], 0.0);
    }
    std::swap(cur, nxt);
    width = out_w;
  }
  std::span<double> out(cur, width);
  softmax_in_place(out);
  return out;
}

int Predictor::predict(std::span<const double> raw) { return argmax_severe(probabilities(raw)); }

LossAndGrad loss_and_grad(
  const ModelWeights & weights, const Matrix & x, std::span<const int> labels,
  std::span<const double> class_weights, double l2)
{
  const auto & spec = weights.spec;
  if (labels.empty() || x.rows() != labels.size()) {
    throw Error(ErrorKind::Data, "loss_and_grad: batch must be non-empty and consistent");
  }
  if (x.cols() != spec.input_dim) throw Error(ErrorKind::Model, "loss_and_grad: input width");
  if (!class_weights.empty() && class_weights.size() != spec.output_dim) {
    throw Error(ErrorKind::Data, "loss_and_grad: class weight count");
  }
  check_labels(labels, spec.output_dim);

  const std::size_t n_layers = weights.layers.size();
  LossAndGrad out;
  out.grad = zeros_like(weights.layers);

  double weight_sum = 0.0;
  for (const int y : labels) weight_sum += class_weights.empty() ? 1.0 : class_weights[y];
  if (!(weight_sum > 0.0)) throw Error(ErrorKind::Data, "loss_and_grad: zero total weight");

  // acts[0] is the input, acts[l] the post-activation output of layer l.
  std::vector<std::vector<double>> acts(n_layers + 1);
  acts[0].resize(spec.input_dim);
  for (std::size_t l = 0; l < n_layers; ++l) acts[l + 1].resize(weights.layers[l].weights.rows());
  std::vector<double> delta;
  std::vector<double> prev_delta;

  double loss = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    const double w_i = (class_weights.empty() ? 1.0 : class_weights[y]) / weight_sum;
    const auto xi = x.row(i);
    std::copy(xi.begin(), xi.end(), acts[0].begin());
    for (std::size_t l = 0; l < n_layers; ++l) {
      affine(weights.layers[l], acts[l], acts[l + 1]);
      if (l + 1 < n_layers) {
        for (auto & v : acts[l + 1]) v = std::max(v, 0.0);
      }
    }
    auto & logits = acts[n_layers];
    const double peak = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (const double z : logits) sum += std::exp(z - peak);
    const double log_norm = peak + std::log(sum);
    loss += w_i * (log_norm - logits[static_cast<std::size_t>(y)]);

    delta.resize(logits.size());
    for (std::size_t k = 0; k < logits.size(); ++k) {
      const double p = std::exp(logits[k] - log_norm);
      delta[k] = w_i * (p - (static_cast<int>(k) == y ? 1.0 : 0.0));
    }

    for (std::size_t l = n_layers; l-- > 0;) {
      const auto & layer = weights.layers[l];
      auto & g = out.grad[l];
      const auto & input = acts[l];
      const std::size_t rows = layer.weights.rows();
      const std::size_t cols = layer.weights.cols();
      for (std::size_t r = 0; r < rows; ++r) {
        g.bias[r] += delta[r];
        auto grow = g.weights.row(r);
        for (std::size_t c = 0; c < cols; ++c) grow[c] += delta[r] * input[c];
      }
      if (l == 0) break;
      prev_delta.assign(cols, 0.0);
      for (std::size_t r = 0; r < rows; ++r) {
        const auto wrow = layer.weights.row(r);
        for (std::size_t c = 0; c < cols; ++c) prev_delta[c] += wrow[c] * delta[r];
      }
      // acts[l] is post-ReLU: positive exactly where the pre-activation was.
      for (std::size_t c = 0; c < cols; ++c) {
        if (!(input[c] > 0.0)) prev_delta[c] = 0.0;
      }
      std::swap(delta, prev_delta);
    }
  }

  if (l2 > 0.0) {
    for (std::size_t l = 0; l < n_layers; ++l) {
      const auto & wdata = weights.layers[l].weights.data();
      auto & gdata = out.grad[l].weights.data();
      for (std::size_t k = 0; k < wdata.size(); ++k) {
        loss += 0.5 * l2 * wdata[k] * wdata[k];
        gdata[k] += l2 * wdata[k];
      }
    }
  }
  out.loss = loss;
  return out;
}

std::vector<double> inverse_frequency_weights(std::span<const int> labels, std::size_t classes)
{
  check_labels(labels, classes);
  std::vector<double> counts(classes, 0.0);
  for (const int y : labels) counts[static_cast<std::size_t>(y)] += 1.0;
  std::vector<double> weights(classes, 0.0);
  const double n = static_cast<double>(labels.size());
  for (std::size_t k = 0; k < classes; ++k) {
    if (counts[k] > 0.0) weights[k] = n / (static_cast<double>(classes) * counts[k]);
  }
  return weights;
}

void TrainConfig::validate() const
{
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate", "must be > 0");
  }
  if (epochs < 1) throw ConfigError("epochs", "must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size", "must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("beta1", "must be in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("beta2", "must be in [0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon", "must be > 0");
  if (!(l2 >= 0.0)) throw ConfigError("l2", "must be >= 0");
}

TrainResult train(
  const NetworkSpec & spec, const TrainConfig & config, const LabeledSet & train_set,
  const LabeledSet & val_set)
{
  spec.validate();
  config.validate();
  if (train_set.size() == 0 || train_set.x.rows() != train_set.size()) {
    throw Error(ErrorKind::Data, "train: empty or inconsistent training set");
  }
  if (val_set.x.rows() != val_set.size()) {
    throw Error(ErrorKind::Data, "train: inconsistent validation set");
  }
  if (train_set.x.cols() != spec.input_dim) {
    throw Error(ErrorKind::Data, "train: feature width does not match input_dim");
  }
  check_labels(train_set.y, spec.output_dim);
  check_labels(val_set.y, spec.output_dim);

  TrainResult result;
  ModelWeights w = ModelWeights::random(spec, config.seed);
  w.norm_stats = fit_normalizer(train_set.x);
  const Matrix train_x = apply_normalizer(w.norm_stats, train_set.x);
  const Matrix val_x =
    val_set.size() > 0 ? apply_normalizer(w.norm_stats, val_set.x) : Matrix{};

  const std::vector<double> class_weights =
    config.class_weighting ? inverse_frequency_weights(train_set.y, spec.output_dim)
                           : std::vector<double>{};

  std::mt19937_64 shuffle_rng(config.shuffle_seed.value_or(config.seed ^ 0x9e3779b97f4a7c15ULL));
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  AdamState adam{zeros_like(w.layers), zeros_like(w.layers), 0};

  auto record_epoch = [&](std::size_t epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    const auto tr = score(w, train_x, train_set.y, class_weights, config.l2);
    rec.train_loss = tr.loss;
    rec.train_accuracy = tr.accuracy;
    if (val_set.size() > 0) {
      const auto va = score(w, val_x, val_set.y, class_weights, config.l2);
      rec.val_loss = va.loss;
      rec.val_accuracy = va.accuracy;
    }
    result.history.push_back(rec);
    const double key = val_set.size() > 0 ? rec.val_loss : rec.train_loss;
    const auto & best = result.history[result.best_epoch];
    const double best_key = val_set.size() > 0 ? best.val_loss : best.train_loss;
    if (epoch == 0 || key < best_key) {
      result.best_epoch = epoch;
      result.weights = w;
    }
  };

  record_epoch(0);
  const std::size_t batch = config.batch_size;
  Matrix xb;
  std::vector<int> yb;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(start + batch, order.size());
      xb = Matrix(end - start, spec.input_dim);
      yb.resize(end - start);
      for (std::size_t k = start; k < end; ++k) {
        const auto src = train_x.row(order[k]);
        std::copy(src.begin(), src.end(), xb.row(k - start).begin());
        yb[k - start] = train_set.y[order[k]];
      }
      // A minibatch drawn only from zero-weight classes carries no signal.
      double batch_weight = 0.0;
      for (const int y : yb) batch_weight += class_weights.empty() ? 1.0 : class_weights[y];
      if (!(batch_weight > 0.0)) continue;
      const auto lg = loss_and_grad(w, xb, yb, class_weights, config.l2);
      adam_step(w, adam, lg, config);
    }
    record_epoch(epoch);
  }
  return result;
}

TrainResult train_baseline(
  const TrainConfig & config, const LabeledSet & train_set, const LabeledSet & val_set)
{
  NetworkSpec spec;
  spec.input_dim = train_set.x.cols() > 0 ? train_set.x.cols() : kFeatureCount;
  spec.hidden.clear();
  return train(spec, config, train_set, val_set);
}

}  // namespace ladri
