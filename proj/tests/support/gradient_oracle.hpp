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

// Central finite-difference check of loss_and_grad.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ladri/matrix.hpp"
#include "ladri/network.hpp"

namespace ladri::test
{

struct GradientCheck
{
  double max_rel_error = 0.0;
  std::size_t checked = 0;
};

inline double rel_error(double analytic, double numeric)
{
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / scale;
}

/// Perturbs every weight and bias by +-h and compares the slope of the loss
/// with the analytic gradient.
inline GradientCheck check_gradient(
  const ModelWeights & weights, const Matrix & x, std::span<const int> labels,
  std::span<const double> class_weights, double l2, double h = 1e-5)
{
  const auto analytic = loss_and_grad(weights, x, labels, class_weights, l2);
  auto loss_at = [&](const ModelWeights & w) {
    return loss_and_grad(w, x, labels, class_weights, l2).loss;
  };

  GradientCheck result;
  ModelWeights probe = weights;
  auto visit = [&](std::vector<double> & params, const std::vector<double> & grads) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double saved = params[i];
      params[i] = saved + h;
      const double up = loss_at(probe);
      params[i] = saved - h;
      const double down = loss_at(probe);
      params[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      result.max_rel_error = std::max(result.max_rel_error, rel_error(grads[i], numeric));
      ++result.checked;
    }
  };
  for (std::size_t l = 0; l < probe.layers.size(); ++l) {
    visit(probe.layers[l].weights.data(), analytic.grad[l].weights.data());
    visit(probe.layers[l].bias, analytic.grad[l].bias);
  }
  return result;
}

}  // namespace ladri::test
