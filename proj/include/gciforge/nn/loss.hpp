// Copyright 2026 The gciforge authors
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

#include <cmath>
#include <stdexcept>

#include "gciforge/nn/tensor.hpp"

namespace gciforge::nn {

template <typename Scalar>
struct LossValueT {
  double value = 0.0;
  TensorT<Scalar> grad;  // d loss / d predictions
};

using LossValue = LossValueT<double>;

// Binary cross-entropy with optional positive-class weight:
//   L = -mean(w y ln p + (1 - y) ln(1 - p)),
// predictions clipped to [1e-7, 1 - 1e-7] (gradient passes through the
// clip).
template <typename Scalar>
LossValueT<Scalar> bce_loss(const TensorT<Scalar>& p,
                            const Eigen::Ref<const Eigen::ArrayXd>& y,
                            double positive_weight = 1.0) {
  if (p.size() != y.size()) {
    throw std::invalid_argument("bce_loss: prediction/label size mismatch");
  }
  constexpr double kClip = 1e-7;
  const Eigen::Index n = p.size();

  LossValueT<Scalar> out;
  out.grad = TensorT<Scalar>::zeros(p.shape);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pi = std::clamp(static_cast<double>(p.data[i]), kClip, 1.0 - kClip);
    const double yi = y[i];
    total += -(positive_weight * yi * std::log(pi) + (1.0 - yi) * std::log(1.0 - pi));
    out.grad.data[i] = static_cast<Scalar>(
        -(positive_weight * yi / pi - (1.0 - yi) / (1.0 - pi)) / n);
  }
  out.value = total / n;
  return out;
}

// Half sum of squared errors (per batch mean); gradient-check helper for
// layers whose outputs are not probabilities.
template <typename Scalar>
LossValueT<Scalar> mse_loss(const TensorT<Scalar>& yhat,
                            const TensorT<Scalar>& target) {
  if (yhat.size() != target.size()) {
    throw std::invalid_argument("mse_loss: size mismatch");
  }
  const Eigen::Index n = yhat.size();
  LossValueT<Scalar> out;
  out.grad = TensorT<Scalar>::zeros(yhat.shape);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = static_cast<double>(yhat.data[i]) - static_cast<double>(target.data[i]);
    total += 0.5 * d * d;
    out.grad.data[i] = static_cast<Scalar>(d / n);
  }
  out.value = total / n;
  return out;
}

}  // namespace gciforge::nn
