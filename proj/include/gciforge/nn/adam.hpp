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
#include <cstdint>
#include <vector>

#include "gciforge/nn/layers.hpp"

namespace gciforge::nn {

struct AdamOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Standard ADAM with bias correction over a fixed set of parameter blocks.
template <typename Scalar>
class AdamT {
 public:
  using Array = typename TensorT<Scalar>::Array;

  AdamT(std::vector<ParamBlockT<Scalar>> blocks, AdamOptions options = {})
      : blocks_(std::move(blocks)), options_(options) {
    for (const auto& b : blocks_) {
      m_.push_back(Array::Zero(b.value->size()));
      v_.push_back(Array::Zero(b.value->size()));
    }
  }

  void step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const Array& g = *blocks_[i].grad;
      m_[i] = static_cast<Scalar>(options_.beta1) * m_[i] +
              static_cast<Scalar>(1.0 - options_.beta1) * g;
      v_[i] = static_cast<Scalar>(options_.beta2) * v_[i] +
              static_cast<Scalar>(1.0 - options_.beta2) * g * g;
      const Array m_hat = m_[i] / static_cast<Scalar>(bc1);
      const Array v_hat = v_[i] / static_cast<Scalar>(bc2);
      *blocks_[i].value -= static_cast<Scalar>(options_.lr) * m_hat /
                           (v_hat.sqrt() + static_cast<Scalar>(options_.epsilon));
    }
  }

  std::int64_t t() const { return t_; }

 private:
  std::vector<ParamBlockT<Scalar>> blocks_;
  AdamOptions options_;
  std::vector<Array> m_, v_;
  std::int64_t t_ = 0;
};

using Adam = AdamT<double>;

}  // namespace gciforge::nn
