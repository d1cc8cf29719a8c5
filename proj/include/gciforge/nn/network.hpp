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

#include <cassert>
#include <memory>
#include <string>
#include <vector>

#include "gciforge/nn/layers.hpp"

namespace gciforge::nn {

// Layer-indexed parameter view, names prefixed "<layer>.<param>".
template <typename Scalar>
struct LayerParamT {
  std::size_t layer = 0;
  ParamBlockT<Scalar> block;
};

template <typename Scalar>
class SequentialT {
 public:
  using Tensor = TensorT<Scalar>;
  using Layer = LayerT<Scalar>;
  using LayerParam = LayerParamT<Scalar>;

  SequentialT() = default;
  SequentialT(SequentialT&&) noexcept = default;
  SequentialT& operator=(SequentialT&&) noexcept = default;

  void add(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }

  std::size_t n_layers() const { return layers_.size(); }
  Layer& layer(std::size_t i) { return *layers_[i]; }
  const Layer& layer(std::size_t i) const { return *layers_[i]; }

  // taps, when given, records the input of every layer (index i holds the
  // input to layer i); used by the finite-difference checker to recompute
  // suffixes of the network.
  Tensor forward(const Tensor& x, bool training,
                 std::vector<Tensor>* taps = nullptr) {
    return forward_from(0, x, training, taps);
  }

  Tensor forward_from(std::size_t first_layer, const Tensor& x, bool training,
                      std::vector<Tensor>* taps = nullptr) {
    return forward_range(first_layer, layers_.size(), x, training, taps);
  }

  Tensor forward_range(std::size_t first_layer, std::size_t end_layer,
                       const Tensor& x, bool training,
                       std::vector<Tensor>* taps = nullptr) {
    if (taps) taps->resize(layers_.size());
    Tensor cur = x;
    for (std::size_t i = first_layer; i < end_layer; ++i) {
      if (taps) (*taps)[i] = cur;
      cur = layers_[i]->forward(cur, training);
      assert(cur.all_finite() && "non-finite activation");
    }
    return cur;
  }

  Tensor backward(const Tensor& grad_out) {
    Tensor g = grad_out;
    for (std::size_t i = layers_.size(); i-- > 0;) {
      g = layers_[i]->backward(g);
      assert(g.all_finite() && "non-finite gradient");
    }
    return g;
  }

  void zero_grads() {
    for (auto& lp : layer_params()) lp.block.grad->setZero();
  }

  std::vector<LayerParam> layer_params() {
    std::vector<LayerParam> out;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      for (auto& block : layers_[i]->params()) {
        LayerParam lp{i, block};
        lp.block.name = std::to_string(i) + "." + block.name;
        out.push_back(std::move(lp));
      }
    }
    return out;
  }

  std::vector<LayerParam> layer_state() {
    std::vector<LayerParam> out;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      for (auto& block : layers_[i]->state()) {
        LayerParam lp{i, block};
        lp.block.name = std::to_string(i) + "." + block.name;
        out.push_back(std::move(lp));
      }
    }
    return out;
  }

  std::vector<std::string> descriptors() const {
    std::vector<std::string> out;
    out.reserve(layers_.size());
    for (const auto& l : layers_) out.push_back(l->descriptor());
    return out;
  }

 private:
  std::vector<std::unique_ptr<Layer>> layers_;
};

using Sequential = SequentialT<double>;

}  // namespace gciforge::nn
