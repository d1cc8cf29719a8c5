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

#include <Eigen/Dense>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace gciforge::nn {

// Dense row-major tensor of rank 1..3. Double precision by default; the
// float instantiation exists for the reduced-precision mode.
template <typename Scalar>
struct TensorT {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  std::vector<int> shape;
  Array data;

  TensorT() = default;
  TensorT(std::vector<int> s, Array d) : shape(std::move(s)), data(std::move(d)) {
    if (expected_size() != data.size()) {
      throw std::invalid_argument("Tensor: shape/data size mismatch");
    }
  }

  static TensorT zeros(std::vector<int> s) {
    TensorT t;
    t.shape = std::move(s);
    t.data = Array::Zero(t.expected_size());
    return t;
  }

  Eigen::Index expected_size() const {
    return std::accumulate(shape.begin(), shape.end(), Eigen::Index{1},
                           [](Eigen::Index acc, int d) { return acc * d; });
  }

  Eigen::Index size() const { return data.size(); }
  int rank() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<std::size_t>(i)]; }

  Scalar& at(int b, int c, int l) {
    return data[(static_cast<Eigen::Index>(b) * shape[1] + c) * shape[2] + l];
  }
  Scalar at(int b, int c, int l) const {
    return data[(static_cast<Eigen::Index>(b) * shape[1] + c) * shape[2] + l];
  }
  Scalar& at(int b, int d) {
    return data[static_cast<Eigen::Index>(b) * shape[1] + d];
  }
  Scalar at(int b, int d) const {
    return data[static_cast<Eigen::Index>(b) * shape[1] + d];
  }

  // Same storage, new shape (row-major flattening keeps element order).
  TensorT reshaped(std::vector<int> s) const {
    TensorT t;
    t.shape = std::move(s);
    t.data = data;
    if (t.expected_size() != data.size()) {
      throw std::invalid_argument("Tensor::reshaped: size mismatch");
    }
    return t;
  }

  bool all_finite() const { return data.isFinite().all(); }

  std::string shape_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(shape[i]);
    }
    return s + ")";
  }
};

using Tensor = TensorT<double>;
using TensorF = TensorT<float>;

}  // namespace gciforge::nn
