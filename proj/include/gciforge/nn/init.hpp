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
#include "gciforge/rng.hpp"

namespace gciforge::nn {

// He-normal weights: i.i.d. normal with std sqrt(2 / fan_in), drawn from
// the seeded deterministic generator.
template <typename Scalar>
typename TensorT<Scalar>::Array he_normal(Eigen::Index count, int fan_in,
                                          Rng& rng) {
  if (fan_in <= 0) throw std::invalid_argument("he_normal: fan_in must be positive");
  const double stddev = std::sqrt(2.0 / fan_in);
  typename TensorT<Scalar>::Array out(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    out[i] = static_cast<Scalar>(stddev * rng.normal());
  }
  return out;
}

}  // namespace gciforge::nn
