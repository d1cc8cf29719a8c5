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

#include <stdexcept>

#include "gciforge/types.hpp"

namespace gciforge {

// Prediction coefficients a_1..a_p of x^[n] = sum_k a_k x[n-k], plus the
// residual energy E_p of the recursion.
struct LpcCoeffs {
  Eigen::VectorXd a;
  double gain = 0.0;
};

class LpcError : public std::runtime_error {
 public:
  enum class Kind { DegenerateFrame, SingularFrame };
  LpcError(Kind kind, const char* what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Biased autocorrelation r[k] = sum_n frame[n] * frame[n+k], k = 0..max_lag.
Eigen::ArrayXd autocorrelation(const Eigen::Ref<const Signal>& frame, int max_lag);

// Levinson-Durbin solve of the Toeplitz normal equations. Throws LpcError
// for a silent frame (r[0] == 0) or a reflection coefficient reaching
// magnitude 1.
LpcCoeffs levinson(const Eigen::Ref<const Eigen::ArrayXd>& r, int order);

// Full-signal LP residual: frame-wise analysis (Hamming window) every
// hop_ms, inverse FIR filtering of the raw signal with per-segment
// coefficient switching and continuous input history. Degenerate frames
// reuse the previous frame's coefficients (zeros before the first usable
// frame). Output length equals input length.
Signal lp_residual(const Eigen::Ref<const Signal>& x, int order = 12,
                   double frame_ms = 25.0, double hop_ms = 10.0,
                   int sample_rate_hz = kPipelineRateHz);

}  // namespace gciforge
