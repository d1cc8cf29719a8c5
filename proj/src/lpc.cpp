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

#include "gciforge/lpc.hpp"

#include <cmath>
#include <vector>

namespace gciforge {

Eigen::ArrayXd autocorrelation(const Eigen::Ref<const Signal>& frame,
                               int max_lag) {
  const Eigen::Index n = frame.size();
  if (n <= max_lag) {
    throw std::invalid_argument("autocorrelation: frame shorter than max_lag + 1");
  }
  Eigen::ArrayXd r(max_lag + 1);
  for (int k = 0; k <= max_lag; ++k) {
    r[k] = frame.head(n - k).matrix().dot(frame.tail(n - k).matrix());
  }
  return r;
}

LpcCoeffs levinson(const Eigen::Ref<const Eigen::ArrayXd>& r, int order) {
  if (r.size() < order + 1) {
    throw std::invalid_argument("levinson: need order + 1 autocorrelation lags");
  }
  if (r[0] == 0.0) {
    throw LpcError(LpcError::Kind::DegenerateFrame, "levinson: silent frame (r[0] == 0)");
  }

  Eigen::VectorXd a = Eigen::VectorXd::Zero(order);
  double energy = r[0];
  for (int i = 1; i <= order; ++i) {
    double acc = r[i];
    for (int j = 1; j < i; ++j) acc -= a[j - 1] * r[i - j];
    const double reflection = acc / energy;
    if (!(std::abs(reflection) < 1.0)) {
      throw LpcError(LpcError::Kind::SingularFrame,
                     "levinson: reflection coefficient reached magnitude 1");
    }
    // a'_j = a_j - k * a_{i-j}, a'_i = k
    Eigen::VectorXd prev = a;
    a[i - 1] = reflection;
    for (int j = 1; j < i; ++j) a[j - 1] = prev[j - 1] - reflection * prev[i - j - 1];
    energy *= 1.0 - reflection * reflection;
  }
  return LpcCoeffs{std::move(a), energy};
}

Signal lp_residual(const Eigen::Ref<const Signal>& x, int order,
                   double frame_ms, double hop_ms, int sample_rate_hz) {
  const Eigen::Index n = x.size();
  const Eigen::Index frame_len =
      static_cast<Eigen::Index>(std::lround(frame_ms * sample_rate_hz / 1000.0));
  const Eigen::Index hop =
      static_cast<Eigen::Index>(std::lround(hop_ms * sample_rate_hz / 1000.0));
  if (n < frame_len) {
    throw std::invalid_argument("lp_residual: signal shorter than one analysis frame");
  }

  Eigen::ArrayXd window(frame_len);
  for (Eigen::Index i = 0; i < frame_len; ++i) {
    window[i] = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (frame_len - 1));
  }

  const Eigen::Index n_frames = 1 + (n - frame_len) / hop;
  std::vector<Eigen::VectorXd> coeffs(n_frames);
  Eigen::VectorXd previous = Eigen::VectorXd::Zero(order);
  for (Eigen::Index f = 0; f < n_frames; ++f) {
    const Eigen::ArrayXd windowed = x.segment(f * hop, frame_len) * window;
    try {
      coeffs[f] = levinson(autocorrelation(windowed, order), order).a;
    } catch (const LpcError&) {
      coeffs[f] = previous;  // keep the inverse filter continuous
    }
    previous = coeffs[f];
  }

  // Segment f covers the hop-length span centred on frame f; the first and
  // last segments absorb the edges. Input history runs across boundaries.
  Signal residual(n);
  for (Eigen::Index f = 0; f < n_frames; ++f) {
    const Eigen::Index seg_begin = f == 0 ? 0 : f * hop + frame_len / 2 - hop / 2;
    const Eigen::Index seg_end =
        f == n_frames - 1 ? n : (f + 1) * hop + frame_len / 2 - hop / 2;
    const Eigen::VectorXd& a = coeffs[f];
    for (Eigen::Index t = seg_begin; t < seg_end; ++t) {
      double prediction = 0.0;
      for (int k = 1; k <= order; ++k) {
        if (t - k >= 0) prediction += a[k - 1] * x[t - k];
      }
      residual[t] = x[t] - prediction;
    }
  }
  return residual;
}

}  // namespace gciforge
