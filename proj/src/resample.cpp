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

#include "gciforge/resample.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gciforge {

namespace {

constexpr double kKaiserBeta = 8.6;
constexpr int kHalfTaps = 32;  // 64 taps per phase

// Modified Bessel I0 by power series; converges quickly for beta <= ~20.
double bessel_i0(double x) {
  const double half = x / 2.0;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= (half / k) * (half / k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double kaiser(double r) {  // r in [-1, 1]
  const double arg = 1.0 - r * r;
  if (arg <= 0.0) return 0.0;
  return bessel_i0(kKaiserBeta * std::sqrt(arg)) / bessel_i0(kKaiserBeta);
}

double sinc(double v) {
  if (std::abs(v) < 1e-12) return 1.0;
  const double p = M_PI * v;
  return std::sin(p) / p;
}

}  // namespace

Signal resample(const Eigen::Ref<const Signal>& x, int in_rate_hz,
                int out_rate_hz) {
  if (in_rate_hz <= 0 || out_rate_hz <= 0) {
    throw std::invalid_argument("resample: rates must be positive");
  }
  if (in_rate_hz == out_rate_hz) return x;
  if (x.size() == 0) throw std::invalid_argument("resample: empty signal");

  // Anti-alias cutoff as a fraction of the input Nyquist; when decimating
  // the kernel is stretched by 1/scale so its support still covers
  // kHalfTaps output-side zero crossings.
  const double scale =
      std::min(1.0, static_cast<double>(out_rate_hz) / in_rate_hz);
  const double support = kHalfTaps / scale;

  const Eigen::Index n_in = x.size();
  const Eigen::Index n_out = static_cast<Eigen::Index>(
      std::ceil(static_cast<double>(n_in) * out_rate_hz / in_rate_hz));

  const double step = static_cast<double>(in_rate_hz) / out_rate_hz;
  Signal y(n_out);
  for (Eigen::Index n = 0; n < n_out; ++n) {
    const double t = n * step;  // output instant in input samples
    const Eigen::Index k0 =
        std::max<Eigen::Index>(0, static_cast<Eigen::Index>(std::ceil(t - support)));
    const Eigen::Index k1 = std::min<Eigen::Index>(
        n_in - 1, static_cast<Eigen::Index>(std::floor(t + support)));
    double acc = 0.0;
    for (Eigen::Index k = k0; k <= k1; ++k) {
      const double v = (k - t) * scale;
      acc += x[k] * sinc(v) * kaiser(v / kHalfTaps);
    }
    y[n] = acc * scale;
  }
  return y;
}

}  // namespace gciforge
