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

#include "gciforge/signal_ops.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "gciforge/iir.hpp"
#include "gciforge/resample.hpp"

namespace gciforge {

Signal peak_normalize(const Eigen::Ref<const Signal>& x, double peak) {
  const double m = x.abs().maxCoeff();
  if (m == 0.0) return x;
  return x * (peak / m);
}

bool should_flip_polarity(const Eigen::Ref<const Signal>& lowpassed) {
  const Eigen::Index n = lowpassed.size();
  if (n < 3) return false;

  // One value per lobe: local extrema only, otherwise wide lobes outvote
  // narrow excitation spikes sample-wise.
  std::vector<double> maxima, minima;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double v = lowpassed[i];
    if (v > 0.0 && v >= lowpassed[i - 1] && v > lowpassed[i + 1]) maxima.push_back(v);
    if (v < 0.0 && v <= lowpassed[i - 1] && v < lowpassed[i + 1]) minima.push_back(-v);
  }
  if (maxima.empty() || minima.empty()) return minima.empty() && !maxima.empty();

  auto top_mean = [](std::vector<double>& values) {
    const int top = static_cast<int>(std::min<std::size_t>(10, values.size()));
    std::partial_sort(values.begin(), values.begin() + top, values.end(),
                      std::greater<double>());
    double sum = 0.0;
    for (int i = 0; i < top; ++i) sum += values[i];
    return sum / top;
  };
  return top_mean(minima) < top_mean(maxima);
}

Waveform prepare_speech(const Waveform& w, Polarity polarity) {
  if (w.role != ChannelRole::Speech) {
    throw std::invalid_argument("prepare_speech: expected a speech channel");
  }
  if (w.sample_rate_hz < 2000) {
    throw std::invalid_argument("prepare_speech: sample rate below 2000 Hz");
  }
  if (w.samples.size() == 0) {
    throw std::invalid_argument("prepare_speech: empty signal");
  }

  Signal s = resample(w.samples, w.sample_rate_hz, kPipelineRateHz);

  bool flip = false;
  switch (polarity) {
    case Polarity::Keep:
      break;
    case Polarity::Flip:
      flip = true;
      break;
    case Polarity::Auto: {
      const IirFilter lp = design_butterworth_lowpass(6, 1000.0, kPipelineRateHz);
      const Signal basis =
          s.size() > static_cast<Eigen::Index>(6 * lp.order()) ? filtfilt(lp, s) : s;
      flip = should_flip_polarity(basis);
      break;
    }
  }
  if (flip) s = -s;

  return Waveform{peak_normalize(s), kPipelineRateHz, ChannelRole::Speech};
}

}  // namespace gciforge
