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

#include "gciforge/zff.hpp"

#include <cmath>
#include <stdexcept>

#include "gciforge/iir.hpp"
#include "gciforge/lpc.hpp"

namespace gciforge {

Signal zfr_resonator(const Eigen::Ref<const Signal>& x) {
  Signal y(x.size());
  double y1 = 0.0, y2 = 0.0;
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    const double v = x[n] + 2.0 * y1 - y2;
    y2 = y1;
    y1 = v;
    y[n] = v;
  }
  return y;
}

Signal zfr_cascade(const Eigen::Ref<const Signal>& x) {
  Signal d(x.size());
  if (x.size() > 0) {
    d[0] = x[0];
    for (Eigen::Index n = 1; n < x.size(); ++n) d[n] = x[n] - x[n - 1];
  }
  return zfr_resonator(zfr_resonator(d));
}

Signal remove_trend(const Eigen::Ref<const Signal>& y, int half_width,
                    int passes) {
  if (half_width < 1) throw std::invalid_argument("remove_trend: half_width >= 1");
  if (passes < 1) throw std::invalid_argument("remove_trend: passes >= 1");

  const Eigen::Index n = y.size();
  Signal out = y;
  Eigen::ArrayXd prefix(n + 1);
  for (int pass = 0; pass < passes; ++pass) {
    prefix[0] = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + out[i];
    Signal next(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index lo = std::max<Eigen::Index>(0, i - half_width);
      const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + half_width);
      const double mean = (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1);
      next[i] = out[i] - mean;
    }
    out = std::move(next);
  }
  return out;
}

namespace {

// Mean pitch period by normalized autocorrelation of the low-passed
// signal over the configured f0 band. Returns 0 when unvoiced.
double estimate_pitch_period(const Signal& x, const ZffConfig& config) {
  const IirFilter lp = design_butterworth_lowpass(6, 1000.0, kPipelineRateHz);
  if (x.size() <= static_cast<Eigen::Index>(6 * lp.order())) return 0.0;
  const Signal basis = filtfilt(lp, x);

  const int min_lag =
      std::max(1, static_cast<int>(std::floor(kPipelineRateHz / config.f0_max_hz)));
  const int max_lag =
      static_cast<int>(std::ceil(kPipelineRateHz / config.f0_min_hz));
  if (basis.size() <= max_lag + 1) return 0.0;

  const Eigen::ArrayXd r = autocorrelation(basis, max_lag);
  if (r[0] <= 0.0) return 0.0;

  int best_lag = 0;
  double best = -1.0;
  for (int lag = min_lag; lag <= max_lag; ++lag) {
    const double v = r[lag] / r[0];
    if (v > best) {
      best = v;
      best_lag = lag;
    }
  }
  constexpr double kVoicingThreshold = 0.25;
  if (best < kVoicingThreshold) return 0.0;
  return best_lag;
}

}  // namespace

ZffResult zff_epochs(const Waveform& speech, const ZffConfig& config) {
  if (speech.sample_rate_hz != kPipelineRateHz) {
    throw std::invalid_argument("zff_epochs: expected 16 kHz speech");
  }

  ZffResult result;
  result.marks.source = MarkSource::Detector;

  const double period = estimate_pitch_period(speech.samples, config);
  result.mean_period_samples = period;
  if (period <= 0.0) {
    result.low_confidence = true;
    return result;
  }

  const int half_width = std::max(
      1, static_cast<int>(std::lround(config.trend_window_factor * period / 2.0)));
  const Signal filtered = remove_trend(zfr_cascade(speech.samples), half_width,
                                       config.trend_passes);

  // Negative-going zero crossings; edge spans are unreliable after trend
  // removal, so skip them. Enforce 2 ms minimum spacing.
  const Eigen::Index n = filtered.size();
  const Eigen::Index guard = 2 * half_width;
  constexpr int kMinSpacing = 32;
  int last = -kMinSpacing - 1;
  for (Eigen::Index i = std::max<Eigen::Index>(1, guard); i < n - guard; ++i) {
    if (filtered[i - 1] > 0.0 && filtered[i] <= 0.0) {
      if (static_cast<int>(i) - last >= kMinSpacing) {
        result.marks.positions.push_back(static_cast<int>(i));
        last = static_cast<int>(i);
      }
    }
  }
  return result;
}

}  // namespace gciforge
