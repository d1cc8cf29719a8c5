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

#include "gciforge/egg.hpp"

#include <cmath>

#include "gciforge/iir.hpp"

namespace gciforge {

Signal degg(const Eigen::Ref<const Signal>& egg) {
  Signal d = Signal::Zero(egg.size());
  if (egg.size() > 1) {
    d.tail(egg.size() - 1) = egg.tail(egg.size() - 1) - egg.head(egg.size() - 1);
  }
  return d;
}

GciMarks pick_closure_peaks(const Eigen::Ref<const Signal>& d,
                            int min_distance, double rel_threshold) {
  if (d.size() == 0) {
    throw std::invalid_argument("pick_closure_peaks: empty signal");
  }
  const double peak = d.abs().maxCoeff();
  GciMarks marks;
  marks.source = MarkSource::EggReference;
  if (peak == 0.0) return marks;

  const double threshold = -rel_threshold * peak;
  const Eigen::Index n = d.size();
  int last_accepted = -min_distance - 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d[i] > threshold) continue;
    // Deepest within +/- min_distance; ties resolve to the earliest index.
    const Eigen::Index lo = std::max<Eigen::Index>(0, i - min_distance);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + min_distance);
    bool is_window_min = true;
    for (Eigen::Index j = lo; j <= hi && is_window_min; ++j) {
      if (d[j] < d[i] || (d[j] == d[i] && j < i)) is_window_min = false;
    }
    if (!is_window_min) continue;
    if (static_cast<int>(i) - last_accepted < min_distance) continue;
    marks.positions.push_back(static_cast<int>(i));
    last_accepted = static_cast<int>(i);
  }
  return marks;
}

DelayEstimate estimate_delay(const Eigen::Ref<const Signal>& speech_repr,
                             const GciMarks& marks, double max_delay_ms,
                             int sample_rate_hz) {
  if (marks.size() < 10) {
    throw UnreliableDelayError("estimate_delay: need at least 10 marks");
  }
  const int max_delay =
      static_cast<int>(std::lround(max_delay_ms * sample_rate_hz / 1000.0));
  const Eigen::Index n = speech_repr.size();

  DelayEstimate best;
  double objective_sum = 0.0;
  double best_objective = -std::numeric_limits<double>::infinity();
  for (int delay = 0; delay <= max_delay; ++delay) {
    double objective = 0.0;
    for (int m : marks.positions) {
      const Eigen::Index at = m + delay;
      if (at < n) objective -= speech_repr[at];
    }
    objective_sum += objective;
    if (objective > best_objective) {
      best_objective = objective;
      best.delay_samples = delay;
    }
  }
  best.peak_objective = best_objective;
  best.mean_objective = objective_sum / (max_delay + 1);
  best.low_confidence = best.peak_objective < 1.5 * best.mean_objective;
  return best;
}

GciMarks annotate(const Waveform& speech, const Waveform& egg) {
  if (speech.samples.size() != egg.samples.size() ||
      speech.sample_rate_hz != egg.sample_rate_hz) {
    throw std::invalid_argument("annotate: speech and EGG must share length and rate");
  }
  if (speech.sample_rate_hz != kPipelineRateHz) {
    throw std::invalid_argument("annotate: expected 16 kHz input");
  }

  const GciMarks picked = pick_closure_peaks(degg(egg.samples));
  if (picked.empty()) return picked;

  int delay = 0;
  const IirFilter lp = design_butterworth_lowpass(6, 1000.0, kPipelineRateHz);
  if (speech.samples.size() > static_cast<Eigen::Index>(6 * lp.order())) {
    const Signal lpf_speech = filtfilt(lp, speech.samples);
    try {
      delay = estimate_delay(lpf_speech, picked).delay_samples;
    } catch (const UnreliableDelayError&) {
      delay = 0;
    }
  }

  GciMarks out;
  out.source = MarkSource::EggReference;
  const int n = static_cast<int>(speech.samples.size());
  for (int m : picked.positions) {
    const int shifted = m + delay;
    if (shifted >= 0 && shifted < n) out.positions.push_back(shifted);
  }
  return out;
}

}  // namespace gciforge
