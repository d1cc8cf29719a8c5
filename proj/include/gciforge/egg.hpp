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

// First difference d[n] = egg[n] - egg[n-1], d[0] = 0. Closures show up as
// negative peaks when the EGG falls sharply at vocal-fold contact.
Signal degg(const Eigen::Ref<const Signal>& egg);

// Local minima of the differenced EGG below -rel_threshold * max|d|,
// deepest within +/- min_distance, accepted greedily left to right with
// the minimum spacing enforced.
GciMarks pick_closure_peaks(const Eigen::Ref<const Signal>& d,
                            int min_distance = 32, double rel_threshold = 0.2);

class UnreliableDelayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DelayEstimate {
  int delay_samples = 0;
  bool low_confidence = false;
  double peak_objective = 0.0;
  double mean_objective = 0.0;
};

// Constant EGG-to-speech delay: the shift in [0, max_delay_ms] maximizing
// the summed negative speech excursion at the shifted marks; ties go to
// the smaller delay. Throws UnreliableDelayError with fewer than 10 marks.
DelayEstimate estimate_delay(const Eigen::Ref<const Signal>& speech_repr,
                             const GciMarks& marks, double max_delay_ms = 20.0,
                             int sample_rate_hz = kPipelineRateHz);

// Reference annotation from a simultaneous EGG channel: dEGG negative
// peaks, shifted by the per-recording delay estimated against the
// low-pass-filtered speech. Falls back to zero delay when the estimate is
// unreliable.
GciMarks annotate(const Waveform& speech, const Waveform& egg);

}  // namespace gciforge
