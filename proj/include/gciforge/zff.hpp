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

#include "gciforge/types.hpp"

namespace gciforge {

struct ZffConfig {
  double trend_window_factor = 1.5;  // times the mean pitch period
  int trend_passes = 3;
  double f0_min_hz = 60.0;
  double f0_max_hz = 500.0;
};

// One zero-frequency resonator: y[n] = x[n] + 2 y[n-1] - y[n-2].
Signal zfr_resonator(const Eigen::Ref<const Signal>& x);

// Differenced input through two cascaded zero-frequency resonators. The
// double pole at z = 1 grows polynomially; remove_trend restores
// boundedness.
Signal zfr_cascade(const Eigen::Ref<const Signal>& x);

// Subtracts the local mean over [n - half_width, n + half_width] (window
// truncated at the edges), repeated `passes` times.
Signal remove_trend(const Eigen::Ref<const Signal>& y, int half_width,
                    int passes);

struct ZffResult {
  GciMarks marks;
  bool low_confidence = false;
  double mean_period_samples = 0.0;
};

// Zero-frequency-filtering epoch detector: pitch-adaptive trend window,
// epochs at the filtered signal's zero crossings in the excitation
// direction (negative-going under the negative-polarity convention).
// Unvoiced input yields empty marks with the low-confidence flag set.
ZffResult zff_epochs(const Waveform& speech, const ZffConfig& config = {});

}  // namespace gciforge
