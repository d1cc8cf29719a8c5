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

#include <complex>
#include <vector>

#include "gciforge/types.hpp"

namespace gciforge {

// One second-order section, denominator normalized to (1, a1, a2).
struct Biquad {
  double b0, b1, b2;
  double a1, a2;
};

// Cascade of second-order sections.
struct IirFilter {
  std::vector<Biquad> sections;

  int order() const { return 2 * static_cast<int>(sections.size()); }
};

// Even-order low-pass Butterworth as a biquad cascade. Analog prototype
// poles are prewarped and mapped with the bilinear transform; each section
// is normalized to unit DC gain, so |H(0)| == 1 and |H(cutoff)| == 1/sqrt(2)
// exactly (up to rounding). Throws std::invalid_argument for odd order or
// a cutoff outside (0, Nyquist).
IirFilter design_butterworth_lowpass(int order, double cutoff_hz,
                                     int sample_rate_hz);

// Complex response at normalized frequency w in [0, pi].
std::complex<double> filter_response(const IirFilter& f, double w);

double filter_gain_db(const IirFilter& f, double freq_hz, int sample_rate_hz);

double dc_gain(const IirFilter& f);

bool is_stable(const IirFilter& f);

// Single-pass causal filtering through the cascade (direct form II
// transposed), zero initial state.
Signal sosfilt(const IirFilter& f, const Eigen::Ref<const Signal>& x);

// Forward-backward zero-phase filtering. The signal is extended at both
// ends by odd reflection of length 3 * order, each pass starts from the
// step steady state of the first extended sample, and the extension is
// stripped afterwards. Requires len(x) > 6 * order.
Signal filtfilt(const IirFilter& f, const Eigen::Ref<const Signal>& x);

}  // namespace gciforge
