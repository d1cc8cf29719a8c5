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

enum class Polarity { Keep, Flip, Auto };

// Keeps the non-positive part of the signal: y[n] = min(x[n], 0).
inline Signal positive_clip(const Eigen::Ref<const Signal>& x) {
  return x.min(0.0);
}

// Scales so max |sample| == peak. Zero signals pass through unchanged.
Signal peak_normalize(const Eigen::Ref<const Signal>& x, double peak = 0.99);

// Polarity heuristic on a low-passed signal: flip when the ten deepest
// minima are on average shallower than the ten highest maxima, i.e. the
// dominant excursions are positive.
bool should_flip_polarity(const Eigen::Ref<const Signal>& lowpassed);

// Conditioning applied to every speech channel before analysis: resample
// to 16 kHz, settle polarity so excitation peaks are negative, normalize
// the peak to 0.99. Rejects sample rates below 2000 Hz.
Waveform prepare_speech(const Waveform& w, Polarity polarity);

}  // namespace gciforge
