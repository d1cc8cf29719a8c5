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

#include <string>

#include "gciforge/types.hpp"

namespace gciforge {

// Canonical representation order used across datasets and checkpoints.
enum class Representation : int {
  LpfS = 0,      // low-pass filtered speech
  LpfLpr = 1,    // low-pass filtered LP residual
  PcLpfS = 2,    // positive-clipped LPF speech
  PcLpfLpr = 3,  // positive-clipped LPF residual
};

inline constexpr int kNumRepresentations = 4;

std::string to_string(Representation r);
Representation representation_from_string(const std::string& name);

// The four aligned input views of one prepared recording.
struct RepresentationSet {
  Signal lpf_s;
  Signal lpf_lpr;
  Signal pc_lpf_s;
  Signal pc_lpf_lpr;

  const Signal& by_index(int i) const;
  const Signal& get(Representation r) const { return by_index(static_cast<int>(r)); }
  Eigen::Index length() const { return lpf_s.size(); }
};

// Builds all four views from prepared speech (16 kHz, negative polarity):
// zero-phase order-6 Butterworth at 1 kHz over the speech and over its
// order-12 LP residual, positive clipping of each. The two filtered
// signals are peak-normalized to 0.99 before clipping so the clipped views
// stay exact element-wise clips of their parents.
RepresentationSet make_representations(const Waveform& speech);

}  // namespace gciforge
