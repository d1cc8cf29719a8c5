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

#include "gciforge/representations.hpp"
#include "gciforge/types.hpp"

namespace gciforge {

struct DecodeConfig {
  double threshold = 0.1;   // inclusive
  bool merge_adjacent = false;
  Representation peak_signal = Representation::LpfS;
};

// b[f] = 1 iff p[f] >= threshold.
Eigen::ArrayXi classify_frames(const Eigen::Ref<const Eigen::ArrayXd>& p,
                               double threshold);

// One mark per positive frame at the deepest negative sample of the frame
// (ties to the earliest index); with merge_adjacent, one mark per run of
// consecutive positive frames.
GciMarks decode_gci(const Eigen::Ref<const Eigen::ArrayXi>& b,
                    const Eigen::Ref<const Signal>& peak_signal,
                    const DecodeConfig& config = {});

}  // namespace gciforge
