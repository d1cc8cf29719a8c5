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

#include "gciforge/decode.hpp"

#include <stdexcept>

namespace gciforge {

Eigen::ArrayXi classify_frames(const Eigen::Ref<const Eigen::ArrayXd>& p,
                               double threshold) {
  return (p >= threshold).cast<int>();
}

namespace {

constexpr int kFrameLen = 16;

int argmin_over(const Eigen::Ref<const Signal>& s, int begin, int end) {
  int best = begin;
  for (int i = begin + 1; i < end; ++i) {
    if (s[i] < s[best]) best = i;
  }
  return best;
}

}  // namespace

GciMarks decode_gci(const Eigen::Ref<const Eigen::ArrayXi>& b,
                    const Eigen::Ref<const Signal>& peak_signal,
                    const DecodeConfig& config) {
  if (peak_signal.size() < static_cast<Eigen::Index>(b.size()) * kFrameLen) {
    throw std::invalid_argument("decode_gci: peak signal shorter than framed span");
  }

  GciMarks marks;
  marks.source = MarkSource::Detector;
  const int n = static_cast<int>(b.size());
  int f = 0;
  while (f < n) {
    if (b[f] == 0) {
      ++f;
      continue;
    }
    int run_end = f + 1;
    if (config.merge_adjacent) {
      while (run_end < n && b[run_end] != 0) ++run_end;
    }
    if (config.merge_adjacent) {
      marks.positions.push_back(
          argmin_over(peak_signal, f * kFrameLen, run_end * kFrameLen));
    } else {
      for (int g = f; g < run_end; ++g) {
        marks.positions.push_back(
            argmin_over(peak_signal, g * kFrameLen, (g + 1) * kFrameLen));
      }
    }
    f = run_end;
  }
  return marks;
}

}  // namespace gciforge
