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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gciforge/types.hpp"

namespace gciforge {

// One larynx cycle attributed to a reference mark: the half-open interval
// [lo, hi) reaching halfway to each neighbour (mirrored at the ends).
struct CycleWindow {
  int ref_index;
  double lo, hi;
};

std::vector<CycleWindow> build_cycles(const GciMarks& refs);

// Cycle-level reliability/accuracy plus optional frame-level scores.
// Detections that land outside every reference window are ignored; IDA is
// the population standard deviation of the timing error over identified
// cycles (NaN when none).
struct EvalReport {
  double idr = 0.0, mr = 0.0, far = 0.0;  // percentages over n_ref
  double ida_ms = std::numeric_limits<double>::quiet_NaN();
  int n_ref = 0, n_det = 0;
  int identified = 0, missed = 0, false_alarm = 0;
  double err_sum_ms = 0.0, err_sumsq_ms = 0.0;  // over identified cycles
  std::optional<double> precision, recall, f1;
};

EvalReport compute_metrics(const GciMarks& refs, const GciMarks& dets,
                           int sample_rate_hz);

// Corpus aggregate: pooled cycle counts and pooled timing-error moments.
EvalReport merge_reports(const std::vector<EvalReport>& reports);

struct FrameScores {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

FrameScores frame_f1(const Eigen::Ref<const Eigen::ArrayXi>& predicted,
                     const Eigen::Ref<const Eigen::ArrayXi>& truth);

// Fixed-width table, two decimals, "n/a" for undefined IDA.
std::string format_report(
    const std::vector<std::pair<std::string, EvalReport>>& rows);

}  // namespace gciforge
