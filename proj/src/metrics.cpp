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

#include "gciforge/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace gciforge {

std::vector<CycleWindow> build_cycles(const GciMarks& refs) {
  if (refs.size() < 2) {
    throw std::invalid_argument("build_cycles: need at least 2 reference marks");
  }
  const auto& m = refs.positions;
  const int n = refs.size();
  std::vector<CycleWindow> windows(n);
  for (int i = 0; i < n; ++i) {
    const double left_half =
        i > 0 ? (m[i] - m[i - 1]) / 2.0 : (m[1] - m[0]) / 2.0;
    const double right_half =
        i < n - 1 ? (m[i + 1] - m[i]) / 2.0 : (m[n - 1] - m[n - 2]) / 2.0;
    windows[i] = CycleWindow{m[i], m[i] - left_half, m[i] + right_half};
  }
  return windows;
}

EvalReport compute_metrics(const GciMarks& refs, const GciMarks& dets,
                           int sample_rate_hz) {
  const std::vector<CycleWindow> windows = build_cycles(refs);
  const double ms_per_sample = 1000.0 / sample_rate_hz;

  EvalReport report;
  report.n_ref = refs.size();
  report.n_det = dets.size();

  std::size_t d = 0;
  for (const CycleWindow& w : windows) {
    while (d < dets.positions.size() && dets.positions[d] < w.lo) ++d;
    int inside = 0;
    double err_ms = 0.0;
    std::size_t cursor = d;
    while (cursor < dets.positions.size() && dets.positions[cursor] < w.hi) {
      err_ms = (dets.positions[cursor] - w.ref_index) * ms_per_sample;
      ++inside;
      ++cursor;
    }
    d = cursor;
    if (inside == 0) {
      ++report.missed;
    } else if (inside == 1) {
      ++report.identified;
      report.err_sum_ms += err_ms;
      report.err_sumsq_ms += err_ms * err_ms;
    } else {
      ++report.false_alarm;
    }
  }

  report.idr = 100.0 * report.identified / report.n_ref;
  report.mr = 100.0 * report.missed / report.n_ref;
  report.far = 100.0 * report.false_alarm / report.n_ref;
  if (report.identified > 0) {
    const double mean = report.err_sum_ms / report.identified;
    const double var = report.err_sumsq_ms / report.identified - mean * mean;
    report.ida_ms = std::sqrt(std::max(0.0, var));
  }
  return report;
}

EvalReport merge_reports(const std::vector<EvalReport>& reports) {
  EvalReport merged;
  for (const EvalReport& r : reports) {
    merged.n_ref += r.n_ref;
    merged.n_det += r.n_det;
    merged.identified += r.identified;
    merged.missed += r.missed;
    merged.false_alarm += r.false_alarm;
    merged.err_sum_ms += r.err_sum_ms;
    merged.err_sumsq_ms += r.err_sumsq_ms;
  }
  if (merged.n_ref == 0) return merged;
  merged.idr = 100.0 * merged.identified / merged.n_ref;
  merged.mr = 100.0 * merged.missed / merged.n_ref;
  merged.far = 100.0 * merged.false_alarm / merged.n_ref;
  if (merged.identified > 0) {
    const double mean = merged.err_sum_ms / merged.identified;
    const double var = merged.err_sumsq_ms / merged.identified - mean * mean;
    merged.ida_ms = std::sqrt(std::max(0.0, var));
  }
  return merged;
}

FrameScores frame_f1(const Eigen::Ref<const Eigen::ArrayXi>& predicted,
                     const Eigen::Ref<const Eigen::ArrayXi>& truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("frame_f1: length mismatch");
  }
  int tp = 0, fp = 0, fn = 0;
  for (Eigen::Index i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] != 0, t = truth[i] != 0;
    tp += p && t;
    fp += p && !t;
    fn += !p && t;
  }
  FrameScores s;
  s.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  s.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
  s.f1 = s.precision + s.recall > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

namespace {

// Half-up at two decimals, then fixed formatting.
std::string two_dp(double v) {
  if (std::isnan(v)) return "n/a";
  const double rounded = std::floor(v * 100.0 + 0.5) / 100.0;
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << rounded;
  return out.str();
}

}  // namespace

std::string format_report(
    const std::vector<std::pair<std::string, EvalReport>>& rows) {
  if (rows.empty()) throw std::invalid_argument("format_report: no rows");

  std::size_t name_width = std::string("Method").size();
  for (const auto& [name, report] : rows) name_width = std::max(name_width, name.size());

  std::ostringstream out;
  out << "# cycles: half-distance windows; IDA: population std; "
         "out-of-window detections ignored\n";
  out << std::left << std::setw(static_cast<int>(name_width) + 2) << "Method"
      << std::setw(9) << "IDR" << std::setw(9) << "MR" << std::setw(9) << "FAR"
      << "IDA(msec)\n";
  for (const auto& [name, report] : rows) {
    out << std::left << std::setw(static_cast<int>(name_width) + 2) << name
        << std::setw(9) << two_dp(report.idr) << std::setw(9) << two_dp(report.mr)
        << std::setw(9) << two_dp(report.far) << two_dp(report.ida_ms) << "\n";
  }
  return out.str();
}

}  // namespace gciforge
