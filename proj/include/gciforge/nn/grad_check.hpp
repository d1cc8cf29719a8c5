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

#include <functional>
#include <string>
#include <vector>

#include "gciforge/nn/loss.hpp"
#include "gciforge/nn/network.hpp"

namespace gciforge::nn {

struct GradCheckBlock {
  std::string name;
  int checked = 0;
  double max_rel_err = 0.0;
  Eigen::Index worst_index = -1;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  bool pass = true;
};

struct GradCheckReport {
  bool pass = true;
  double max_rel_err = 0.0;
  std::vector<GradCheckBlock> blocks;

  std::string summary() const {
    std::string s;
    for (const auto& b : blocks) {
      s += b.name + ": max_rel_err=" + std::to_string(b.max_rel_err) +
           (b.pass ? " pass" : " FAIL") + " (checked " + std::to_string(b.checked) +
           ")\n";
    }
    return s;
  }
};

// Central finite differences against the analytic backward pass, batchnorm
// in train mode on the fixed batch. Relative error per parameter:
// |g_a - g_n| / max(|g_a|, |g_n|, 1e-12). max_per_block == 0 checks every
// parameter; a positive value checks an evenly strided subset (large
// blocks only), which keeps the full-architecture check inside its time
// budget. Perturbing a parameter of layer i only recomputes layers i..end
// from the recorded layer inputs.
inline GradCheckReport grad_check(
    Sequential& net, const Tensor& x,
    const std::function<LossValue(const Tensor&)>& loss_fn, double rel_tol = 1e-5,
    int max_per_block = 0) {
  std::vector<Tensor> taps;
  const Tensor out = net.forward(x, true, &taps);
  const LossValue loss = loss_fn(out);
  net.zero_grads();
  net.backward(loss.grad);

  auto blocks = net.layer_params();
  std::vector<Eigen::ArrayXd> analytic;
  analytic.reserve(blocks.size());
  for (auto& lp : blocks) analytic.push_back(*lp.block.grad);

  GradCheckReport report;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    auto& lp = blocks[bi];
    GradCheckBlock block_report;
    block_report.name = lp.block.name;

    const Eigen::Index n = lp.block.value->size();
    Eigen::Index stride = 1;
    if (max_per_block > 0 && n > max_per_block) {
      stride = (n + max_per_block - 1) / max_per_block;
    }

    for (Eigen::Index idx = 0; idx < n; idx += stride) {
      const double theta = (*lp.block.value)[idx];
      const double h = 1e-6 * std::max(1.0, std::abs(theta));

      (*lp.block.value)[idx] = theta + h;
      const double up = loss_fn(net.forward_from(lp.layer, taps[lp.layer], true)).value;
      (*lp.block.value)[idx] = theta - h;
      const double down = loss_fn(net.forward_from(lp.layer, taps[lp.layer], true)).value;
      (*lp.block.value)[idx] = theta;

      const double numeric = (up - down) / (2.0 * h);
      const double analytic_g = analytic[bi][idx];
      const double rel = std::abs(analytic_g - numeric) /
                         std::max({std::abs(analytic_g), std::abs(numeric), 1e-12});
      ++block_report.checked;
      if (rel > block_report.max_rel_err) {
        block_report.max_rel_err = rel;
        block_report.worst_index = idx;
        block_report.worst_analytic = analytic_g;
        block_report.worst_numeric = numeric;
      }
    }
    block_report.pass = block_report.max_rel_err <= rel_tol;
    report.pass = report.pass && block_report.pass;
    report.max_rel_err = std::max(report.max_rel_err, block_report.max_rel_err);
    report.blocks.push_back(std::move(block_report));
  }

  // Leave the net with the analytic gradients of the unperturbed point.
  net.forward(x, true);
  net.zero_grads();
  net.backward(loss_fn(out).grad);
  return report;
}

}  // namespace gciforge::nn
