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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gciforge/checkpoint.hpp"
#include "gciforge/dataset.hpp"
#include "gciforge/nn/network.hpp"
#include "gciforge/representations.hpp"

namespace gciforge {

// Single-column architecture: five conv+batchnorm+relu blocks (no
// pooling), flatten, dense sigmoid head over 16-sample frames.
inline constexpr std::array<int, 5> kColumnChannels{32, 32, 64, 64, 128};
inline constexpr int kKernelSize = 3;
inline constexpr int kFrameLen = 16;
inline constexpr int kFeatureDim = 128 * kFrameLen;  // flatten width
inline constexpr std::size_t kFlattenEnd = 16;       // layers [0,16) end at flatten

// He-initialized column; per-layer weight streams are split from the seed.
nn::Sequential make_single_column(std::uint64_t init_seed);

// Dense(2 * kFeatureDim -> 1) + sigmoid fusion head.
nn::Sequential make_fusion_head(std::uint64_t init_seed);

// Frames of one representation: one row per 16-sample frame.
struct FrameSet {
  Eigen::MatrixXd x;   // N x 16
  Eigen::ArrayXd y;    // N binary labels
};

FrameSet select_representation(const FrameDataset& ds, Representation repr);

struct TrainOptions {
  int batch_size = 256;
  int epochs = 30;
  double lr = 1e-4;
  int patience = 3;        // epochs without min_delta improvement
  double min_delta = 1e-4;
  double positive_weight = 1.0;
  std::uint64_t seed = 7;
};

struct EpochLog {
  int epoch;
  double train_bce;
  double val_bce;
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<EpochLog> log;
  int best_epoch = 0;
  double best_val_bce = 0.0;
};

// Minibatch ADAM training with per-epoch seeded shuffling, validation BCE
// in eval mode after every epoch, early stopping on stalled validation
// loss, best-validation snapshot returned. Both classes must be present
// in the training labels.
TrainResult train_single_column(Representation repr, const FrameSet& train,
                                const FrameSet& val, const TrainOptions& options);

// Joint acoustic-residual model: both columns frozen in eval mode
// (running statistics included), only the fusion head trains.
struct JointModel {
  nn::Sequential column_pc_s;    // consumes PC_LPF_S frames
  nn::Sequential column_pc_lpr;  // consumes PC_LPF_LPR frames
  nn::Sequential head;
};

JointModel joint_from_checkpoints(const Checkpoint& model3,
                                  const Checkpoint& model4,
                                  std::uint64_t head_seed);

nn::Sequential column_from_checkpoint(const Checkpoint& ckpt);

Checkpoint snapshot_joint(JointModel& joint, std::uint64_t seed,
                          int epochs_trained, double best_val_bce);
JointModel joint_from_joint_checkpoint(const Checkpoint& ckpt);

TrainResult train_joint(const Checkpoint& model3, const Checkpoint& model4,
                        const FrameSet& train_pc_s, const FrameSet& train_pc_lpr,
                        const FrameSet& val_pc_s, const FrameSet& val_pc_lpr,
                        const TrainOptions& options);

enum class FusionRule { LikelihoodProduct, Max };

// Independent-classifier likelihood combination under a uniform prior
// (inputs clipped to [1e-7, 1-1e-7]); the max rule is the configurable
// alternative.
double fuse_posteriors(double p_joint, double p_model1,
                       FusionRule rule = FusionRule::LikelihoodProduct);

// Batched eval-mode helpers.
Eigen::ArrayXd predict_probs(nn::Sequential& net, const Eigen::MatrixXd& frames);
Eigen::MatrixXd column_features(nn::Sequential& column, const Eigen::MatrixXd& frames);
Eigen::ArrayXd joint_probs(JointModel& joint, const Eigen::MatrixXd& frames_pc_s,
                           const Eigen::MatrixXd& frames_pc_lpr);

// The deployed detector: Model 1 posterior fused with the joint model's.
struct FinalModel {
  nn::Sequential model1;
  JointModel joint;
  FusionRule rule = FusionRule::LikelihoodProduct;
};

FinalModel make_final_model(const Checkpoint& model1, const Checkpoint& joint_ckpt,
                            FusionRule rule = FusionRule::LikelihoodProduct);

struct FramePredictions {
  Eigen::ArrayXd p_model1, p_joint, p_fused;
};

FramePredictions predict_frame_predictions(FinalModel& model,
                                           const RepresentationSet& reps);
Eigen::ArrayXd predict_frame_probs(FinalModel& model, const RepresentationSet& reps);

}  // namespace gciforge
