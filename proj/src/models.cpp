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

#include "gciforge/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gciforge/nn/adam.hpp"
#include "gciforge/nn/loss.hpp"
#include "gciforge/rng.hpp"

namespace gciforge {

using nn::Tensor;

nn::Sequential make_single_column(std::uint64_t init_seed) {
  const Rng root(init_seed);
  nn::Sequential net;
  int in_channels = 1;
  std::size_t layer_index = 0;
  for (int channels : kColumnChannels) {
    auto conv = std::make_unique<nn::Conv1d>(in_channels, channels, kKernelSize);
    Rng stream = root.split(layer_index);
    conv->init_he(stream);
    net.add(std::move(conv));
    ++layer_index;
    net.add(std::make_unique<nn::BatchNorm1d>(channels));
    ++layer_index;
    net.add(std::make_unique<nn::Relu>());
    ++layer_index;
    in_channels = channels;
  }
  net.add(std::make_unique<nn::Flatten>());
  ++layer_index;
  auto head = std::make_unique<nn::Dense>(kFeatureDim, 1);
  Rng stream = root.split(layer_index);
  head->init_he(stream);
  net.add(std::move(head));
  net.add(std::make_unique<nn::Sigmoid>());
  return net;
}

nn::Sequential make_fusion_head(std::uint64_t init_seed) {
  const Rng root(init_seed);
  nn::Sequential net;
  auto dense = std::make_unique<nn::Dense>(2 * kFeatureDim, 1);
  Rng stream = root.split(0);
  dense->init_he(stream);
  net.add(std::move(dense));
  net.add(std::make_unique<nn::Sigmoid>());
  return net;
}

FrameSet select_representation(const FrameDataset& ds, Representation repr) {
  FrameSet set;
  set.x = ds.frames[static_cast<int>(repr)];
  set.y = ds.labels.cast<double>();
  return set;
}

namespace {

Tensor rows_to_tensor(const Eigen::MatrixXd& frames,
                      const std::vector<int>& order, int begin, int count) {
  Tensor t = Tensor::zeros({count, 1, kFrameLen});
  for (int i = 0; i < count; ++i) {
    const int row = order[static_cast<std::size_t>(begin) + i];
    for (int k = 0; k < kFrameLen; ++k) t.at(i, 0, k) = frames(row, k);
  }
  return t;
}

Tensor all_rows_to_tensor(const Eigen::MatrixXd& frames, int begin, int count) {
  Tensor t = Tensor::zeros({count, 1, kFrameLen});
  for (int i = 0; i < count; ++i) {
    for (int k = 0; k < kFrameLen; ++k) t.at(i, 0, k) = frames(begin + i, k);
  }
  return t;
}

Eigen::ArrayXd gather(const Eigen::ArrayXd& y, const std::vector<int>& order,
                      int begin, int count) {
  Eigen::ArrayXd out(count);
  for (int i = 0; i < count; ++i) out[i] = y[order[static_cast<std::size_t>(begin) + i]];
  return out;
}

// Best-so-far snapshotting plus patience-based stopping: the snapshot
// tracks any improvement, the stall counter only resets on improvements
// of at least min_delta.
struct EarlyStopper {
  double best_val = std::numeric_limits<double>::infinity();
  double stall_reference = std::numeric_limits<double>::infinity();
  int best_epoch = 0;
  int stalled = 0;

  // Returns {is_new_best, should_stop}.
  std::pair<bool, bool> observe(int epoch, double val, int patience, double min_delta) {
    const bool improved_exact = val < best_val;
    if (improved_exact) {
      best_val = val;
      best_epoch = epoch;
    }
    if (val <= stall_reference - min_delta) {
      stall_reference = val;
      stalled = 0;
    } else {
      ++stalled;
    }
    return {improved_exact, stalled >= patience};
  }
};

constexpr int kEvalChunk = 1024;

double dataset_bce(nn::Sequential& net, const FrameSet& set, double positive_weight) {
  const int n = static_cast<int>(set.x.rows());
  double total = 0.0;
  for (int begin = 0; begin < n; begin += kEvalChunk) {
    const int count = std::min(kEvalChunk, n - begin);
    Tensor batch = all_rows_to_tensor(set.x, begin, count);
    const Tensor p = net.forward(batch, /*training=*/false);
    const auto loss = nn::bce_loss(p, set.y.segment(begin, count), positive_weight);
    total += loss.value * count;
  }
  return total / n;
}

void require_both_classes(const Eigen::ArrayXd& y, const char* where) {
  const double positives = y.sum();
  if (positives == 0.0 || positives == static_cast<double>(y.size())) {
    throw std::invalid_argument(std::string(where) + ": training set needs both classes");
  }
}

std::vector<Checkpoint::Block> copy_param_blocks(nn::Sequential& net) {
  return snapshot_blocks(net, "net");
}

void load_param_blocks(nn::Sequential& net, const std::vector<Checkpoint::Block>& blocks) {
  std::size_t cursor = 0;
  restore_blocks(net, "net", blocks, cursor);
}

}  // namespace

TrainResult train_single_column(Representation repr, const FrameSet& train,
                                const FrameSet& val, const TrainOptions& options) {
  if (train.x.rows() == 0 || val.x.rows() == 0) {
    throw std::invalid_argument("train_single_column: empty train or validation set");
  }
  require_both_classes(train.y, "train_single_column");

  nn::Sequential net = make_single_column(options.seed);
  nn::Adam optimizer(
      [&net] {
        std::vector<nn::ParamBlockT<double>> blocks;
        for (auto& lp : net.layer_params()) blocks.push_back(lp.block);
        return blocks;
      }(),
      nn::AdamOptions{options.lr, 0.9, 0.999, 1e-8});

  const Rng root(options.seed);
  const int n = static_cast<int>(train.x.rows());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  EarlyStopper stopper;
  std::vector<Checkpoint::Block> best_blocks = copy_param_blocks(net);

  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    Rng shuffle_rng = root.split(1000 + static_cast<std::uint64_t>(epoch));
    shuffle_rng.shuffle(order);

    double train_total = 0.0;
    int train_count = 0;
    for (int begin = 0; begin + 1 < n; begin += options.batch_size) {
      const int count = std::min(options.batch_size, n - begin);
      if (count < 2) break;  // batchnorm needs at least two rows
      Tensor batch = rows_to_tensor(train.x, order, begin, count);
      const Eigen::ArrayXd labels = gather(train.y, order, begin, count);

      const Tensor p = net.forward(batch, /*training=*/true);
      const auto loss = nn::bce_loss(p, labels, options.positive_weight);
      net.zero_grads();
      net.backward(loss.grad);
      optimizer.step();

      train_total += loss.value * count;
      train_count += count;
    }

    const double val_bce = dataset_bce(net, val, options.positive_weight);
    result.log.push_back({epoch, train_total / std::max(1, train_count), val_bce});

    const auto [is_best, should_stop] =
        stopper.observe(epoch, val_bce, options.patience, options.min_delta);
    if (is_best) best_blocks = copy_param_blocks(net);
    if (should_stop) break;
  }

  load_param_blocks(net, best_blocks);
  result.best_epoch = stopper.best_epoch;
  result.best_val_bce = stopper.best_val;

  Checkpoint ckpt;
  ckpt.arch = "single_column";
  ckpt.representation = to_string(repr);
  ckpt.seed = options.seed;
  ckpt.epochs_trained = static_cast<int>(result.log.size());
  ckpt.best_val_bce = stopper.best_val;
  ckpt.sections.emplace_back("net", net.descriptors());
  ckpt.blocks = snapshot_blocks(net, "net");
  result.checkpoint = std::move(ckpt);
  return result;
}

nn::Sequential column_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.arch != "single_column") {
    throw std::runtime_error("column_from_checkpoint: expected a single_column checkpoint");
  }
  nn::Sequential net = make_single_column(0);
  if (ckpt.sections.size() != 1 || ckpt.sections[0].second != net.descriptors()) {
    throw std::runtime_error("column_from_checkpoint: architecture descriptor mismatch");
  }
  std::size_t cursor = 0;
  restore_blocks(net, ckpt.sections[0].first, ckpt.blocks, cursor);
  if (cursor != ckpt.blocks.size()) {
    throw std::runtime_error("column_from_checkpoint: unused parameter blocks");
  }
  return net;
}

JointModel joint_from_checkpoints(const Checkpoint& model3,
                                  const Checkpoint& model4,
                                  std::uint64_t head_seed) {
  if (model3.representation != "PC_LPF_S") {
    throw std::runtime_error("joint model: column 1 checkpoint must be PC_LPF_S, got " +
                             model3.representation);
  }
  if (model4.representation != "PC_LPF_LPR") {
    throw std::runtime_error("joint model: column 2 checkpoint must be PC_LPF_LPR, got " +
                             model4.representation);
  }
  JointModel joint;
  joint.column_pc_s = column_from_checkpoint(model3);
  joint.column_pc_lpr = column_from_checkpoint(model4);
  joint.head = make_fusion_head(head_seed);
  return joint;
}

Checkpoint snapshot_joint(JointModel& joint, std::uint64_t seed,
                          int epochs_trained, double best_val_bce) {
  Checkpoint ckpt;
  ckpt.arch = "joint";
  ckpt.representation = "PC_LPF_S+PC_LPF_LPR";
  ckpt.seed = seed;
  ckpt.epochs_trained = epochs_trained;
  ckpt.best_val_bce = best_val_bce;
  ckpt.sections.emplace_back("col3", joint.column_pc_s.descriptors());
  ckpt.sections.emplace_back("col4", joint.column_pc_lpr.descriptors());
  ckpt.sections.emplace_back("head", joint.head.descriptors());
  for (auto& b : snapshot_blocks(joint.column_pc_s, "col3")) ckpt.blocks.push_back(std::move(b));
  for (auto& b : snapshot_blocks(joint.column_pc_lpr, "col4")) ckpt.blocks.push_back(std::move(b));
  for (auto& b : snapshot_blocks(joint.head, "head")) ckpt.blocks.push_back(std::move(b));
  return ckpt;
}

JointModel joint_from_joint_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.arch != "joint") {
    throw std::runtime_error("joint_from_joint_checkpoint: expected a joint checkpoint");
  }
  JointModel joint;
  joint.column_pc_s = make_single_column(0);
  joint.column_pc_lpr = make_single_column(0);
  joint.head = make_fusion_head(0);
  if (ckpt.sections.size() != 3 ||
      ckpt.sections[0].second != joint.column_pc_s.descriptors() ||
      ckpt.sections[1].second != joint.column_pc_lpr.descriptors() ||
      ckpt.sections[2].second != joint.head.descriptors()) {
    throw std::runtime_error("joint_from_joint_checkpoint: architecture descriptor mismatch");
  }
  std::size_t cursor = 0;
  restore_blocks(joint.column_pc_s, "col3", ckpt.blocks, cursor);
  restore_blocks(joint.column_pc_lpr, "col4", ckpt.blocks, cursor);
  restore_blocks(joint.head, "head", ckpt.blocks, cursor);
  if (cursor != ckpt.blocks.size()) {
    throw std::runtime_error("joint_from_joint_checkpoint: unused parameter blocks");
  }
  return joint;
}

namespace {

Tensor joint_features_tensor(JointModel& joint, const Tensor& pc_s_batch,
                             const Tensor& pc_lpr_batch) {
  const Tensor f3 = joint.column_pc_s.forward_range(0, kFlattenEnd, pc_s_batch,
                                                    /*training=*/false);
  const Tensor f4 = joint.column_pc_lpr.forward_range(0, kFlattenEnd, pc_lpr_batch,
                                                      /*training=*/false);
  const int batch = f3.dim(0);
  Tensor features = Tensor::zeros({batch, 2 * kFeatureDim});
  for (int b = 0; b < batch; ++b) {
    for (int j = 0; j < kFeatureDim; ++j) {
      features.at(b, j) = f3.at(b, j);
      features.at(b, kFeatureDim + j) = f4.at(b, j);
    }
  }
  return features;
}

double joint_dataset_bce(JointModel& joint, const FrameSet& pc_s, const FrameSet& pc_lpr,
                         double positive_weight) {
  const int n = static_cast<int>(pc_s.x.rows());
  double total = 0.0;
  for (int begin = 0; begin < n; begin += kEvalChunk) {
    const int count = std::min(kEvalChunk, n - begin);
    const Tensor features = joint_features_tensor(
        joint, all_rows_to_tensor(pc_s.x, begin, count),
        all_rows_to_tensor(pc_lpr.x, begin, count));
    const Tensor p = joint.head.forward(features, /*training=*/false);
    total += nn::bce_loss(p, pc_s.y.segment(begin, count), positive_weight).value * count;
  }
  return total / n;
}

}  // namespace

TrainResult train_joint(const Checkpoint& model3, const Checkpoint& model4,
                        const FrameSet& train_pc_s, const FrameSet& train_pc_lpr,
                        const FrameSet& val_pc_s, const FrameSet& val_pc_lpr,
                        const TrainOptions& options) {
  if (train_pc_s.x.rows() != train_pc_lpr.x.rows() ||
      val_pc_s.x.rows() != val_pc_lpr.x.rows()) {
    throw std::invalid_argument("train_joint: representation frame counts differ");
  }
  require_both_classes(train_pc_s.y, "train_joint");

  JointModel joint = joint_from_checkpoints(model3, model4, options.seed);
  nn::Adam optimizer(
      [&joint] {
        std::vector<nn::ParamBlockT<double>> blocks;
        for (auto& lp : joint.head.layer_params()) blocks.push_back(lp.block);
        return blocks;
      }(),
      nn::AdamOptions{options.lr, 0.9, 0.999, 1e-8});

  const Rng root(options.seed);
  const int n = static_cast<int>(train_pc_s.x.rows());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  EarlyStopper stopper;
  std::vector<Checkpoint::Block> best_head = snapshot_blocks(joint.head, "head");

  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    Rng shuffle_rng = root.split(1000 + static_cast<std::uint64_t>(epoch));
    shuffle_rng.shuffle(order);

    double train_total = 0.0;
    int train_count = 0;
    for (int begin = 0; begin < n; begin += options.batch_size) {
      const int count = std::min(options.batch_size, n - begin);
      const Tensor features = joint_features_tensor(
          joint, rows_to_tensor(train_pc_s.x, order, begin, count),
          rows_to_tensor(train_pc_lpr.x, order, begin, count));
      const Eigen::ArrayXd labels = gather(train_pc_s.y, order, begin, count);

      const Tensor p = joint.head.forward(features, /*training=*/true);
      const auto loss = nn::bce_loss(p, labels, options.positive_weight);
      joint.head.zero_grads();
      joint.head.backward(loss.grad);
      optimizer.step();

      train_total += loss.value * count;
      train_count += count;
    }

    const double val_bce =
        joint_dataset_bce(joint, val_pc_s, val_pc_lpr, options.positive_weight);
    result.log.push_back({epoch, train_total / std::max(1, train_count), val_bce});

    const auto [is_best, should_stop] =
        stopper.observe(epoch, val_bce, options.patience, options.min_delta);
    if (is_best) best_head = snapshot_blocks(joint.head, "head");
    if (should_stop) break;
  }

  std::size_t cursor = 0;
  restore_blocks(joint.head, "head", best_head, cursor);
  result.best_epoch = stopper.best_epoch;
  result.best_val_bce = stopper.best_val;
  result.checkpoint = snapshot_joint(joint, options.seed,
                                     static_cast<int>(result.log.size()),
                                     stopper.best_val);
  return result;
}

double fuse_posteriors(double p_joint, double p_model1, FusionRule rule) {
  constexpr double kClip = 1e-7;
  const double pj = std::clamp(p_joint, kClip, 1.0 - kClip);
  const double p1 = std::clamp(p_model1, kClip, 1.0 - kClip);
  if (rule == FusionRule::Max) return std::max(pj, p1);
  const double joint_on = pj * p1;
  const double joint_off = (1.0 - pj) * (1.0 - p1);
  return joint_on / (joint_on + joint_off);
}

Eigen::ArrayXd predict_probs(nn::Sequential& net, const Eigen::MatrixXd& frames) {
  const int n = static_cast<int>(frames.rows());
  Eigen::ArrayXd p(n);
  for (int begin = 0; begin < n; begin += kEvalChunk) {
    const int count = std::min(kEvalChunk, n - begin);
    const Tensor out =
        net.forward(all_rows_to_tensor(frames, begin, count), /*training=*/false);
    for (int i = 0; i < count; ++i) p[begin + i] = out.data[i];
  }
  return p;
}

Eigen::MatrixXd column_features(nn::Sequential& column, const Eigen::MatrixXd& frames) {
  const int n = static_cast<int>(frames.rows());
  Eigen::MatrixXd features(n, kFeatureDim);
  for (int begin = 0; begin < n; begin += kEvalChunk) {
    const int count = std::min(kEvalChunk, n - begin);
    const Tensor f = column.forward_range(
        0, kFlattenEnd, all_rows_to_tensor(frames, begin, count), /*training=*/false);
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < kFeatureDim; ++j) features(begin + i, j) = f.at(i, j);
    }
  }
  return features;
}

Eigen::ArrayXd joint_probs(JointModel& joint, const Eigen::MatrixXd& frames_pc_s,
                           const Eigen::MatrixXd& frames_pc_lpr) {
  const int n = static_cast<int>(frames_pc_s.rows());
  Eigen::ArrayXd p(n);
  for (int begin = 0; begin < n; begin += kEvalChunk) {
    const int count = std::min(kEvalChunk, n - begin);
    const Tensor features = joint_features_tensor(
        joint, all_rows_to_tensor(frames_pc_s, begin, count),
        all_rows_to_tensor(frames_pc_lpr, begin, count));
    const Tensor out = joint.head.forward(features, /*training=*/false);
    for (int i = 0; i < count; ++i) p[begin + i] = out.data[i];
  }
  return p;
}

FinalModel make_final_model(const Checkpoint& model1, const Checkpoint& joint_ckpt,
                            FusionRule rule) {
  if (model1.representation != "LPF_S") {
    throw std::runtime_error("final model: first checkpoint must be LPF_S, got " +
                             model1.representation);
  }
  FinalModel final_model;
  final_model.model1 = column_from_checkpoint(model1);
  final_model.joint = joint_from_joint_checkpoint(joint_ckpt);
  final_model.rule = rule;
  return final_model;
}

FramePredictions predict_frame_predictions(FinalModel& model,
                                           const RepresentationSet& reps) {
  if (reps.length() < kFrameLen) {
    throw std::invalid_argument("predict_frame_predictions: signal shorter than one frame");
  }
  const FrameDataset ds = frame_and_label(reps, GciMarks{{}, MarkSource::Detector});

  FramePredictions out;
  out.p_model1 =
      predict_probs(model.model1, ds.frames[static_cast<int>(Representation::LpfS)]);
  out.p_joint = joint_probs(model.joint,
                            ds.frames[static_cast<int>(Representation::PcLpfS)],
                            ds.frames[static_cast<int>(Representation::PcLpfLpr)]);
  out.p_fused = Eigen::ArrayXd(out.p_model1.size());
  for (Eigen::Index i = 0; i < out.p_fused.size(); ++i) {
    out.p_fused[i] = fuse_posteriors(out.p_joint[i], out.p_model1[i], model.rule);
  }
  return out;
}

Eigen::ArrayXd predict_frame_probs(FinalModel& model, const RepresentationSet& reps) {
  return predict_frame_predictions(model, reps).p_fused;
}

}  // namespace gciforge
