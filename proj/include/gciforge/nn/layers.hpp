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

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "gciforge/nn/init.hpp"
#include "gciforge/nn/tensor.hpp"

namespace gciforge::nn {

// A named view of one trainable (or running-state) array inside a layer.
template <typename Scalar>
struct ParamBlockT {
  std::string name;
  typename TensorT<Scalar>::Array* value = nullptr;
  typename TensorT<Scalar>::Array* grad = nullptr;  // null for state blocks
  std::vector<int> shape;
};

// Gradients are hand-derived per layer; every layer caches exactly what
// its backward pass needs from the most recent forward.
template <typename Scalar>
class LayerT {
 public:
  using Tensor = TensorT<Scalar>;
  using Array = typename Tensor::Array;
  using ParamBlock = ParamBlockT<Scalar>;

  virtual ~LayerT() = default;
  virtual Tensor forward(const Tensor& x, bool training) = 0;
  virtual Tensor backward(const Tensor& grad_out) = 0;
  virtual std::vector<ParamBlock> params() { return {}; }
  virtual std::vector<ParamBlock> state() { return {}; }
  virtual std::string descriptor() const = 0;
};

// 1-D cross-correlation, stride 1, symmetric zero padding so the output
// length equals the input length. Weight layout: [out][in][tap].
template <typename Scalar>
class Conv1dT final : public LayerT<Scalar> {
 public:
  using Tensor = TensorT<Scalar>;
  using Array = typename Tensor::Array;
  using ParamBlock = ParamBlockT<Scalar>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using RowMatrixMap =
      Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

  Conv1dT(int in_channels, int out_channels, int kernel_size)
      : in_(in_channels), out_(out_channels), k_(kernel_size) {
    if (k_ % 2 == 0) {
      throw std::invalid_argument("Conv1d: kernel size must be odd for same padding");
    }
    weight_ = Array::Zero(static_cast<Eigen::Index>(out_) * in_ * k_);
    bias_ = Array::Zero(out_);
    weight_grad_ = weight_;
    bias_grad_ = bias_;
  }

  void init_he(Rng& rng) {
    weight_ = he_normal<Scalar>(weight_.size(), in_ * k_, rng);
    bias_.setZero();
  }

  Tensor forward(const Tensor& x, bool) override {
    if (x.rank() != 3 || x.dim(1) != in_) {
      throw std::invalid_argument("Conv1d: bad input shape " + x.shape_string());
    }
    input_ = x;
    const int batch = x.dim(0), length = x.dim(2);

    Matrix patches = im2col(x);
    RowMatrixMap w(weight_.data(), out_, in_ * k_);
    Matrix y = w * patches;  // out x (batch*length)

    Tensor out = Tensor::zeros({batch, out_, length});
    for (int b = 0; b < batch; ++b) {
      for (int o = 0; o < out_; ++o) {
        for (int t = 0; t < length; ++t) {
          out.at(b, o, t) = y(o, static_cast<Eigen::Index>(b) * length + t) + bias_[o];
        }
      }
    }
    return out;
  }

  Tensor backward(const Tensor& grad_out) override {
    const int batch = input_.dim(0), length = input_.dim(2);
    const int pad = (k_ - 1) / 2;

    Matrix g(out_, static_cast<Eigen::Index>(batch) * length);
    for (int b = 0; b < batch; ++b) {
      for (int o = 0; o < out_; ++o) {
        for (int t = 0; t < length; ++t) {
          g(o, static_cast<Eigen::Index>(b) * length + t) = grad_out.at(b, o, t);
        }
      }
    }

    Matrix patches = im2col(input_);
    RowMatrixMap w(weight_.data(), out_, in_ * k_);
    RowMatrixMap wg(weight_grad_.data(), out_, in_ * k_);
    wg.noalias() += g * patches.transpose();
    bias_grad_ += g.rowwise().sum().array();

    Matrix dpatches = w.transpose() * g;  // (in*k) x (batch*length)
    Tensor dx = Tensor::zeros(input_.shape);
    for (int b = 0; b < batch; ++b) {
      for (int c = 0; c < in_; ++c) {
        for (int j = 0; j < k_; ++j) {
          const Eigen::Index row = static_cast<Eigen::Index>(c) * k_ + j;
          for (int t = 0; t < length; ++t) {
            const int s = t + j - pad;
            if (s >= 0 && s < length) {
              dx.at(b, c, s) += dpatches(row, static_cast<Eigen::Index>(b) * length + t);
            }
          }
        }
      }
    }
    return dx;
  }

  std::vector<ParamBlock> params() override {
    return {{"weight", &weight_, &weight_grad_, {out_, in_, k_}},
            {"bias", &bias_, &bias_grad_, {out_}}};
  }

  std::string descriptor() const override {
    return "conv1d in=" + std::to_string(in_) + " out=" + std::to_string(out_) +
           " k=" + std::to_string(k_);
  }

 private:
  Matrix im2col(const Tensor& x) const {
    const int batch = x.dim(0), length = x.dim(2);
    const int pad = (k_ - 1) / 2;
    Matrix patches = Matrix::Zero(static_cast<Eigen::Index>(in_) * k_,
                                  static_cast<Eigen::Index>(batch) * length);
    for (int b = 0; b < batch; ++b) {
      for (int c = 0; c < in_; ++c) {
        for (int j = 0; j < k_; ++j) {
          const Eigen::Index row = static_cast<Eigen::Index>(c) * k_ + j;
          for (int t = 0; t < length; ++t) {
            const int s = t + j - pad;
            if (s >= 0 && s < length) {
              patches(row, static_cast<Eigen::Index>(b) * length + t) = x.at(b, c, s);
            }
          }
        }
      }
    }
    return patches;
  }

  int in_, out_, k_;
  Array weight_, bias_, weight_grad_, bias_grad_;
  Tensor input_;
};

// Per-channel normalization over batch x length. Train mode normalizes by
// batch statistics (biased variance) and updates running statistics with
// momentum 0.1 (unbiased variance, matching common deep-learning
// convention); eval mode uses the running statistics only.
template <typename Scalar>
class BatchNorm1dT final : public LayerT<Scalar> {
 public:
  using Tensor = TensorT<Scalar>;
  using Array = typename Tensor::Array;
  using ParamBlock = ParamBlockT<Scalar>;

  explicit BatchNorm1dT(int channels, double momentum = 0.1, double epsilon = 1e-5)
      : channels_(channels), momentum_(momentum), epsilon_(epsilon) {
    gamma_ = Array::Ones(channels_);
    beta_ = Array::Zero(channels_);
    gamma_grad_ = Array::Zero(channels_);
    beta_grad_ = Array::Zero(channels_);
    running_mean_ = Array::Zero(channels_);
    running_var_ = Array::Ones(channels_);
  }

  Tensor forward(const Tensor& x, bool training) override {
    if (x.rank() != 3 || x.dim(1) != channels_) {
      throw std::invalid_argument("BatchNorm1d: bad input shape " + x.shape_string());
    }
    const int batch = x.dim(0), length = x.dim(2);
    training_ = training;

    Tensor y = Tensor::zeros(x.shape);
    if (!training) {
      eval_inv_std_ = Array::Zero(channels_);
      for (int c = 0; c < channels_; ++c) {
        const Scalar inv = Scalar(1) /
            std::sqrt(running_var_[c] + static_cast<Scalar>(epsilon_));
        eval_inv_std_[c] = inv;
        for (int b = 0; b < batch; ++b) {
          for (int t = 0; t < length; ++t) {
            y.at(b, c, t) = gamma_[c] * (x.at(b, c, t) - running_mean_[c]) * inv + beta_[c];
          }
        }
      }
      return y;
    }

    if (batch < 2) {
      throw std::invalid_argument("BatchNorm1d: train mode needs batch size >= 2");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(batch) * length;
    xhat_ = Tensor::zeros(x.shape);
    inv_std_ = Array::Zero(channels_);
    for (int c = 0; c < channels_; ++c) {
      Scalar sum = 0, sumsq = 0;
      for (int b = 0; b < batch; ++b) {
        for (int t = 0; t < length; ++t) {
          const Scalar v = x.at(b, c, t);
          sum += v;
          sumsq += v * v;
        }
      }
      const Scalar mean = sum / n;
      const Scalar var = std::max(Scalar(0), sumsq / n - mean * mean);
      const Scalar inv = Scalar(1) / std::sqrt(var + static_cast<Scalar>(epsilon_));
      inv_std_[c] = inv;
      for (int b = 0; b < batch; ++b) {
        for (int t = 0; t < length; ++t) {
          const Scalar xh = (x.at(b, c, t) - mean) * inv;
          xhat_.at(b, c, t) = xh;
          y.at(b, c, t) = gamma_[c] * xh + beta_[c];
        }
      }
      const Scalar unbiased = n > 1 ? var * n / (n - 1) : var;
      running_mean_[c] = static_cast<Scalar>((1.0 - momentum_) * running_mean_[c] +
                                             momentum_ * mean);
      running_var_[c] = static_cast<Scalar>((1.0 - momentum_) * running_var_[c] +
                                            momentum_ * unbiased);
    }
    return y;
  }

  Tensor backward(const Tensor& grad_out) override {
    const int batch = grad_out.dim(0), length = grad_out.dim(2);
    Tensor dx = Tensor::zeros(grad_out.shape);

    if (!training_) {
      // Eval-mode backward propagates the input gradient only; the frozen
      // statistics are constants and the column use case never trains
      // gamma/beta through this path.
      for (int c = 0; c < channels_; ++c) {
        for (int b = 0; b < batch; ++b) {
          for (int t = 0; t < length; ++t) {
            dx.at(b, c, t) = grad_out.at(b, c, t) * gamma_[c] * eval_inv_std_[c];
          }
        }
      }
      return dx;
    }

    const Eigen::Index n = static_cast<Eigen::Index>(batch) * length;
    for (int c = 0; c < channels_; ++c) {
      Scalar sum_dy = 0, sum_dy_xhat = 0;
      for (int b = 0; b < batch; ++b) {
        for (int t = 0; t < length; ++t) {
          const Scalar g = grad_out.at(b, c, t);
          sum_dy += g;
          sum_dy_xhat += g * xhat_.at(b, c, t);
        }
      }
      beta_grad_[c] += sum_dy;
      gamma_grad_[c] += sum_dy_xhat;

      const Scalar scale = gamma_[c] * inv_std_[c] / n;
      for (int b = 0; b < batch; ++b) {
        for (int t = 0; t < length; ++t) {
          dx.at(b, c, t) = scale * (n * grad_out.at(b, c, t) - sum_dy -
                                    xhat_.at(b, c, t) * sum_dy_xhat);
        }
      }
    }
    return dx;
  }

  std::vector<ParamBlock> params() override {
    return {{"gamma", &gamma_, &gamma_grad_, {channels_}},
            {"beta", &beta_, &beta_grad_, {channels_}}};
  }

  std::vector<ParamBlock> state() override {
    return {{"running_mean", &running_mean_, nullptr, {channels_}},
            {"running_var", &running_var_, nullptr, {channels_}}};
  }

  std::string descriptor() const override {
    return "batchnorm1d c=" + std::to_string(channels_);
  }

 private:
  int channels_;
  double momentum_, epsilon_;
  bool training_ = true;
  Array gamma_, beta_, gamma_grad_, beta_grad_;
  Array running_mean_, running_var_;
  Array inv_std_, eval_inv_std_;
  Tensor xhat_;
};

template <typename Scalar>
class ReluT final : public LayerT<Scalar> {
 public:
  using Tensor = TensorT<Scalar>;

  Tensor forward(const Tensor& x, bool) override {
    input_ = x;
    Tensor y = x;
    y.data = y.data.max(Scalar(0));
    return y;
  }

  Tensor backward(const Tensor& grad_out) override {
    Tensor dx = grad_out;
    dx.data = (input_.data > Scalar(0)).select(grad_out.data, Scalar(0));
    return dx;
  }

  std::string descriptor() const override { return "relu"; }

 private:
  Tensor input_;
};

template <typename Scalar>
class SigmoidT final : public LayerT<Scalar> {
 public:
  using Tensor = TensorT<Scalar>;

  Tensor forward(const Tensor& x, bool) override {
    Tensor y = x;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const Scalar z = x.data[i];
      if (z >= Scalar(0)) {
        y.data[i] = Scalar(1) / (Scalar(1) + std::exp(-z));
      } else {
        const Scalar e = std::exp(z);
        y.data[i] = e / (Scalar(1) + e);
      }
    }
    output_ = y;
    return y;
  }

  Tensor backward(const Tensor& grad_out) override {
    Tensor dx = grad_out;
    dx.data = grad_out.data * output_.data * (Scalar(1) - output_.data);
    return dx;
  }

  std::string descriptor() const override { return "sigmoid"; }

 private:
  Tensor output_;
};

// (batch, c, l) -> (batch, c*l); row-major storage makes this a pure
// shape change.
template <typename Scalar>
class FlattenT final : public LayerT<Scalar> {
 public:
  using Tensor = TensorT<Scalar>;

  Tensor forward(const Tensor& x, bool) override {
    in_shape_ = x.shape;
    Eigen::Index flat = 1;
    for (std::size_t i = 1; i < x.shape.size(); ++i) flat *= x.shape[i];
    return x.reshaped({x.dim(0), static_cast<int>(flat)});
  }

  Tensor backward(const Tensor& grad_out) override {
    return grad_out.reshaped(in_shape_);
  }

  std::string descriptor() const override { return "flatten"; }

 private:
  std::vector<int> in_shape_;
};

// Fully connected y = x W^T + b; weight layout [out][in].
template <typename Scalar>
class DenseT final : public LayerT<Scalar> {
 public:
  using Tensor = TensorT<Scalar>;
  using Array = typename Tensor::Array;
  using ParamBlock = ParamBlockT<Scalar>;
  using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using RowMap = Eigen::Map<RowMatrix>;
  using ConstRowMap = Eigen::Map<const RowMatrix>;

  DenseT(int in_dim, int out_dim) : in_(in_dim), out_(out_dim) {
    weight_ = Array::Zero(static_cast<Eigen::Index>(out_) * in_);
    bias_ = Array::Zero(out_);
    weight_grad_ = weight_;
    bias_grad_ = bias_;
  }

  void init_he(Rng& rng) {
    weight_ = he_normal<Scalar>(weight_.size(), in_, rng);
    bias_.setZero();
  }

  Tensor forward(const Tensor& x, bool) override {
    if (x.rank() != 2 || x.dim(1) != in_) {
      throw std::invalid_argument("Dense: bad input shape " + x.shape_string());
    }
    input_ = x;
    const int batch = x.dim(0);
    ConstRowMap xm(x.data.data(), batch, in_);
    ConstRowMap wm(weight_.data(), out_, in_);

    Tensor y = Tensor::zeros({batch, out_});
    RowMap ym(y.data.data(), batch, out_);
    ym.noalias() = xm * wm.transpose();
    for (int b = 0; b < batch; ++b) ym.row(b) += bias_.matrix().transpose();
    return y;
  }

  Tensor backward(const Tensor& grad_out) override {
    const int batch = input_.dim(0);
    ConstRowMap gm(grad_out.data.data(), batch, out_);
    ConstRowMap xm(input_.data.data(), batch, in_);
    ConstRowMap wm(weight_.data(), out_, in_);

    RowMap wgm(weight_grad_.data(), out_, in_);
    wgm.noalias() += gm.transpose() * xm;
    bias_grad_ += gm.colwise().sum().array().transpose();

    Tensor dx = Tensor::zeros(input_.shape);
    RowMap dxm(dx.data.data(), batch, in_);
    dxm.noalias() = gm * wm;
    return dx;
  }

  std::vector<ParamBlock> params() override {
    return {{"weight", &weight_, &weight_grad_, {out_, in_}},
            {"bias", &bias_, &bias_grad_, {out_}}};
  }

  std::string descriptor() const override {
    return "dense in=" + std::to_string(in_) + " out=" + std::to_string(out_);
  }

 private:
  int in_, out_;
  Array weight_, bias_, weight_grad_, bias_grad_;
  Tensor input_;
};

using Conv1d = Conv1dT<double>;
using BatchNorm1d = BatchNorm1dT<double>;
using Relu = ReluT<double>;
using Sigmoid = SigmoidT<double>;
using Flatten = FlattenT<double>;
using Dense = DenseT<double>;

}  // namespace gciforge::nn
