// Copyright 2026 The serkit Authors. All Rights Reserved.
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

#include "serkit/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "serkit/error.hpp"

namespace serkit::nn {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void require_rank(const Tensor& x, std::size_t rank, std::string_view op) {
  if (x.rank() != rank) {
    throw Error(Errc::shape_mismatch, std::string(op) + ": expected rank " + std::to_string(rank) +
                                          " input, got " + shape_string(x.shape()));
  }
}

void uniform_fill(Tensor& t, double limit, Rng& rng) {
  for (double& v : t.values()) v = rng.uniform(-limit, limit);
}

}  // namespace

void Layer::zero_grad() {
  for (Param* p : params()) p->grad.fill(0.0);
}

std::size_t Layer::parameter_count() {
  std::size_t n = 0;
  for (Param* p : params()) n += p->value.size();
  return n;
}

void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  uniform_fill(t, std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)), rng);
}

// ---------------------------------------------------------------- Dense

Dense::Dense(std::size_t in, std::size_t out)
    : in_(in), out_(out), weight_("weight", {in, out}), bias_("bias", {out}) {}

Shape Dense::output_shape(const Shape& input) const {
  if (input.size() != 1 || input[0] != in_) {
    throw Error(Errc::shape_mismatch, "dense expects [" + std::to_string(in_) + "], got " + shape_string(input));
  }
  return {out_};
}

void Dense::initialize(Rng& rng) {
  glorot_uniform(weight_.value, in_, out_, rng);
  bias_.value.fill(0.0);
}

Tensor Dense::forward(const Tensor& x, Mode) {
  require_rank(x, 2, "dense");
  if (x.dim(1) != in_) throw Error(Errc::shape_mismatch, "dense input width " + std::to_string(x.dim(1)));
  const std::size_t batch = x.dim(0);
  input_ = x;
  Tensor y({batch, out_});
  for (std::size_t b = 0; b < batch; ++b) std::copy_n(bias_.value.data(), out_, y.data() + b * out_);
  gemm(batch, out_, in_, x.data(), in_, weight_.value.data(), out_, y.data(), out_, true);
  require_finite(y, "dense forward");
  return y;
}

Tensor Dense::backward(const Tensor& dy) {
  const std::size_t batch = input_.dim(0);
  require_shape(dy, {batch, out_}, "dense backward");
  gemm_at_b(batch, out_, in_, input_.data(), in_, dy.data(), out_, weight_.grad.data(), out_);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t j = 0; j < out_; ++j) bias_.grad[j] += dy.at(b, j);
  }
  Tensor dx({batch, in_});
  gemm_a_bt(batch, out_, in_, dy.data(), out_, weight_.value.data(), out_, dx.data(), in_, false);
  require_finite(dx, "dense backward");
  return dx;
}

// ---------------------------------------------------------------- Relu

Tensor Relu::forward(const Tensor& x, Mode) {
  output_ = x;
  for (double& v : output_.values()) v = v > 0.0 ? v : 0.0;
  return output_;
}

Tensor Relu::backward(const Tensor& dy) {
  require_shape(dy, output_.shape(), "relu backward");
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (output_[i] <= 0.0) dx[i] = 0.0;
  }
  return dx;
}

// ---------------------------------------------------------------- BatchNorm

BatchNorm::BatchNorm(std::size_t features)
    : features_(features),
      gamma_("gamma", {features}),
      beta_("beta", {features}),
      running_mean_({features}, 0.0),
      running_var_({features}, 1.0) {
  gamma_.value.fill(1.0);
}

Shape BatchNorm::output_shape(const Shape& input) const {
  if (input.size() != 1 || input[0] != features_) {
    throw Error(Errc::shape_mismatch, "batchnorm expects [" + std::to_string(features_) + "]");
  }
  return input;
}

Tensor BatchNorm::forward(const Tensor& x, Mode mode) {
  require_rank(x, 2, "batchnorm");
  if (x.dim(1) != features_) throw Error(Errc::shape_mismatch, "batchnorm feature count");
  const std::size_t batch = x.dim(0);
  last_mode_ = mode;
  normalized_ = Tensor(x.shape());
  inv_std_.assign(features_, 0.0);
  Tensor y(x.shape());

  if (mode == Mode::train) {
    if (batch < 2) throw Error(Errc::batch_too_small, "batchnorm in train mode needs batch >= 2");
    for (std::size_t f = 0; f < features_; ++f) {
      double mean = 0.0;
      for (std::size_t b = 0; b < batch; ++b) mean += x.at(b, f);
      mean /= static_cast<double>(batch);
      double var = 0.0;
      for (std::size_t b = 0; b < batch; ++b) {
        const double d = x.at(b, f) - mean;
        var += d * d;
      }
      var /= static_cast<double>(batch);
      inv_std_[f] = 1.0 / std::sqrt(var + kEpsilon);
      running_mean_[f] = kMomentum * running_mean_[f] + (1.0 - kMomentum) * mean;
      running_var_[f] = kMomentum * running_var_[f] + (1.0 - kMomentum) * var;
      for (std::size_t b = 0; b < batch; ++b) {
        normalized_.at(b, f) = (x.at(b, f) - mean) * inv_std_[f];
      }
    }
  } else {
    for (std::size_t f = 0; f < features_; ++f) {
      inv_std_[f] = 1.0 / std::sqrt(running_var_[f] + kEpsilon);
      for (std::size_t b = 0; b < batch; ++b) {
        normalized_.at(b, f) = (x.at(b, f) - running_mean_[f]) * inv_std_[f];
      }
    }
  }
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t f = 0; f < features_; ++f) {
      y.at(b, f) = gamma_.value[f] * normalized_.at(b, f) + beta_.value[f];
    }
  }
  require_finite(y, "batchnorm forward");
  return y;
}

Tensor BatchNorm::backward(const Tensor& dy) {
  require_shape(dy, normalized_.shape(), "batchnorm backward");
  const std::size_t batch = dy.dim(0);
  const double n = static_cast<double>(batch);
  Tensor dx(dy.shape());
  for (std::size_t f = 0; f < features_; ++f) {
    double sum_dy = 0.0;
    double sum_dy_xhat = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
      sum_dy += dy.at(b, f);
      sum_dy_xhat += dy.at(b, f) * normalized_.at(b, f);
    }
    gamma_.grad[f] += sum_dy_xhat;
    beta_.grad[f] += sum_dy;
    const double scale = gamma_.value[f] * inv_std_[f];
    for (std::size_t b = 0; b < batch; ++b) {
      if (last_mode_ == Mode::train) {
        dx.at(b, f) = scale / n * (n * dy.at(b, f) - sum_dy - normalized_.at(b, f) * sum_dy_xhat);
      } else {
        dx.at(b, f) = scale * dy.at(b, f);
      }
    }
  }
  require_finite(dx, "batchnorm backward");
  return dx;
}

// ---------------------------------------------------------------- Dropout

Dropout::Dropout(double rate, std::uint64_t seed) : rate_(rate), rng_(seed) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw Error(Errc::config_invalid, "dropout rate must be in [0, 1)");
  }
}

Tensor Dropout::forward(const Tensor& x, Mode mode) {
  if (mode == Mode::eval || rate_ == 0.0) {
    mask_ = Tensor();
    return x;
  }
  mask_ = Tensor(x.shape());
  const double keep_scale = 1.0 / (1.0 - rate_);
  Tensor y = x;
  for (std::size_t i = 0; i < y.size(); ++i) {
    mask_[i] = rng_.uniform() < rate_ ? 0.0 : keep_scale;
    y[i] *= mask_[i];
  }
  return y;
}

Tensor Dropout::backward(const Tensor& dy) {
  if (mask_.empty()) return dy;
  require_shape(dy, mask_.shape(), "dropout backward");
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] *= mask_[i];
  return dx;
}

// ---------------------------------------------------------------- Conv1d

Conv1d::Conv1d(std::size_t in_channels, std::size_t out_channels, std::size_t kernel, std::size_t stride)
    : in_(in_channels),
      out_(out_channels),
      kernel_(kernel),
      stride_(stride),
      kernels_("kernels", {kernel, in_channels, out_channels}),
      bias_("bias", {out_channels}) {
  if (kernel == 0 || stride == 0) throw Error(Errc::config_invalid, "conv1d kernel and stride must be >= 1");
}

Shape Conv1d::output_shape(const Shape& input) const {
  if (input.size() != 2 || input[1] != in_ || input[0] < kernel_) {
    throw Error(Errc::shape_mismatch, "conv1d(k=" + std::to_string(kernel_) + ", c_in=" + std::to_string(in_) +
                                          ") cannot take " + shape_string(input));
  }
  return {(input[0] - kernel_) / stride_ + 1, out_};
}

void Conv1d::initialize(Rng& rng) {
  glorot_uniform(kernels_.value, kernel_ * in_, kernel_ * out_, rng);
  bias_.value.fill(0.0);
}

Tensor Conv1d::forward(const Tensor& x, Mode) {
  require_rank(x, 3, "conv1d");
  const std::size_t batch = x.dim(0);
  const std::size_t time = x.dim(1);
  const Shape out_shape = output_shape({time, x.dim(2)});
  const std::size_t t_out = out_shape[0];
  input_ = x;
  Tensor y({batch, t_out, out_});
  const std::size_t patch = kernel_ * in_;
  for (std::size_t b = 0; b < batch; ++b) {
    double* yb = y.data() + b * t_out * out_;
    for (std::size_t t = 0; t < t_out; ++t) std::copy_n(bias_.value.data(), out_, yb + t * out_);
    gemm(t_out, out_, patch, x.data() + b * time * in_, stride_ * in_, kernels_.value.data(), out_, yb, out_,
         true);
  }
  require_finite(y, "conv1d forward");
  return y;
}

Tensor Conv1d::backward(const Tensor& dy) {
  const std::size_t batch = input_.dim(0);
  const std::size_t time = input_.dim(1);
  const std::size_t t_out = (time - kernel_) / stride_ + 1;
  require_shape(dy, {batch, t_out, out_}, "conv1d backward");
  const std::size_t patch = kernel_ * in_;
  Tensor dx(input_.shape());
  std::vector<double> dpatch(t_out * patch);
  for (std::size_t b = 0; b < batch; ++b) {
    const double* xb = input_.data() + b * time * in_;
    const double* dyb = dy.data() + b * t_out * out_;
    gemm_at_b(t_out, out_, patch, xb, stride_ * in_, dyb, out_, kernels_.grad.data(), out_);
    for (std::size_t t = 0; t < t_out; ++t) {
      for (std::size_t o = 0; o < out_; ++o) bias_.grad[o] += dyb[t * out_ + o];
    }
    gemm_a_bt(t_out, out_, patch, dyb, out_, kernels_.value.data(), out_, dpatch.data(), patch, false);
    double* dxb = dx.data() + b * time * in_;
    for (std::size_t t = 0; t < t_out; ++t) {
      double* dst = dxb + t * stride_ * in_;
      const double* src = dpatch.data() + t * patch;
      for (std::size_t j = 0; j < patch; ++j) dst[j] += src[j];
    }
  }
  require_finite(dx, "conv1d backward");
  return dx;
}

// ---------------------------------------------------------------- MaxPool1d

MaxPool1d::MaxPool1d(std::size_t pool, std::size_t stride) : pool_(pool), stride_(stride) {
  if (pool == 0 || stride == 0) throw Error(Errc::config_invalid, "maxpool window and stride must be >= 1");
}

Shape MaxPool1d::output_shape(const Shape& input) const {
  if (input.size() != 2 || input[0] < pool_) {
    throw Error(Errc::shape_mismatch, "maxpool(" + std::to_string(pool_) + ") cannot take " + shape_string(input));
  }
  return {(input[0] - pool_) / stride_ + 1, input[1]};
}

Tensor MaxPool1d::forward(const Tensor& x, Mode) {
  require_rank(x, 3, "maxpool1d");
  const std::size_t batch = x.dim(0);
  const std::size_t channels = x.dim(2);
  const std::size_t t_out = output_shape({x.dim(1), channels})[0];
  input_shape_ = x.shape();
  Tensor y({batch, t_out, channels});
  argmax_.assign(y.size(), 0);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < t_out; ++t) {
      for (std::size_t c = 0; c < channels; ++c) {
        std::size_t best = t * stride_;
        for (std::size_t j = 1; j < pool_; ++j) {
          if (x.at(b, t * stride_ + j, c) > x.at(b, best, c)) best = t * stride_ + j;
        }
        y.at(b, t, c) = x.at(b, best, c);
        argmax_[(b * t_out + t) * channels + c] = best;
      }
    }
  }
  return y;
}

Tensor MaxPool1d::backward(const Tensor& dy) {
  const std::size_t batch = input_shape_[0];
  const std::size_t channels = input_shape_[2];
  const std::size_t t_out = (input_shape_[1] - pool_) / stride_ + 1;
  require_shape(dy, {batch, t_out, channels}, "maxpool1d backward");
  Tensor dx(input_shape_);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < t_out; ++t) {
      for (std::size_t c = 0; c < channels; ++c) {
        dx.at(b, argmax_[(b * t_out + t) * channels + c], c) += dy.at(b, t, c);
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------- GlobalMaxPool

Shape GlobalMaxPool::output_shape(const Shape& input) const {
  if (input.size() != 2 || input[0] == 0) throw Error(Errc::shape_mismatch, "global maxpool input");
  return {input[1]};
}

Tensor GlobalMaxPool::forward(const Tensor& x, Mode) {
  require_rank(x, 3, "global_maxpool");
  const std::size_t batch = x.dim(0), time = x.dim(1), channels = x.dim(2);
  input_shape_ = x.shape();
  Tensor y({batch, channels});
  argmax_.assign(batch * channels, 0);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t c = 0; c < channels; ++c) {
      std::size_t best = 0;
      for (std::size_t t = 1; t < time; ++t) {
        if (x.at(b, t, c) > x.at(b, best, c)) best = t;
      }
      argmax_[b * channels + c] = best;
      y.at(b, c) = x.at(b, best, c);
    }
  }
  return y;
}

Tensor GlobalMaxPool::backward(const Tensor& dy) {
  const std::size_t batch = input_shape_[0], channels = input_shape_[2];
  require_shape(dy, {batch, channels}, "global_maxpool backward");
  Tensor dx(input_shape_);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t c = 0; c < channels; ++c) dx.at(b, argmax_[b * channels + c], c) = dy.at(b, c);
  }
  return dx;
}

// ---------------------------------------------------------------- Flatten / Reshape

Tensor Flatten::forward(const Tensor& x, Mode) {
  input_shape_ = x.shape();
  return x.reshaped({x.dim(0), x.size() / std::max<std::size_t>(x.dim(0), 1)});
}

Tensor Flatten::backward(const Tensor& dy) { return dy.reshaped(input_shape_); }

Shape Reshape::output_shape(const Shape& input) const {
  if (shape_size(input) != shape_size(target_)) {
    throw Error(Errc::shape_mismatch, "cannot reshape " + shape_string(input) + " to " + shape_string(target_));
  }
  return target_;
}

Tensor Reshape::forward(const Tensor& x, Mode) {
  input_shape_ = x.shape();
  Shape s = target_;
  s.insert(s.begin(), x.dim(0));
  return x.reshaped(std::move(s));
}

Tensor Reshape::backward(const Tensor& dy) { return dy.reshaped(input_shape_); }

// ---------------------------------------------------------------- Lstm

Lstm::Lstm(std::size_t input_size, std::size_t hidden, bool reverse)
    : input_size_(input_size),
      hidden_(hidden),
      reverse_(reverse),
      w_input_("w_input", {input_size, 4 * hidden}),
      w_hidden_("w_hidden", {hidden, 4 * hidden}),
      bias_("bias", {4 * hidden}) {}

Shape Lstm::output_shape(const Shape& input) const {
  if (input.size() != 2 || input[1] != input_size_ || input[0] == 0) {
    throw Error(Errc::shape_mismatch, "lstm expects [time >= 1, " + std::to_string(input_size_) + "], got " +
                                          shape_string(input));
  }
  return {input[0], hidden_};
}

void Lstm::initialize(Rng& rng) {
  const std::size_t h4 = 4 * hidden_;
  const double in_limit = std::sqrt(6.0 / static_cast<double>(input_size_ + hidden_));
  const double rec_limit = std::sqrt(1.0 / static_cast<double>(hidden_));
  for (std::size_t i = 0; i < input_size_; ++i) {
    for (std::size_t j = 0; j < h4; ++j) w_input_.value.at(i, j) = rng.uniform(-in_limit, in_limit);
  }
  for (std::size_t i = 0; i < hidden_; ++i) {
    for (std::size_t j = 0; j < h4; ++j) w_hidden_.value.at(i, j) = rng.uniform(-rec_limit, rec_limit);
  }
  bias_.value.fill(0.0);
  for (std::size_t j = hidden_; j < 2 * hidden_; ++j) bias_.value[j] = 1.0;
}

Tensor Lstm::forward(const Tensor& x, Mode) {
  require_rank(x, 3, "lstm");
  const std::size_t batch = x.dim(0), time = x.dim(1);
  output_shape({time, x.dim(2)});
  const std::size_t h = hidden_, h4 = 4 * hidden_;
  input_ = x;
  gates_ = Tensor({batch, time, h4});
  cells_ = Tensor({batch, time, h});
  tanh_c_ = Tensor({batch, time, h});
  hidden_states_ = Tensor({batch, time, h});

  // Input projections for every step at once.
  Tensor projected({batch * time, h4});
  gemm(batch * time, h4, input_size_, x.data(), input_size_, w_input_.value.data(), h4, projected.data(), h4,
       false);

  std::vector<double> z(batch * h4);
  for (std::size_t s = 0; s < time; ++s) {
    const std::size_t t = reverse_ ? time - 1 - s : s;
    const bool has_prev = s > 0;
    const std::size_t tp = reverse_ ? t + 1 : t - 1;
    for (std::size_t b = 0; b < batch; ++b) {
      const double* pre = projected.data() + (b * time + t) * h4;
      for (std::size_t j = 0; j < h4; ++j) z[b * h4 + j] = pre[j] + bias_.value[j];
    }
    if (has_prev) {
      gemm(batch, h4, h, hidden_states_.data() + tp * h, time * h, w_hidden_.value.data(), h4, z.data(), h4,
           true);
    }
    for (std::size_t b = 0; b < batch; ++b) {
      double* g = gates_.data() + (b * time + t) * h4;
      const double* zb = z.data() + b * h4;
      for (std::size_t j = 0; j < h; ++j) {
        const double ig = sigmoid(zb[j]);
        const double fg = sigmoid(zb[h + j]);
        const double cg = std::tanh(zb[2 * h + j]);
        const double og = sigmoid(zb[3 * h + j]);
        g[j] = ig;
        g[h + j] = fg;
        g[2 * h + j] = cg;
        g[3 * h + j] = og;
        const double c_prev = has_prev ? cells_.at(b, tp, j) : 0.0;
        const double c = fg * c_prev + ig * cg;
        const double tc = std::tanh(c);
        cells_.at(b, t, j) = c;
        tanh_c_.at(b, t, j) = tc;
        hidden_states_.at(b, t, j) = og * tc;
      }
    }
  }
  require_finite(hidden_states_, "lstm forward");
  return hidden_states_;
}

Tensor Lstm::backward(const Tensor& dy) {
  const std::size_t batch = input_.dim(0), time = input_.dim(1);
  const std::size_t h = hidden_, h4 = 4 * hidden_;
  require_shape(dy, {batch, time, h}, "lstm backward");

  Tensor dz({batch, time, h4});
  std::vector<double> dh_next(batch * h, 0.0);
  std::vector<double> dc_next(batch * h, 0.0);
  for (std::size_t s = time; s-- > 0;) {
    const std::size_t t = reverse_ ? time - 1 - s : s;
    const bool has_prev = s > 0;
    const std::size_t tp = reverse_ ? t + 1 : t - 1;
    for (std::size_t b = 0; b < batch; ++b) {
      const double* g = gates_.data() + (b * time + t) * h4;
      double* dzb = dz.data() + (b * time + t) * h4;
      for (std::size_t j = 0; j < h; ++j) {
        const double ig = g[j], fg = g[h + j], cg = g[2 * h + j], og = g[3 * h + j];
        const double tc = tanh_c_.at(b, t, j);
        const double dh = dy.at(b, t, j) + dh_next[b * h + j];
        const double d_o = dh * tc;
        const double dc = dh * og * (1.0 - tc * tc) + dc_next[b * h + j];
        const double c_prev = has_prev ? cells_.at(b, tp, j) : 0.0;
        dc_next[b * h + j] = dc * fg;
        dzb[j] = dc * cg * ig * (1.0 - ig);
        dzb[h + j] = dc * c_prev * fg * (1.0 - fg);
        dzb[2 * h + j] = dc * ig * (1.0 - cg * cg);
        dzb[3 * h + j] = d_o * og * (1.0 - og);
      }
    }
    const double* dz_t = dz.data() + t * h4;
    if (has_prev) {
      gemm_at_b(batch, h4, h, hidden_states_.data() + tp * h, time * h, dz_t, time * h4, w_hidden_.grad.data(),
                h4);
      gemm_a_bt(batch, h4, h, dz_t, time * h4, w_hidden_.value.data(), h4, dh_next.data(), h, false);
    }
  }

  const std::size_t rows = batch * time;
  gemm_at_b(rows, h4, input_size_, input_.data(), input_size_, dz.data(), h4, w_input_.grad.data(), h4);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* dzr = dz.data() + r * h4;
    for (std::size_t j = 0; j < h4; ++j) bias_.grad[j] += dzr[j];
  }
  Tensor dx(input_.shape());
  gemm_a_bt(rows, h4, input_size_, dz.data(), h4, w_input_.value.data(), h4, dx.data(), input_size_, false);
  require_finite(dx, "lstm backward");
  return dx;
}

// ---------------------------------------------------------------- Blstm

Blstm::Blstm(std::size_t input_size, std::size_t hidden)
    : fwd_(input_size, hidden, false), bwd_(input_size, hidden, true) {}

Shape Blstm::output_shape(const Shape& input) const {
  Shape s = fwd_.output_shape(input);
  s[1] *= 2;
  return s;
}

std::vector<Param*> Blstm::params() {
  std::vector<Param*> out;
  for (Param* p : fwd_.params()) out.push_back(p);
  for (Param* p : bwd_.params()) out.push_back(p);
  return out;
}

void Blstm::initialize(Rng& rng) {
  fwd_.initialize(rng);
  bwd_.initialize(rng);
}

Tensor Blstm::forward(const Tensor& x, Mode mode) {
  const Tensor f = fwd_.forward(x, mode);
  const Tensor r = bwd_.forward(x, mode);
  const std::size_t batch = f.dim(0), time = f.dim(1), h = f.dim(2);
  Tensor y({batch, time, 2 * h});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < time; ++t) {
      std::copy_n(f.data() + (b * time + t) * h, h, y.data() + (b * time + t) * 2 * h);
      std::copy_n(r.data() + (b * time + t) * h, h, y.data() + (b * time + t) * 2 * h + h);
    }
  }
  return y;
}

Tensor Blstm::backward(const Tensor& dy) {
  require_rank(dy, 3, "blstm backward");
  const std::size_t batch = dy.dim(0), time = dy.dim(1), h = dy.dim(2) / 2;
  Tensor df({batch, time, h});
  Tensor dr({batch, time, h});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < time; ++t) {
      std::copy_n(dy.data() + (b * time + t) * 2 * h, h, df.data() + (b * time + t) * h);
      std::copy_n(dy.data() + (b * time + t) * 2 * h + h, h, dr.data() + (b * time + t) * h);
    }
  }
  Tensor dx = fwd_.backward(df);
  const Tensor dx_r = bwd_.backward(dr);
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dx_r[i];
  return dx;
}

// ---------------------------------------------------------------- BlstmFinalState

Shape BlstmFinalState::output_shape(const Shape& input) const {
  if (input.size() != 2 || input[1] % 2 != 0 || input[0] == 0) {
    throw Error(Errc::shape_mismatch, "final-state readout expects [time, 2h], got " + shape_string(input));
  }
  return {input[1]};
}

Tensor BlstmFinalState::forward(const Tensor& x, Mode) {
  require_rank(x, 3, "blstm_final_state");
  input_shape_ = x.shape();
  const std::size_t batch = x.dim(0), time = x.dim(1), d = x.dim(2), h = d / 2;
  Tensor y({batch, d});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t j = 0; j < h; ++j) {
      y.at(b, j) = x.at(b, time - 1, j);
      y.at(b, h + j) = x.at(b, 0, h + j);
    }
  }
  return y;
}

Tensor BlstmFinalState::backward(const Tensor& dy) {
  const std::size_t batch = input_shape_[0], time = input_shape_[1], d = input_shape_[2], h = d / 2;
  require_shape(dy, {batch, d}, "blstm_final_state backward");
  Tensor dx(input_shape_);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t j = 0; j < h; ++j) {
      dx.at(b, time - 1, j) += dy.at(b, j);
      dx.at(b, 0, h + j) += dy.at(b, h + j);
    }
  }
  return dx;
}

// ---------------------------------------------------------------- AttentionPool

AttentionPool::AttentionPool(std::size_t dim, std::size_t attention_dim)
    : dim_(dim),
      attention_dim_(attention_dim),
      w_("w", {dim, attention_dim}),
      b_("b", {attention_dim}),
      v_("v", {attention_dim}) {}

Shape AttentionPool::output_shape(const Shape& input) const {
  if (input.size() != 2 || input[1] != dim_ || input[0] == 0) {
    throw Error(Errc::shape_mismatch, "attention expects [time >= 1, " + std::to_string(dim_) + "], got " +
                                          shape_string(input));
  }
  return {dim_};
}

void AttentionPool::initialize(Rng& rng) {
  glorot_uniform(w_.value, dim_, attention_dim_, rng);
  b_.value.fill(0.0);
  glorot_uniform(v_.value, attention_dim_, 1, rng);
}

Tensor AttentionPool::forward(const Tensor& x, Mode) {
  require_rank(x, 3, "attention_pool");
  const std::size_t batch = x.dim(0), time = x.dim(1);
  output_shape({time, x.dim(2)});
  const std::size_t a = attention_dim_;
  input_ = x;
  projected_ = Tensor({batch * time, a});
  for (std::size_t r = 0; r < batch * time; ++r) std::copy_n(b_.value.data(), a, projected_.data() + r * a);
  gemm(batch * time, a, dim_, x.data(), dim_, w_.value.data(), a, projected_.data(), a, true);
  for (double& u : projected_.values()) u = std::tanh(u);

  alpha_ = Tensor({batch, time});
  Tensor context({batch, dim_});
  for (std::size_t b = 0; b < batch; ++b) {
    double peak = -INFINITY;
    for (std::size_t t = 0; t < time; ++t) {
      const double* u = projected_.data() + (b * time + t) * a;
      double s = 0.0;
      for (std::size_t j = 0; j < a; ++j) s += v_.value[j] * u[j];
      alpha_.at(b, t) = s;
      peak = std::max(peak, s);
    }
    double total = 0.0;
    for (std::size_t t = 0; t < time; ++t) {
      alpha_.at(b, t) = std::exp(alpha_.at(b, t) - peak);
      total += alpha_.at(b, t);
    }
    for (std::size_t t = 0; t < time; ++t) {
      alpha_.at(b, t) /= total;
      const double w = alpha_.at(b, t);
      const double* h = x.data() + (b * time + t) * dim_;
      for (std::size_t j = 0; j < dim_; ++j) context.at(b, j) += w * h[j];
    }
  }
  require_finite(context, "attention forward");
  return context;
}

Tensor AttentionPool::backward(const Tensor& dctx) {
  const std::size_t batch = input_.dim(0), time = input_.dim(1);
  const std::size_t a = attention_dim_;
  require_shape(dctx, {batch, dim_}, "attention backward");
  Tensor dx(input_.shape());
  Tensor dpre({batch * time, a});
  std::vector<double> dalpha(time);
  for (std::size_t b = 0; b < batch; ++b) {
    const double* g = dctx.data() + b * dim_;
    double weighted = 0.0;
    for (std::size_t t = 0; t < time; ++t) {
      const double* h = input_.data() + (b * time + t) * dim_;
      double* dh = dx.data() + (b * time + t) * dim_;
      const double w = alpha_.at(b, t);
      double dot = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) {
        dot += g[j] * h[j];
        dh[j] += w * g[j];
      }
      dalpha[t] = dot;
      weighted += w * dot;
    }
    for (std::size_t t = 0; t < time; ++t) {
      const double ds = alpha_.at(b, t) * (dalpha[t] - weighted);
      const std::size_t r = b * time + t;
      const double* u = projected_.data() + r * a;
      double* dp = dpre.data() + r * a;
      for (std::size_t j = 0; j < a; ++j) {
        v_.grad[j] += ds * u[j];
        dp[j] = ds * v_.value[j] * (1.0 - u[j] * u[j]);
      }
    }
  }
  const std::size_t rows = batch * time;
  gemm_at_b(rows, a, dim_, input_.data(), dim_, dpre.data(), a, w_.grad.data(), a);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < a; ++j) b_.grad[j] += dpre[r * a + j];
  }
  gemm_a_bt(rows, a, dim_, dpre.data(), a, w_.value.data(), a, dx.data(), dim_, true);
  require_finite(dx, "attention backward");
  return dx;
}

}  // namespace serkit::nn
