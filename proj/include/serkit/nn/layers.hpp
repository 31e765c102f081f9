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

// Layers with hand-written backward passes. Every layer caches what its
// backward pass needs during forward(); backward() must follow the forward()
// whose gradient it computes. Parameter gradients accumulate until
// zero_grad().
//
// Batch-first layouts: dense-style layers take [batch, features], sequence
// layers take [batch, time, channels].

#ifndef SERKIT_NN_LAYERS_HPP_
#define SERKIT_NN_LAYERS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "serkit/nn/tensor.hpp"
#include "serkit/rng.hpp"

namespace serkit::nn {

enum class Mode { train, eval };

struct Param {
  std::string name;
  Tensor value;
  Tensor grad;

  Param() = default;
  Param(std::string n, Shape shape) : name(std::move(n)), value(shape), grad(shape) {}
};

class Layer {
 public:
  virtual ~Layer() = default;

  virtual std::string_view kind() const = 0;
  // Per-example shapes, without the batch axis.
  virtual Shape output_shape(const Shape& input) const = 0;
  virtual Tensor forward(const Tensor& x, Mode mode) = 0;
  virtual Tensor backward(const Tensor& grad_out) = 0;

  virtual std::vector<Param*> params() { return {}; }
  // Non-trainable state that belongs in checkpoints.
  virtual std::vector<std::pair<std::string, Tensor*>> buffers() { return {}; }
  virtual void initialize(Rng& /*rng*/) {}

  void zero_grad();
  std::size_t parameter_count();
};

// Uniform in +-sqrt(6 / (fan_in + fan_out)).
void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng);

class Dense final : public Layer {
 public:
  Dense(std::size_t in, std::size_t out);

  std::string_view kind() const override { return "dense"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;
  std::vector<Param*> params() override { return {&weight_, &bias_}; }
  void initialize(Rng& rng) override;

  Param& weight() { return weight_; }  // [in, out]
  Param& bias() { return bias_; }      // [out]

 private:
  std::size_t in_, out_;
  Param weight_, bias_;
  Tensor input_;
};

class Relu final : public Layer {
 public:
  std::string_view kind() const override { return "relu"; }
  Shape output_shape(const Shape& input) const override { return input; }
  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;

 private:
  Tensor output_;
};

// Train mode normalizes with batch statistics (biased variance, eps 1e-5)
// and updates running = 0.9 * running + 0.1 * batch; eval mode uses the
// running statistics.
class BatchNorm final : public Layer {
 public:
  explicit BatchNorm(std::size_t features);

  static constexpr double kEpsilon = 1e-5;
  static constexpr double kMomentum = 0.9;

  std::string_view kind() const override { return "batchnorm"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;
  std::vector<Param*> params() override { return {&gamma_, &beta_}; }
  std::vector<std::pair<std::string, Tensor*>> buffers() override {
    return {{"running_mean", &running_mean_}, {"running_var", &running_var_}};
  }

  Param& gamma() { return gamma_; }
  Param& beta() { return beta_; }
  const Tensor& running_mean() const { return running_mean_; }
  const Tensor& running_var() const { return running_var_; }

 private:
  std::size_t features_;
  Param gamma_, beta_;
  Tensor running_mean_, running_var_;
  Mode last_mode_ = Mode::eval;
  Tensor normalized_;
  std::vector<double> inv_std_;
};

// Inverted dropout: survivors are scaled by 1 / (1 - rate).
class Dropout final : public Layer {
 public:
  Dropout(double rate, std::uint64_t seed);

  std::string_view kind() const override { return "dropout"; }
  Shape output_shape(const Shape& input) const override { return input; }
  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;
  void reseed(std::uint64_t seed) { rng_ = Rng(seed); }

 private:
  double rate_;
  Rng rng_;
  Tensor mask_;
};

// Valid cross-correlation. kernels [k, c_in, c_out], bias [c_out].
class Conv1d final : public Layer {
 public:
  Conv1d(std::size_t in_channels, std::size_t out_channels, std::size_t kernel, std::size_t stride = 1);

  std::string_view kind() const override { return "conv1d"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;
  std::vector<Param*> params() override { return {&kernels_, &bias_}; }
  void initialize(Rng& rng) override;

  Param& kernels() { return kernels_; }
  Param& bias() { return bias_; }

 private:
  std::size_t in_, out_, kernel_, stride_;
  Param kernels_, bias_;
  Tensor input_;
};

// Windowed max over time; backward routes to the first argmax of each window.
class MaxPool1d final : public Layer {
 public:
  MaxPool1d(std::size_t pool, std::size_t stride);

  std::string_view kind() const override { return "maxpool1d"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;

 private:
  std::size_t pool_, stride_;
  Shape input_shape_;
  std::vector<std::size_t> argmax_;
};

// [batch, time, c] -> [batch, c]
class GlobalMaxPool final : public Layer {
 public:
  std::string_view kind() const override { return "global_maxpool"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;

 private:
  Shape input_shape_;
  std::vector<std::size_t> argmax_;
};

class Flatten final : public Layer {
 public:
  std::string_view kind() const override { return "flatten"; }
  Shape output_shape(const Shape& input) const override { return {shape_size(input)}; }
  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;

 private:
  Shape input_shape_;
};

class Reshape final : public Layer {
 public:
  explicit Reshape(Shape per_example) : target_(std::move(per_example)) {}

  std::string_view kind() const override { return "reshape"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;

 private:
  Shape target_;
  Shape input_shape_;
};

// Gate order i, f, g, o. w_input [in, 4h], w_hidden [h, 4h], bias [4h].
// A reverse LSTM consumes time T-1..0 and writes each state at the time step
// it consumed, which equals reversing input and output around a forward LSTM.
class Lstm final : public Layer {
 public:
  Lstm(std::size_t input_size, std::size_t hidden, bool reverse = false);

  std::string_view kind() const override { return "lstm"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;
  std::vector<Param*> params() override { return {&w_input_, &w_hidden_, &bias_}; }
  void initialize(Rng& rng) override;

  std::size_t hidden() const { return hidden_; }
  Param& w_input() { return w_input_; }
  Param& w_hidden() { return w_hidden_; }
  Param& bias() { return bias_; }

 private:
  std::size_t input_size_, hidden_;
  bool reverse_;
  Param w_input_, w_hidden_, bias_;
  Tensor input_;
  Tensor gates_;   // activated i, f, g, o per step [batch, time, 4h]
  Tensor cells_;   // [batch, time, h]
  Tensor tanh_c_;  // [batch, time, h]
  Tensor hidden_states_;
};

// Output [batch, time, 2h] = [forward states, backward states].
class Blstm final : public Layer {
 public:
  Blstm(std::size_t input_size, std::size_t hidden);

  std::string_view kind() const override { return "blstm"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;
  std::vector<Param*> params() override;
  void initialize(Rng& rng) override;

  Lstm& forward_lstm() { return fwd_; }
  Lstm& backward_lstm() { return bwd_; }

 private:
  Lstm fwd_, bwd_;
};

// Fixed-length BLSTM summary: final forward state (t = T-1) concatenated with
// the final backward state (t = 0). [batch, time, 2h] -> [batch, 2h].
class BlstmFinalState final : public Layer {
 public:
  std::string_view kind() const override { return "blstm_final_state"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;

 private:
  Shape input_shape_;
};

// score_t = v . tanh(W h_t + b), alpha = softmax over time,
// context = sum_t alpha_t h_t. [batch, time, d] -> [batch, d].
class AttentionPool final : public Layer {
 public:
  AttentionPool(std::size_t dim, std::size_t attention_dim);

  std::string_view kind() const override { return "attention_pool"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;
  std::vector<Param*> params() override { return {&w_, &b_, &v_}; }
  void initialize(Rng& rng) override;

  // Attention weights of the last forward pass, [batch, time].
  const Tensor& weights() const { return alpha_; }
  Param& w() { return w_; }
  Param& b() { return b_; }
  Param& v() { return v_; }

 private:
  std::size_t dim_, attention_dim_;
  Param w_, b_, v_;
  Tensor input_;
  Tensor projected_;  // tanh(W h + b), [batch * time, a]
  Tensor alpha_;
};

}  // namespace serkit::nn

#endif  // SERKIT_NN_LAYERS_HPP_
