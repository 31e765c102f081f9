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

#ifndef SERKIT_MODELS_HPP_
#define SERKIT_MODELS_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "serkit/matrix.hpp"
#include "serkit/nn/checkpoint.hpp"
#include "serkit/nn/layers.hpp"

namespace serkit {

inline constexpr std::size_t kNumClasses = 5;

enum class ModelKind { dnn_frames, blstm, attn_blstm, cnn_attn_blstm, dnn_func, cnn_func, svm_func };

std::string_view model_kind_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);
const std::vector<ModelKind>& all_model_kinds();
// Frame-level kinds consume [time, 52] matrices; the rest consume vectors.
bool is_frame_level(ModelKind kind);
bool has_attention(ModelKind kind);

struct ModelSpec {
  ModelKind kind = ModelKind::attn_blstm;
  std::size_t num_classes = kNumClasses;
  // Dense stacks (dnn_frames, dnn_func).
  std::vector<std::size_t> dense_sizes = {512, 256, 128};
  double dropout = 0.3;
  // Recurrent kinds.
  std::size_t lstm_hidden = 128;
  std::size_t attention_dim = 128;
  // cnn_attn_blstm front end.
  std::size_t conv_channels = 64;
  std::size_t conv_kernel = 5;
  std::size_t pool = 2;
  // cnn_func.
  std::size_t func_conv_channels = 32;
  std::size_t func_conv_kernel = 8;
  std::size_t func_conv_stride = 2;
  std::size_t func_conv_layers = 2;
  // svm_func.
  double svm_c = 1.0;
  std::size_t svm_epochs = 50;

  // Throws ConfigInvalid on out-of-range settings.
  void validate() const;
  bool operator==(const ModelSpec&) const = default;
};

nlohmann::json model_spec_to_json(const ModelSpec& spec);
// Missing keys keep their defaults; unknown keys are rejected.
ModelSpec model_spec_from_json(const nlohmann::json& j);

struct Prediction {
  int class_index = 0;
  std::vector<double> probabilities;
  std::vector<double> attention_weights;  // empty unless the model attends
};

// First index of the maximum.
int argmax(std::span<const double> values);

// Column-wise z-scoring fitted on training data only. Zero-variance columns
// keep unit scale so they map to 0.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<double> mean, std::vector<double> stddev);

  // Rows of every matrix are observations (frames or clips).
  static Standardizer fit(std::span<const Matrix> data);
  static Standardizer fit_rows(const Matrix& rows);

  bool empty() const { return mean_.empty(); }
  std::size_t dim() const { return mean_.size(); }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return std_; }
  // Applies in place over the trailing axis of a flat buffer.
  void apply(std::span<double> values) const;

 private:
  std::vector<double> mean_, std_;
};

// A layer stack with a softmax head. Inputs are batches of raw features:
// [batch, time, features] for frame-level kinds, [batch, d] otherwise.
class Model {
 public:
  // Throws IncompatibleShape when input_shape does not fit the kind.
  static Model build(const ModelSpec& spec, const nn::Shape& input_shape, std::uint64_t seed);
  static Model from_checkpoint(const nn::Checkpoint& ckpt);

  Model(Model&&) noexcept;
  Model& operator=(Model&&) noexcept;
  ~Model();

  const ModelSpec& spec() const { return spec_; }
  const nn::Shape& input_shape() const { return input_shape_; }

  Standardizer& standardizer() { return standardizer_; }
  const Standardizer& standardizer() const { return standardizer_; }

  // Logits [batch, classes]. Standardizes a copy of x first.
  nn::Tensor forward(const nn::Tensor& x, nn::Mode mode);
  void backward(const nn::Tensor& grad_logits);
  std::vector<nn::Param*> params();
  void zero_grad();
  std::size_t parameter_count();
  // Reseeds dropout streams, e.g. per epoch.
  void reseed_dropout(std::uint64_t seed);

  std::vector<Prediction> predict(const nn::Tensor& x);
  // Per-example output shapes after each layer, for inspection.
  std::vector<std::pair<std::string, nn::Shape>> layer_shapes() const;
  // Attention weights of the most recent forward pass, [batch, time'].
  const nn::Tensor* attention_weights() const;

  nn::Checkpoint state() const;
  // Throws BadCheckpoint when names or shapes differ.
  void load_state(const nn::Checkpoint& ckpt);

 private:
  Model() = default;

  ModelSpec spec_;
  nn::Shape input_shape_;
  std::vector<std::unique_ptr<nn::Layer>> layers_;
  Standardizer standardizer_;
  nn::AttentionPool* attention_ = nullptr;
};

// One-vs-rest linear SVMs trained with Pegasos-style subgradient steps on the
// L2-regularized hinge loss. Inputs are z-scored internally.
class SvmModel {
 public:
  SvmModel() = default;

  // Throws DegenerateLabels when fewer than two classes are present.
  static SvmModel train(const Matrix& features, std::span<const int> labels, double c, std::size_t epochs,
                        std::uint64_t seed, std::size_t num_classes = kNumClasses);

  std::size_t dim() const { return standardizer_.dim(); }
  std::vector<double> decision_values(std::span<const double> x) const;
  Prediction predict(std::span<const double> x) const;
  // Mean regularized hinge objective of class `cls` over the given rows.
  double objective(const Matrix& features, std::span<const int> labels, int cls) const;
  // One subgradient step for every class on a single example.
  void step(std::span<const double> x, int label, double learning_rate);

  nn::Checkpoint state() const;
  static SvmModel from_checkpoint(const nn::Checkpoint& ckpt);

 private:
  std::vector<double> standardized(std::span<const double> x) const;

  double lambda_ = 0.0;
  std::size_t num_classes_ = kNumClasses;
  Standardizer standardizer_;
  Matrix weights_;  // classes x (d + 1), last column is the bias
};

}  // namespace serkit

#endif  // SERKIT_MODELS_HPP_
