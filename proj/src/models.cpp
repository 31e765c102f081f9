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

#include "serkit/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "serkit/error.hpp"
#include "serkit/nn/loss.hpp"
#include "serkit/rng.hpp"

namespace serkit {

using nn::Mode;
using nn::Shape;
using nn::Tensor;

namespace {

constexpr std::array<std::string_view, 7> kKindNames = {"dnn_frames", "blstm",    "attn_blstm", "cnn_attn_blstm",
                                                        "dnn_func",   "cnn_func", "svm_func"};

constexpr std::string_view kModelFormat = "serkit-model";
constexpr std::string_view kSvmFormat = "serkit-svm";

void invalid(const std::string& what) { throw Error(Errc::config_invalid, "model spec: " + what); }

nlohmann::json parse_metadata(const nn::Checkpoint& ckpt, std::string_view format) {
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(ckpt.metadata);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::bad_checkpoint, std::string("unreadable checkpoint metadata: ") + e.what());
  }
  if (!meta.is_object() || meta.value("format", "") != format) {
    throw Error(Errc::bad_checkpoint, "checkpoint is not a " + std::string(format) + " file");
  }
  return meta;
}

void put_standardizer(nn::Checkpoint& ckpt, const Standardizer& s) {
  if (s.empty()) return;
  ckpt.tensors.emplace_back("input.mean", Tensor({s.dim()}, s.mean()));
  ckpt.tensors.emplace_back("input.std", Tensor({s.dim()}, s.stddev()));
}

Standardizer get_standardizer(const nn::Checkpoint& ckpt) {
  const Tensor* mean = ckpt.find("input.mean");
  const Tensor* stddev = ckpt.find("input.std");
  if (!mean && !stddev) return {};
  if (!mean || !stddev || mean->shape() != stddev->shape() || mean->rank() != 1) {
    throw Error(Errc::bad_checkpoint, "incomplete input standardizer");
  }
  return Standardizer(mean->values(), stddev->values());
}

}  // namespace

std::string_view model_kind_name(ModelKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

ModelKind parse_model_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<ModelKind>(i);
  }
  throw Error(Errc::config_invalid, "unknown model kind '" + std::string(name) + "'");
}

const std::vector<ModelKind>& all_model_kinds() {
  static const std::vector<ModelKind> kinds = {ModelKind::dnn_frames, ModelKind::blstm,    ModelKind::attn_blstm,
                                               ModelKind::cnn_attn_blstm, ModelKind::dnn_func, ModelKind::cnn_func,
                                               ModelKind::svm_func};
  return kinds;
}

bool is_frame_level(ModelKind kind) {
  return kind == ModelKind::dnn_frames || kind == ModelKind::blstm || kind == ModelKind::attn_blstm ||
         kind == ModelKind::cnn_attn_blstm;
}

bool has_attention(ModelKind kind) { return kind == ModelKind::attn_blstm || kind == ModelKind::cnn_attn_blstm; }

void ModelSpec::validate() const {
  if (num_classes < 2) invalid("num_classes must be >= 2");
  if (!(dropout >= 0.0 && dropout < 1.0)) invalid("dropout must be in [0, 1)");
  for (std::size_t s : dense_sizes) {
    if (s == 0) invalid("dense sizes must be >= 1");
  }
  if (lstm_hidden == 0 || attention_dim == 0) invalid("lstm_hidden and attention_dim must be >= 1");
  if (conv_channels == 0 || conv_kernel == 0 || pool == 0) invalid("conv settings must be >= 1");
  if (func_conv_channels == 0 || func_conv_kernel == 0 || func_conv_stride == 0 || func_conv_layers == 0) {
    invalid("functional conv settings must be >= 1");
  }
  if (!(svm_c > 0.0) || svm_epochs == 0) invalid("svm_c must be > 0 and svm_epochs >= 1");
}

nlohmann::json model_spec_to_json(const ModelSpec& s) {
  return {
      {"kind", model_kind_name(s.kind)},
      {"num_classes", s.num_classes},
      {"dense_sizes", s.dense_sizes},
      {"dropout", s.dropout},
      {"lstm_hidden", s.lstm_hidden},
      {"attention_dim", s.attention_dim},
      {"conv_channels", s.conv_channels},
      {"conv_kernel", s.conv_kernel},
      {"pool", s.pool},
      {"func_conv_channels", s.func_conv_channels},
      {"func_conv_kernel", s.func_conv_kernel},
      {"func_conv_stride", s.func_conv_stride},
      {"func_conv_layers", s.func_conv_layers},
      {"svm_c", s.svm_c},
      {"svm_epochs", s.svm_epochs},
  };
}

ModelSpec model_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) invalid("expected an object");
  const nlohmann::json defaults = model_spec_to_json(ModelSpec{});
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) invalid("unknown key '" + key + "'");
  }
  ModelSpec s;
  try {
    if (j.contains("kind")) s.kind = parse_model_kind(j.at("kind").get<std::string>());
    auto read = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    read("num_classes", s.num_classes);
    read("dense_sizes", s.dense_sizes);
    read("dropout", s.dropout);
    read("lstm_hidden", s.lstm_hidden);
    read("attention_dim", s.attention_dim);
    read("conv_channels", s.conv_channels);
    read("conv_kernel", s.conv_kernel);
    read("pool", s.pool);
    read("func_conv_channels", s.func_conv_channels);
    read("func_conv_kernel", s.func_conv_kernel);
    read("func_conv_stride", s.func_conv_stride);
    read("func_conv_layers", s.func_conv_layers);
    read("svm_c", s.svm_c);
    read("svm_epochs", s.svm_epochs);
  } catch (const nlohmann::json::exception& e) {
    invalid(e.what());
  }
  s.validate();
  return s;
}

int argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return static_cast<int>(best);
}

// ---------------------------------------------------------------- Standardizer

Standardizer::Standardizer(std::vector<double> mean, std::vector<double> stddev)
    : mean_(std::move(mean)), std_(std::move(stddev)) {
  if (mean_.size() != std_.size()) throw Error(Errc::shape_mismatch, "standardizer mean/std sizes differ");
  for (double& s : std_) {
    if (!(s > 0.0) || !std::isfinite(s)) s = 1.0;
  }
}

Standardizer Standardizer::fit(std::span<const Matrix> data) {
  if (data.empty()) throw Error(Errc::empty_input, "cannot fit a standardizer on no data");
  const std::size_t d = data.front().cols();
  std::vector<double> mean(d, 0.0), m2(d, 0.0);
  double count = 0.0;
  // Welford per column, streaming over rows of every matrix.
  for (const Matrix& m : data) {
    if (m.cols() != d) throw Error(Errc::shape_mismatch, "standardizer inputs of differing width");
    for (std::size_t r = 0; r < m.rows(); ++r) {
      count += 1.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double x = m(r, c);
        const double delta = x - mean[c];
        mean[c] += delta / count;
        m2[c] += delta * (x - mean[c]);
      }
    }
  }
  if (count == 0.0) throw Error(Errc::empty_input, "cannot fit a standardizer on zero rows");
  std::vector<double> stddev(d);
  for (std::size_t c = 0; c < d; ++c) stddev[c] = std::sqrt(m2[c] / count);
  return Standardizer(std::move(mean), std::move(stddev));
}

Standardizer Standardizer::fit_rows(const Matrix& rows) { return fit(std::span<const Matrix>(&rows, 1)); }

void Standardizer::apply(std::span<double> values) const {
  if (empty()) return;
  const std::size_t d = dim();
  if (values.size() % d != 0) throw Error(Errc::incompatible_shape, "input width does not match standardizer");
  for (std::size_t i = 0; i < values.size(); i += d) {
    for (std::size_t c = 0; c < d; ++c) values[i + c] = (values[i + c] - mean_[c]) / std_[c];
  }
}

// ---------------------------------------------------------------- Model

Model::Model(Model&&) noexcept = default;
Model& Model::operator=(Model&&) noexcept = default;
Model::~Model() = default;

Model Model::build(const ModelSpec& spec, const Shape& input_shape, std::uint64_t seed) {
  spec.validate();
  if (spec.kind == ModelKind::svm_func) {
    throw Error(Errc::config_invalid, "svm_func is not a layer model; use SvmModel");
  }
  const bool frames = is_frame_level(spec.kind);
  if (frames && (input_shape.size() != 2 || input_shape[0] == 0 || input_shape[1] == 0)) {
    throw Error(Errc::incompatible_shape, std::string(model_kind_name(spec.kind)) +
                                              " expects [frames, features], got " + nn::shape_string(input_shape));
  }
  if (!frames && (input_shape.size() != 1 || input_shape[0] == 0)) {
    throw Error(Errc::incompatible_shape, std::string(model_kind_name(spec.kind)) + " expects [d], got " +
                                              nn::shape_string(input_shape));
  }

  Model m;
  m.spec_ = spec;
  m.input_shape_ = input_shape;
  std::uint64_t dropout_tag = 0;
  auto add = [&](std::unique_ptr<nn::Layer> layer) { m.layers_.push_back(std::move(layer)); };
  auto dense_stack = [&](std::size_t in) {
    for (std::size_t width : spec.dense_sizes) {
      add(std::make_unique<nn::Dense>(in, width));
      add(std::make_unique<nn::BatchNorm>(width));
      add(std::make_unique<nn::Relu>());
      add(std::make_unique<nn::Dropout>(spec.dropout, mix_seed(seed, 1000 + dropout_tag++)));
      in = width;
    }
    add(std::make_unique<nn::Dense>(in, spec.num_classes));
  };
  auto recurrent_head = [&](std::size_t features, bool attend) {
    add(std::make_unique<nn::Blstm>(features, spec.lstm_hidden));
    if (attend) {
      auto att = std::make_unique<nn::AttentionPool>(2 * spec.lstm_hidden, spec.attention_dim);
      m.attention_ = att.get();
      add(std::move(att));
    } else {
      add(std::make_unique<nn::BlstmFinalState>());
    }
    add(std::make_unique<nn::Dense>(2 * spec.lstm_hidden, spec.num_classes));
  };

  switch (spec.kind) {
    case ModelKind::dnn_frames:
      add(std::make_unique<nn::Flatten>());
      dense_stack(nn::shape_size(input_shape));
      break;
    case ModelKind::dnn_func:
      dense_stack(input_shape[0]);
      break;
    case ModelKind::blstm:
      recurrent_head(input_shape[1], false);
      break;
    case ModelKind::attn_blstm:
      recurrent_head(input_shape[1], true);
      break;
    case ModelKind::cnn_attn_blstm:
      add(std::make_unique<nn::Conv1d>(input_shape[1], spec.conv_channels, spec.conv_kernel));
      add(std::make_unique<nn::Relu>());
      add(std::make_unique<nn::MaxPool1d>(spec.pool, spec.pool));
      add(std::make_unique<nn::Conv1d>(spec.conv_channels, spec.conv_channels, spec.conv_kernel));
      add(std::make_unique<nn::Relu>());
      add(std::make_unique<nn::MaxPool1d>(spec.pool, spec.pool));
      recurrent_head(spec.conv_channels, true);
      break;
    case ModelKind::cnn_func: {
      add(std::make_unique<nn::Reshape>(Shape{input_shape[0], 1}));
      std::size_t channels = 1;
      for (std::size_t i = 0; i < spec.func_conv_layers; ++i) {
        add(std::make_unique<nn::Conv1d>(channels, spec.func_conv_channels, spec.func_conv_kernel,
                                         spec.func_conv_stride));
        add(std::make_unique<nn::Relu>());
        channels = spec.func_conv_channels;
      }
      add(std::make_unique<nn::GlobalMaxPool>());
      add(std::make_unique<nn::Dense>(channels, spec.num_classes));
      break;
    }
    case ModelKind::svm_func:
      break;
  }

  // Shape propagation doubles as construction-time validation.
  Shape shape = input_shape;
  for (const auto& layer : m.layers_) {
    try {
      shape = layer->output_shape(shape);
    } catch (const Error& e) {
      throw Error(Errc::incompatible_shape, std::string(model_kind_name(spec.kind)) + " over " +
                                                nn::shape_string(input_shape) + ": " + e.what());
    }
  }

  Rng rng(seed);
  for (const auto& layer : m.layers_) layer->initialize(rng);
  return m;
}

Model Model::from_checkpoint(const nn::Checkpoint& ckpt) {
  const auto meta = parse_metadata(ckpt, kModelFormat);
  ModelSpec spec;
  Shape shape;
  try {
    spec = model_spec_from_json(meta.at("spec"));
    shape = meta.at("input_shape").get<Shape>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::bad_checkpoint, std::string("checkpoint metadata: ") + e.what());
  }
  Model m = build(spec, shape, 0);
  m.load_state(ckpt);
  return m;
}

Tensor Model::forward(const Tensor& x, Mode mode) {
  Shape expected = input_shape_;
  if (x.rank() != expected.size() + 1 || !std::equal(expected.begin(), expected.end(), x.shape().begin() + 1)) {
    throw Error(Errc::incompatible_shape, "model expects [batch, " + nn::shape_string(expected).substr(1) +
                                              " input, got " + nn::shape_string(x.shape()));
  }
  Tensor h = x;
  standardizer_.apply(h.values());
  for (const auto& layer : layers_) h = layer->forward(h, mode);
  return h;
}

void Model::backward(const Tensor& grad_logits) {
  Tensor g = grad_logits;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
}

std::vector<nn::Param*> Model::params() {
  std::vector<nn::Param*> out;
  for (const auto& layer : layers_) {
    for (nn::Param* p : layer->params()) out.push_back(p);
  }
  return out;
}

void Model::zero_grad() {
  for (const auto& layer : layers_) layer->zero_grad();
}

std::size_t Model::parameter_count() {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer->parameter_count();
  return n;
}

void Model::reseed_dropout(std::uint64_t seed) {
  std::uint64_t tag = 0;
  for (const auto& layer : layers_) {
    if (auto* d = dynamic_cast<nn::Dropout*>(layer.get())) d->reseed(mix_seed(seed, 1000 + tag++));
  }
}

std::vector<Prediction> Model::predict(const Tensor& x) {
  const Tensor probs = nn::softmax(forward(x, Mode::eval));
  const std::size_t batch = probs.dim(0), classes = probs.dim(1);
  std::vector<Prediction> out(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    out[b].probabilities.assign(probs.data() + b * classes, probs.data() + (b + 1) * classes);
    out[b].class_index = argmax(out[b].probabilities);
    if (attention_) {
      const Tensor& w = attention_->weights();
      const std::size_t steps = w.dim(1);
      out[b].attention_weights.assign(w.data() + b * steps, w.data() + (b + 1) * steps);
    }
  }
  return out;
}

std::vector<std::pair<std::string, Shape>> Model::layer_shapes() const {
  std::vector<std::pair<std::string, Shape>> out;
  Shape shape = input_shape_;
  for (const auto& layer : layers_) {
    shape = layer->output_shape(shape);
    out.emplace_back(std::string(layer->kind()), shape);
  }
  return out;
}

const Tensor* Model::attention_weights() const { return attention_ ? &attention_->weights() : nullptr; }

nn::Checkpoint Model::state() const {
  nn::Checkpoint ckpt;
  nlohmann::json meta = {{"format", kModelFormat},
                         {"spec", model_spec_to_json(spec_)},
                         {"input_shape", input_shape_}};
  ckpt.metadata = meta.dump();
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const std::string prefix = "layers." + std::to_string(i) + "." + std::string(layers_[i]->kind()) + ".";
    std::size_t slot = 0;
    for (nn::Param* p : layers_[i]->params()) {
      // Blstm repeats parameter names across its two directions.
      ckpt.tensors.emplace_back(prefix + std::to_string(slot++) + "." + p->name, p->value);
    }
    for (const auto& [name, t] : layers_[i]->buffers()) ckpt.tensors.emplace_back(prefix + name, *t);
  }
  put_standardizer(ckpt, standardizer_);
  return ckpt;
}

void Model::load_state(const nn::Checkpoint& ckpt) {
  const nn::Checkpoint expected = state();
  std::set<std::string> known;
  for (const auto& [name, t] : expected.tensors) {
    if (name.rfind("input.", 0) == 0) continue;
    known.insert(name);
    const Tensor* src = ckpt.find(name);
    if (!src) throw Error(Errc::bad_checkpoint, "checkpoint lacks tensor '" + name + "'");
    if (src->shape() != t.shape()) {
      throw Error(Errc::bad_checkpoint, "tensor '" + name + "' has shape " + nn::shape_string(src->shape()) +
                                            ", model needs " + nn::shape_string(t.shape()));
    }
  }
  for (const auto& [name, t] : ckpt.tensors) {
    if (name.rfind("input.", 0) != 0 && !known.count(name)) {
      throw Error(Errc::bad_checkpoint, "unexpected tensor '" + name + "'");
    }
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const std::string prefix = "layers." + std::to_string(i) + "." + std::string(layers_[i]->kind()) + ".";
    std::size_t slot = 0;
    for (nn::Param* p : layers_[i]->params()) p->value = *ckpt.find(prefix + std::to_string(slot++) + "." + p->name);
    for (const auto& [name, t] : layers_[i]->buffers()) *t = *ckpt.find(prefix + name);
  }
  Standardizer s = get_standardizer(ckpt);
  if (!s.empty() && s.dim() != input_shape_.back()) {
    throw Error(Errc::bad_checkpoint, "standardizer width does not match the model input");
  }
  standardizer_ = std::move(s);
}

// ---------------------------------------------------------------- SvmModel

SvmModel SvmModel::train(const Matrix& features, std::span<const int> labels, double c, std::size_t epochs,
                         std::uint64_t seed, std::size_t num_classes) {
  const std::size_t n = features.rows();
  if (labels.size() != n) throw Error(Errc::length_mismatch, "features and labels differ in length");
  if (n == 0) throw Error(Errc::empty_input, "no training rows");
  if (!(c > 0.0) || epochs == 0) throw Error(Errc::config_invalid, "svm needs C > 0 and epochs >= 1");
  std::set<int> present;
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      throw Error(Errc::label_out_of_range, "label " + std::to_string(y));
    }
    present.insert(y);
  }
  if (present.size() < 2) throw Error(Errc::degenerate_labels, "svm training needs at least two classes");

  SvmModel m;
  m.num_classes_ = num_classes;
  m.standardizer_ = Standardizer::fit_rows(features);
  m.lambda_ = 1.0 / (c * static_cast<double>(n));
  const std::size_t d = features.cols();
  m.weights_ = Matrix(num_classes, d + 1);

  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = m.standardized(features.row(i));

  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (m.lambda_ * static_cast<double>(t));
      const auto& x = rows[i];
      for (std::size_t k = 0; k < num_classes; ++k) {
        const auto w = m.weights_.row(k);
        const double y = labels[i] == static_cast<int>(k) ? 1.0 : -1.0;
        double score = w[d];
        for (std::size_t j = 0; j < d; ++j) score += w[j] * x[j];
        const double shrink = 1.0 - eta * m.lambda_;
        for (double& v : w) v *= shrink;
        if (y * score < 1.0) {
          for (std::size_t j = 0; j < d; ++j) w[j] += eta * y * x[j];
          w[d] += eta * y;
        }
      }
    }
  }
  return m;
}

std::vector<double> SvmModel::standardized(std::span<const double> x) const {
  if (x.size() != standardizer_.dim()) {
    throw Error(Errc::incompatible_shape, "svm expects d=" + std::to_string(standardizer_.dim()) + ", got " +
                                              std::to_string(x.size()));
  }
  std::vector<double> out(x.begin(), x.end());
  standardizer_.apply(out);
  return out;
}

std::vector<double> SvmModel::decision_values(std::span<const double> x) const {
  const auto z = standardized(x);
  const std::size_t d = z.size();
  std::vector<double> out(num_classes_);
  for (std::size_t k = 0; k < num_classes_; ++k) {
    const auto w = weights_.row(k);
    double s = w[d];
    for (std::size_t j = 0; j < d; ++j) s += w[j] * z[j];
    out[k] = s;
  }
  return out;
}

Prediction SvmModel::predict(std::span<const double> x) const {
  const auto scores = decision_values(x);
  Prediction p;
  p.class_index = argmax(scores);
  const Tensor probs = nn::softmax(Tensor({1, scores.size()}, scores));
  p.probabilities = probs.values();
  return p;
}

double SvmModel::objective(const Matrix& features, std::span<const int> labels, int cls) const {
  const auto w = weights_.row(static_cast<std::size_t>(cls));
  double reg = 0.0;
  for (double v : w) reg += v * v;
  double hinge = 0.0;
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const double y = labels[i] == cls ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - y * decision_values(features.row(i))[static_cast<std::size_t>(cls)]);
  }
  return 0.5 * lambda_ * reg + hinge / static_cast<double>(features.rows());
}

void SvmModel::step(std::span<const double> x, int label, double learning_rate) {
  const auto z = standardized(x);
  const std::size_t d = z.size();
  const auto scores = decision_values(x);
  for (std::size_t k = 0; k < num_classes_; ++k) {
    const auto w = weights_.row(k);
    const double y = label == static_cast<int>(k) ? 1.0 : -1.0;
    const bool active = y * scores[k] < 1.0;
    for (double& v : w) v *= 1.0 - learning_rate * lambda_;
    if (active) {
      for (std::size_t j = 0; j < d; ++j) w[j] += learning_rate * y * z[j];
      w[d] += learning_rate * y;
    }
  }
}

nn::Checkpoint SvmModel::state() const {
  nn::Checkpoint ckpt;
  const nlohmann::json meta = {{"format", kSvmFormat}, {"lambda", lambda_}, {"num_classes", num_classes_}};
  ckpt.metadata = meta.dump();
  ckpt.tensors.emplace_back("svm.weights", Tensor({weights_.rows(), weights_.cols()}, weights_.data()));
  put_standardizer(ckpt, standardizer_);
  return ckpt;
}

SvmModel SvmModel::from_checkpoint(const nn::Checkpoint& ckpt) {
  const auto meta = parse_metadata(ckpt, kSvmFormat);
  SvmModel m;
  m.lambda_ = meta.value("lambda", 0.0);
  m.num_classes_ = meta.value("num_classes", kNumClasses);
  m.standardizer_ = get_standardizer(ckpt);
  const Tensor* w = ckpt.find("svm.weights");
  if (!w || w->rank() != 2 || w->dim(0) != m.num_classes_ || w->dim(1) != m.standardizer_.dim() + 1) {
    throw Error(Errc::bad_checkpoint, "svm weights missing or misshapen");
  }
  m.weights_ = Matrix(w->dim(0), w->dim(1));
  m.weights_.data() = w->values();
  return m;
}

}  // namespace serkit
