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


#include <doctest.h>

#include <cmath>

#include "serkit/error.hpp"
#include "serkit/models.hpp"
#include "serkit/nn/loss.hpp"
#include "serkit/nn/optim.hpp"
#include "serkit/rng.hpp"

using namespace serkit;
using nn::Mode;
using nn::Shape;
using nn::Tensor;

namespace {

Tensor random_tensor(Shape shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.normal();
  return t;
}

ModelSpec small_spec(ModelKind kind) {
  ModelSpec s;
  s.kind = kind;
  s.dense_sizes = {16, 8};
  s.lstm_hidden = 6;
  s.attention_dim = 5;
  s.conv_channels = 4;
  s.func_conv_channels = 3;
  return s;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::io_error;
}

}  // namespace

TEST_CASE("spec: names, json round trip, validation") {
  for (ModelKind k : all_model_kinds()) CHECK(parse_model_kind(model_kind_name(k)) == k);
  CHECK(code_of([] { parse_model_kind("rnn"); }) == Errc::config_invalid);
  ModelSpec s = small_spec(ModelKind::cnn_func);
  s.dropout = 0.1;
  CHECK(model_spec_from_json(model_spec_to_json(s)) == s);
  CHECK(model_spec_from_json(nlohmann::json::object()) == ModelSpec{});
  CHECK(code_of([] { model_spec_from_json({{"hidden", 3}}); }) == Errc::config_invalid);
  CHECK(code_of([] { model_spec_from_json({{"dropout", 1.0}}); }) == Errc::config_invalid);
  CHECK(is_frame_level(ModelKind::attn_blstm));
  CHECK_FALSE(is_frame_level(ModelKind::svm_func));
  CHECK(has_attention(ModelKind::cnn_attn_blstm));
  CHECK_FALSE(has_attention(ModelKind::blstm));
}

TEST_CASE("dnn_func: parameter count closed form at d = 624") {
  ModelSpec s;
  s.kind = ModelKind::dnn_func;
  auto m = Model::build(s, {624}, 1);
  // Dense (in*out + out) plus batch-norm scale and shift per hidden layer.
  const std::size_t expected = (624 * 512 + 512 + 2 * 512) + (512 * 256 + 256 + 2 * 256) +
                               (256 * 128 + 128 + 2 * 128) + (128 * 5 + 5);
  CHECK(m.parameter_count() == expected);
}

TEST_CASE("build: shape propagation per kind") {
  Rng rng(3);
  const Shape frames = {40, 52};
  for (ModelKind k : {ModelKind::dnn_frames, ModelKind::blstm, ModelKind::attn_blstm, ModelKind::cnn_attn_blstm}) {
    auto m = Model::build(small_spec(k), frames, 7);
    const auto shapes = m.layer_shapes();
    CHECK(shapes.back().second == Shape{5});
    const Tensor y = m.forward(random_tensor({3, 40, 52}, rng), Mode::eval);
    CHECK(y.shape() == Shape{3, 5});
  }
  auto cnn = Model::build(small_spec(ModelKind::cnn_attn_blstm), {469, 52}, 7);
  // 469 -> conv 465 -> pool 232 -> conv 228 -> pool 114.
  bool saw_114 = false;
  for (const auto& [kind, shape] : cnn.layer_shapes()) saw_114 |= kind == "blstm" && shape == Shape{114, 12};
  CHECK(saw_114);

  for (ModelKind k : {ModelKind::dnn_func, ModelKind::cnn_func}) {
    auto m = Model::build(small_spec(k), {624}, 7);
    CHECK(m.forward(random_tensor({2, 624}, rng), Mode::eval).shape() == Shape{2, 5});
  }
  CHECK(code_of([] { Model::build(small_spec(ModelKind::dnn_func), {10, 52}, 1); }) == Errc::incompatible_shape);
  CHECK(code_of([] { Model::build(small_spec(ModelKind::blstm), {52}, 1); }) == Errc::incompatible_shape);
  CHECK(code_of([] { Model::build(small_spec(ModelKind::cnn_func), {5}, 1); }) == Errc::incompatible_shape);
  CHECK(code_of([] { Model::build(small_spec(ModelKind::cnn_attn_blstm), {6, 52}, 1); }) ==
        Errc::incompatible_shape);
  auto m = Model::build(small_spec(ModelKind::dnn_func), {624}, 1);
  CHECK(code_of([&] { m.forward(Tensor({2, 88}), Mode::eval); }) == Errc::incompatible_shape);
}

TEST_CASE("predict: zero output layer gives uniform probabilities and class 0") {
  Rng rng(4);
  for (ModelKind k : {ModelKind::dnn_func, ModelKind::cnn_func}) {
    auto m = Model::build(small_spec(k), {64}, 2);
    auto params = m.params();
    // The final dense weight and bias are the last two parameters.
    params[params.size() - 1]->value.values().assign(params[params.size() - 1]->value.size(), 0.0);
    params[params.size() - 2]->value.values().assign(params[params.size() - 2]->value.size(), 0.0);
    const auto preds = m.predict(random_tensor({3, 64}, rng));
    for (const auto& p : preds) {
      CHECK(p.class_index == 0);
      for (double v : p.probabilities) CHECK(v == doctest::Approx(0.2).epsilon(1e-12));
    }
  }
}

TEST_CASE("predict: attention weights are a distribution over time") {
  Rng rng(5);
  auto m = Model::build(small_spec(ModelKind::attn_blstm), {30, 52}, 3);
  const auto preds = m.predict(random_tensor({2, 30, 52}, rng));
  for (const auto& p : preds) {
    REQUIRE(p.attention_weights.size() == 30);
    double sum = 0.0;
    for (double a : p.attention_weights) {
      CHECK(a >= 0.0);
      sum += a;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    double psum = 0.0;
    for (double v : p.probabilities) psum += v;
    CHECK(psum == doctest::Approx(1.0).epsilon(1e-12));
  }
  auto plain = Model::build(small_spec(ModelKind::blstm), {30, 52}, 3);
  CHECK(plain.predict(random_tensor({1, 30, 52}, rng)).front().attention_weights.empty());
  CHECK(plain.attention_weights() == nullptr);
}

TEST_CASE("training step: one example, small learning rate, loss decreases") {
  Rng rng(6);
  for (ModelKind k : {ModelKind::dnn_frames, ModelKind::attn_blstm, ModelKind::cnn_attn_blstm}) {
    auto m = Model::build(small_spec(k), {20, 52}, 11);
    const Tensor x = random_tensor({1, 20, 52}, rng);
    const std::vector<int> label = {3};
    const double before = nn::softmax_cross_entropy(m.forward(x, Mode::eval), label).loss;
    m.zero_grad();
    auto r = nn::softmax_cross_entropy(m.forward(x, Mode::eval), label);
    m.backward(r.grad);
    nn::Sgd(1e-4).step(m.params());
    const double after = nn::softmax_cross_entropy(m.forward(x, Mode::eval), label).loss;
    CHECK(after < before);
  }
}

TEST_CASE("seeding: same seed same weights, different seed different weights") {
  auto a = Model::build(small_spec(ModelKind::attn_blstm), {10, 52}, 42);
  auto b = Model::build(small_spec(ModelKind::attn_blstm), {10, 52}, 42);
  auto c = Model::build(small_spec(ModelKind::attn_blstm), {10, 52}, 43);
  CHECK(a.state() == b.state());
  CHECK_FALSE(a.state() == c.state());
}

TEST_CASE("checkpoint: round trip reproduces predictions exactly") {
  Rng rng(8);
  auto m = Model::build(small_spec(ModelKind::dnn_frames), {12, 52}, 9);
  std::vector<Matrix> train(3, Matrix(12, 52));
  for (auto& t : train) {
    for (double& v : t.data()) v = 5.0 + 2.0 * rng.normal();
  }
  m.standardizer() = Standardizer::fit(train);
  // Move batch-norm running statistics away from their initial values.
  m.forward(random_tensor({4, 12, 52}, rng), Mode::train);
  const Tensor x = random_tensor({2, 12, 52}, rng);
  const auto bytes = nn::encode_checkpoint(m.state());
  auto back = Model::from_checkpoint(nn::decode_checkpoint(bytes));
  CHECK(back.spec() == m.spec());
  CHECK(back.input_shape() == m.input_shape());
  CHECK(back.standardizer().mean() == m.standardizer().mean());
  const auto p = m.predict(x);
  const auto q = back.predict(x);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i].probabilities == q[i].probabilities);

  auto other = Model::build(small_spec(ModelKind::blstm), {12, 52}, 9);
  CHECK(code_of([&] { other.load_state(m.state()); }) == Errc::bad_checkpoint);
  nn::Checkpoint junk = m.state();
  junk.metadata = "{}";
  CHECK(code_of([&] { Model::from_checkpoint(junk); }) == Errc::bad_checkpoint);
}

TEST_CASE("standardizer: train statistics, zero variance columns") {
  Matrix rows(4, 3);
  for (std::size_t r = 0; r < 4; ++r) {
    rows(r, 0) = static_cast<double>(r);
    rows(r, 1) = 7.0;
    rows(r, 2) = 2.0 * static_cast<double>(r) - 1.0;
  }
  const auto s = Standardizer::fit_rows(rows);
  CHECK(s.mean()[0] == doctest::Approx(1.5));
  CHECK(s.stddev()[0] == doctest::Approx(std::sqrt(1.25)));
  CHECK(s.stddev()[1] == 1.0);
  std::vector<double> v = {1.5, 7.0, 2.0};
  s.apply(v);
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == 0.0);
  CHECK(v[2] == doctest::Approx(0.0));
  std::vector<double> wrong(4);
  CHECK(code_of([&] { s.apply(wrong); }) == Errc::incompatible_shape);
}

TEST_CASE("svm: separable blobs, degenerate labels, constant features") {
  Rng rng(12);
  const std::size_t per = 30, d = 8;
  Matrix x(5 * per, d);
  std::vector<int> y(5 * per);
  for (std::size_t i = 0; i < 5 * per; ++i) {
    y[i] = static_cast<int>(i / per);
    for (std::size_t j = 0; j < d; ++j) x(i, j) = 0.3 * rng.normal() + (j == static_cast<std::size_t>(y[i]) ? 4.0 : 0.0);
  }
  const auto svm = SvmModel::train(x, y, 1.0, 30, 1);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) correct += svm.predict(x.row(i)).class_index == y[i];
  CHECK(static_cast<double>(correct) / static_cast<double>(x.rows()) >= 0.95);
  const auto p = svm.predict(x.row(0));
  double sum = 0.0;
  for (double v : p.probabilities) sum += v;
  CHECK(sum == doctest::Approx(1.0));

  auto back = SvmModel::from_checkpoint(nn::decode_checkpoint(nn::encode_checkpoint(svm.state())));
  for (std::size_t i = 0; i < x.rows(); ++i) CHECK(back.decision_values(x.row(i)) == svm.decision_values(x.row(i)));

  const std::vector<int> one(5 * per, 2);
  CHECK(code_of([&] { SvmModel::train(x, one, 1.0, 5, 1); }) == Errc::degenerate_labels);
  std::vector<int> bad = y;
  bad[0] = 7;
  CHECK(code_of([&] { SvmModel::train(x, bad, 1.0, 5, 1); }) == Errc::label_out_of_range);

  Matrix same(10, 4, 0.5);
  std::vector<int> mostly(10, 1);
  for (std::size_t i = 0; i < 4; ++i) mostly[i] = static_cast<int>(i % 2 ? 3 : 4);
  const auto flat = SvmModel::train(same, mostly, 1.0, 20, 2);
  CHECK(flat.predict(same.row(0)).class_index == 1);
}

TEST_CASE("svm: subgradient steps lower the objective") {
  Rng rng(13);
  Matrix x(40, 3);
  std::vector<int> y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    y[i] = static_cast<int>(i % 2);
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.normal() + (y[i] ? 1.5 : -1.5);
  }
  auto svm = SvmModel::train(x, y, 1.0, 1, 3, 2);
  const double before = svm.objective(x, y, 1);
  for (int epoch = 0; epoch < 20; ++epoch) {
    for (std::size_t i = 0; i < 40; ++i) svm.step(x.row(i), y[i], 0.01);
  }
  CHECK(svm.objective(x, y, 1) <= before + 1e-9);
}
