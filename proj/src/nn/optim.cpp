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

#include "serkit/nn/optim.hpp"

#include <cmath>

#include "serkit/error.hpp"

namespace serkit::nn {

namespace {

void check_learning_rate(double lr) {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw Error(Errc::config_invalid, "learning rate must be > 0");
}

void check_param(const Param& p) {
  if (p.value.shape() != p.grad.shape()) {
    throw Error(Errc::shape_mismatch, "parameter '" + p.name + "' " + shape_string(p.value.shape()) +
                                          " has gradient " + shape_string(p.grad.shape()));
  }
}

}  // namespace

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::sgd;
  if (name == "adam") return OptimizerKind::adam;
  throw Error(Errc::config_invalid, "unknown optimizer '" + std::string(name) + "'");
}

std::string_view optimizer_name(OptimizerKind kind) { return kind == OptimizerKind::sgd ? "sgd" : "adam"; }

Sgd::Sgd(double learning_rate) : lr_(learning_rate) { check_learning_rate(learning_rate); }

void Sgd::step(const std::vector<Param*>& params) {
  for (Param* p : params) check_param(*p);
  for (Param* p : params) {
    for (std::size_t i = 0; i < p->value.size(); ++i) p->value[i] -= lr_ * p->grad[i];
    require_finite(p->value, "sgd step");
  }
}

Adam::Adam(double learning_rate) : lr_(learning_rate) { check_learning_rate(learning_rate); }

void Adam::step(const std::vector<Param*>& params) {
  for (Param* p : params) check_param(*p);
  if (m_.empty()) {
    for (Param* p : params) {
      m_.emplace_back(p->value.shape());
      v_.emplace_back(p->value.shape());
    }
  }
  if (m_.size() != params.size()) throw Error(Errc::shape_mismatch, "optimizer bound to a different parameter set");
  ++steps_;
  const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(steps_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Param& p = *params[k];
    if (m_[k].shape() != p.value.shape()) {
      throw Error(Errc::shape_mismatch, "optimizer state for '" + p.name + "' has a different shape");
    }
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      m_[k][i] = kBeta1 * m_[k][i] + (1.0 - kBeta1) * g;
      v_[k][i] = kBeta2 * v_[k][i] + (1.0 - kBeta2) * g * g;
      const double m_hat = m_[k][i] / c1;
      const double v_hat = v_[k][i] / c2;
      p.value[i] -= lr_ * m_hat / (std::sqrt(v_hat) + kEpsilon);
    }
    require_finite(p.value, "adam step");
  }
}

std::unique_ptr<Optimizer> make_optimizer(OptimizerKind kind, double learning_rate) {
  if (kind == OptimizerKind::sgd) return std::make_unique<Sgd>(learning_rate);
  return std::make_unique<Adam>(learning_rate);
}

double clip_grad_norm(const std::vector<Param*>& params, double max_norm) {
  double sq = 0.0;
  for (const Param* p : params) {
    for (double g : p->grad.values()) sq += g * g;
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (Param* p : params) {
      for (double& g : p->grad.values()) g *= scale;
    }
  }
  return norm;
}

}  // namespace serkit::nn
