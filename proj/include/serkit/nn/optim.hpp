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

#ifndef SERKIT_NN_OPTIM_HPP_
#define SERKIT_NN_OPTIM_HPP_

#include <memory>
#include <string_view>
#include <vector>

#include "serkit/nn/layers.hpp"

namespace serkit::nn {

enum class OptimizerKind { sgd, adam };

OptimizerKind parse_optimizer(std::string_view name);
std::string_view optimizer_name(OptimizerKind kind);

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  // Applies one update to every parameter from its accumulated gradient.
  virtual void step(const std::vector<Param*>& params) = 0;
};

class Sgd final : public Optimizer {
 public:
  explicit Sgd(double learning_rate);
  void step(const std::vector<Param*>& params) override;

 private:
  double lr_;
};

class Adam final : public Optimizer {
 public:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  explicit Adam(double learning_rate);
  void step(const std::vector<Param*>& params) override;

 private:
  double lr_;
  long steps_ = 0;
  std::vector<Tensor> m_, v_;
};

std::unique_ptr<Optimizer> make_optimizer(OptimizerKind kind, double learning_rate);

// Rescales all gradients so their joint L2 norm is at most max_norm.
// Returns the norm before clipping. max_norm <= 0 disables clipping.
double clip_grad_norm(const std::vector<Param*>& params, double max_norm);

}  // namespace serkit::nn

#endif  // SERKIT_NN_OPTIM_HPP_
