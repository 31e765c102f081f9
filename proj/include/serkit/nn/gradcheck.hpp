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

#ifndef SERKIT_NN_GRADCHECK_HPP_
#define SERKIT_NN_GRADCHECK_HPP_

#include <algorithm>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "serkit/nn/layers.hpp"

namespace serkit::nn {

inline constexpr double kGradCheckStep = 1e-5;
inline constexpr double kRelativeErrorFloor = 1e-6;

// |a - n| / max(|a|, |n|, floor)
double relative_error(double analytic, double numeric, double floor = kRelativeErrorFloor);

// Central differences of f with respect to each element of x. x is restored.
std::vector<double> numerical_gradient(const std::function<double()>& f, std::span<double> x,
                                       double step = kGradCheckStep);

struct GradCheckReport {
  double max_input_error = 0.0;
  double max_param_error = 0.0;
  std::string worst;  // "input[i]" or "<param>[i]"

  double max_error() const { return std::max(max_input_error, max_param_error); }
};

// Checks a layer against the scalar loss sum(forward(x) * r) for a random
// projection r. The layer must be deterministic under `mode`.
GradCheckReport check_layer_gradients(Layer& layer, const Tensor& x, Mode mode, Rng& rng,
                                      double step = kGradCheckStep);

}  // namespace serkit::nn

#endif  // SERKIT_NN_GRADCHECK_HPP_
