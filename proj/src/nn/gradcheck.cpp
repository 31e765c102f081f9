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

#include "serkit/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace serkit::nn {

double relative_error(double analytic, double numeric, double floor) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

std::vector<double> numerical_gradient(const std::function<double()>& f, std::span<double> x, double step) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + step;
    const double up = f();
    x[i] = saved - step;
    const double down = f();
    x[i] = saved;
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

GradCheckReport check_layer_gradients(Layer& layer, const Tensor& x, Mode mode, Rng& rng, double step) {
  Tensor input = x;
  Tensor probe = layer.forward(input, mode);
  Tensor r(probe.shape());
  for (double& v : r.values()) v = rng.uniform(-1.0, 1.0);

  auto loss = [&] {
    const Tensor y = layer.forward(input, mode);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * r[i];
    return s;
  };

  layer.zero_grad();
  layer.forward(input, mode);
  const Tensor dx = layer.backward(r);
  std::vector<Tensor> param_grads;
  for (Param* p : layer.params()) param_grads.push_back(p->grad);

  GradCheckReport report;
  const auto num_dx = numerical_gradient(loss, input.values(), step);
  for (std::size_t i = 0; i < num_dx.size(); ++i) {
    const double e = relative_error(dx[i], num_dx[i]);
    if (e > report.max_input_error) {
      report.max_input_error = e;
      if (e >= report.max_param_error) report.worst = "input[" + std::to_string(i) + "]";
    }
  }
  const auto params = layer.params();
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto num = numerical_gradient(loss, params[k]->value.values(), step);
    for (std::size_t i = 0; i < num.size(); ++i) {
      const double e = relative_error(param_grads[k][i], num[i]);
      if (e > report.max_param_error) {
        report.max_param_error = e;
        if (e >= report.max_input_error) report.worst = params[k]->name + "[" + std::to_string(i) + "]";
      }
    }
  }
  return report;
}

}  // namespace serkit::nn
