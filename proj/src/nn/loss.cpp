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

#include "serkit/nn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "serkit/error.hpp"

namespace serkit::nn {

Tensor softmax(const Tensor& logits) {
  if (logits.rank() != 2) throw Error(Errc::shape_mismatch, "softmax expects [batch, classes]");
  const std::size_t batch = logits.dim(0), classes = logits.dim(1);
  Tensor p(logits.shape());
  for (std::size_t b = 0; b < batch; ++b) {
    const double* z = logits.data() + b * classes;
    const double peak = *std::max_element(z, z + classes);
    double total = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      p.at(b, c) = std::exp(z[c] - peak);
      total += p.at(b, c);
    }
    for (std::size_t c = 0; c < classes; ++c) p.at(b, c) /= total;
  }
  return p;
}

LossResult softmax_cross_entropy(const Tensor& logits, std::span<const int> labels) {
  if (logits.rank() != 2) throw Error(Errc::shape_mismatch, "cross entropy expects [batch, classes]");
  const std::size_t batch = logits.dim(0), classes = logits.dim(1);
  if (labels.size() != batch) {
    throw Error(Errc::shape_mismatch, std::to_string(labels.size()) + " labels for batch of " + std::to_string(batch));
  }
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= classes) {
      throw Error(Errc::label_out_of_range, "label " + std::to_string(y) + " outside [0, " +
                                               std::to_string(classes) + ")");
    }
  }
  LossResult r;
  r.grad = Tensor(logits.shape());
  const double inv_batch = 1.0 / static_cast<double>(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    const double* z = logits.data() + b * classes;
    const double peak = *std::max_element(z, z + classes);
    double total = 0.0;
    for (std::size_t c = 0; c < classes; ++c) total += std::exp(z[c] - peak);
    const double log_norm = peak + std::log(total);
    const auto y = static_cast<std::size_t>(labels[b]);
    r.loss += log_norm - z[y];
    for (std::size_t c = 0; c < classes; ++c) {
      r.grad.at(b, c) = (std::exp(z[c] - log_norm) - (c == y ? 1.0 : 0.0)) * inv_batch;
    }
  }
  r.loss *= inv_batch;
  if (!std::isfinite(r.loss)) throw Error(Errc::non_finite, "cross entropy loss");
  require_finite(r.grad, "cross entropy gradient");
  return r;
}

}  // namespace serkit::nn
