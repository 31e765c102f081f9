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

#ifndef SERKIT_NN_LOSS_HPP_
#define SERKIT_NN_LOSS_HPP_

#include <span>

#include "serkit/nn/tensor.hpp"

namespace serkit::nn {

// Row-wise softmax of [batch, classes] logits.
Tensor softmax(const Tensor& logits);

struct LossResult {
  double loss = 0.0;
  Tensor grad;  // dloss/dlogits, [batch, classes]
};

// Mean negative log-likelihood over the batch, log-sum-exp stabilized.
LossResult softmax_cross_entropy(const Tensor& logits, std::span<const int> labels);

}  // namespace serkit::nn

#endif  // SERKIT_NN_LOSS_HPP_
