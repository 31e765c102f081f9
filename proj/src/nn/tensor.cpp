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

#include "serkit/nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "serkit/error.hpp"

namespace serkit::nn {

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_size(shape_) != data_.size()) {
    throw Error(Errc::shape_mismatch, "shape " + shape_string(shape_) + " does not hold " +
                                          std::to_string(data_.size()) + " values");
  }
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Tensor Tensor::reshaped(Shape shape) const {
  if (shape_size(shape) != data_.size()) {
    throw Error(Errc::shape_mismatch, "cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
  }
  return Tensor(std::move(shape), data_);
}

bool all_finite(const Tensor& t) {
  return std::all_of(t.values().begin(), t.values().end(), [](double v) { return std::isfinite(v); });
}

void require_finite(const Tensor& t, std::string_view op) {
  if (!all_finite(t)) throw Error(Errc::non_finite, "non-finite value produced by " + std::string(op));
}

void require_shape(const Tensor& t, const Shape& expected, std::string_view op) {
  if (t.shape() != expected) {
    throw Error(Errc::shape_mismatch, std::string(op) + ": expected " + shape_string(expected) + ", got " +
                                          shape_string(t.shape()));
  }
}

Tensor stack(std::span<const Tensor> items) {
  if (items.empty()) throw Error(Errc::empty_input, "stack of zero tensors");
  Shape shape = items.front().shape();
  std::vector<double> data;
  data.reserve(items.size() * items.front().size());
  for (const auto& t : items) {
    if (t.shape() != shape) throw Error(Errc::shape_mismatch, "stack of unequal shapes");
    data.insert(data.end(), t.values().begin(), t.values().end());
  }
  shape.insert(shape.begin(), items.size());
  return Tensor(std::move(shape), std::move(data));
}

Tensor slice_leading(const Tensor& batch, std::size_t i) {
  Shape inner(batch.shape().begin() + 1, batch.shape().end());
  const std::size_t n = shape_size(inner);
  std::vector<double> data(batch.values().begin() + static_cast<std::ptrdiff_t>(i * n),
                           batch.values().begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
  return Tensor(std::move(inner), std::move(data));
}

void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda, const double* b,
          std::size_t ldb, double* c, std::size_t ldc, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * ldc;
    if (!accumulate) std::fill(ci, ci + n, 0.0);
    const double* ai = a + i * lda;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ai[p];
      if (av == 0.0) continue;
      const double* bp = b + p * ldb;
      for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

void gemm_at_b(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda, const double* b,
               std::size_t ldb, double* c, std::size_t ldc) {
  for (std::size_t r = 0; r < m; ++r) {
    const double* ar = a + r * lda;
    const double* br = b + r * ldb;
    for (std::size_t i = 0; i < k; ++i) {
      const double av = ar[i];
      if (av == 0.0) continue;
      double* ci = c + i * ldc;
      for (std::size_t j = 0; j < n; ++j) ci[j] += av * br[j];
    }
  }
}

void gemm_a_bt(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda, const double* b,
               std::size_t ldb, double* c, std::size_t ldc, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * lda;
    double* ci = c + i * ldc;
    for (std::size_t j = 0; j < k; ++j) {
      const double* bj = b + j * ldb;
      double acc = 0.0;
      for (std::size_t p = 0; p < n; ++p) acc += ai[p] * bj[p];
      ci[j] = accumulate ? ci[j] + acc : acc;
    }
  }
}

}  // namespace serkit::nn
