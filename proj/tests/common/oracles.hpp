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

// Slow, obviously-correct reference computations used by the unit and
// acceptance tests. Nothing here shares code with the library kernels.

#ifndef SERKIT_TESTS_ORACLES_HPP_
#define SERKIT_TESTS_ORACLES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace serkit::oracle {

// |X_k| for k = 0..n/2 of the zero-padded frame, O(n^2).
inline std::vector<double> dft_magnitude(std::span<const double> frame, std::size_t n) {
  std::vector<double> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < frame.size(); ++t) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(k * t % n) / static_cast<double>(n);
      re += frame[t] * std::cos(phase);
      im += frame[t] * std::sin(phase);
    }
    out[k] = std::hypot(re, im);
  }
  return out;
}

// Frequency of the largest DFT bin, refined by parabolic interpolation
// of the log magnitudes.
inline double dft_peak_hz(std::span<const double> x, double sample_rate) {
  const std::size_t n = x.size();
  const auto mag = dft_magnitude(x, n);
  std::size_t k = 1;
  for (std::size_t i = 1; i + 1 < mag.size(); ++i) {
    if (mag[i] > mag[k]) k = i;
  }
  double offset = 0.0;
  if (k > 0 && k + 1 < mag.size()) {
    const double a = std::log(mag[k - 1] + 1e-300), b = std::log(mag[k] + 1e-300), c = std::log(mag[k + 1] + 1e-300);
    const double denom = a - 2.0 * b + c;
    if (denom != 0.0) offset = 0.5 * (a - c) / denom;
  }
  return (static_cast<double>(k) + offset) * sample_rate / static_cast<double>(n);
}

// Orthonormal DCT-II, first `count` coefficients.
inline std::vector<double> dct2(std::span<const double> x, std::size_t count) {
  const double n = static_cast<double>(x.size());
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s += x[i] * std::cos(std::numbers::pi / n * (static_cast<double>(i) + 0.5) * static_cast<double>(k));
    }
    out[k] = s * (k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n));
  }
  return out;
}

// Confusion matrix and the two metrics recomputed by direct counting.
struct BruteMetrics {
  std::array<std::array<long, 5>, 5> confusion{};
  double ua = 0.0;
  double wa = 0.0;
};

inline BruteMetrics brute_metrics(std::span<const int> truth, std::span<const int> pred) {
  BruteMetrics m;
  long correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++m.confusion[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(pred[i])];
    if (truth[i] == pred[i]) ++correct;
  }
  m.wa = 100.0 * static_cast<double>(correct) / static_cast<double>(truth.size());
  double recall_sum = 0.0;
  int present = 0;
  for (std::size_t c = 0; c < 5; ++c) {
    long row = 0;
    for (long v : m.confusion[c]) row += v;
    if (row == 0) continue;
    ++present;
    recall_sum += static_cast<double>(m.confusion[c][c]) / static_cast<double>(row);
  }
  m.ua = 100.0 * recall_sum / present;
  return m;
}

// Window maxima by exhaustive scan over one channel.
inline std::vector<double> window_max(std::span<const double> x, std::size_t pool, std::size_t stride) {
  std::vector<double> out;
  for (std::size_t s = 0; s + pool <= x.size(); s += stride) {
    out.push_back(*std::max_element(x.begin() + static_cast<std::ptrdiff_t>(s),
                                    x.begin() + static_cast<std::ptrdiff_t>(s + pool)));
  }
  return out;
}

}  // namespace serkit::oracle

#endif  // SERKIT_TESTS_ORACLES_HPP_
