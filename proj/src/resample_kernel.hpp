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

#ifndef SERKIT_SRC_RESAMPLE_KERNEL_HPP_
#define SERKIT_SRC_RESAMPLE_KERNEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace serkit::detail {

// Polyphase table for a rational rate change source -> target. Each output
// sample is a dot product of a contiguous input window with one table row,
// so parallel and serial drivers produce bit-identical results.
class ResampleKernel {
 public:
  ResampleKernel(int source_rate, int target_rate);

  std::size_t output_length(std::size_t input_length) const;
  double output_sample(std::span<const double> input, std::size_t n) const;

 private:
  double tap_weight(double offset) const;

  std::uint64_t up_ = 1;    // target / gcd
  std::uint64_t down_ = 1;  // source / gcd
  double cutoff_ = 0.0;     // cycles per input sample
  double half_width_ = 0.0; // input samples
  double beta_ = 0.0;
  double i0_beta_ = 1.0;
  std::ptrdiff_t taps_per_side_ = 0;
  bool use_table_ = true;
  std::vector<double> table_;  // up_ rows of 2 * taps_per_side_
};

}  // namespace serkit::detail

#endif  // SERKIT_SRC_RESAMPLE_KERNEL_HPP_
