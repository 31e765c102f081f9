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

// Statistical functionals collapsing LLD trajectories to per-utterance vectors.

#ifndef SERKIT_FUNCTIONALS_HPP_
#define SERKIT_FUNCTIONALS_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "serkit/lld.hpp"

namespace serkit {

enum class Functional {
  mean,
  max,
  min,
  range,
  variance,  // population
  stddev,
  median,
  skewness,
  kurtosis,  // excess
  linreg_slope,
  linreg_offset,
  linreg_mse,
};

inline constexpr std::size_t kNumFunctionals = 12;

std::string_view functional_name(Functional f);
Functional parse_functional(std::string_view name);
const std::vector<Functional>& all_functionals();

struct FunctionalSet {
  std::string name;
  std::vector<Functional> functionals;
  bool include_deltas = false;

  // Throws InvalidFunctionalSet on an empty list or duplicate entries.
  void validate() const;
  std::size_t dimension(std::size_t num_llds) const {
    return num_llds * (include_deltas ? 2 : 1) * functionals.size();
  }
};

struct FeatureVector {
  std::vector<double> values;
  std::vector<std::string> names;  // "<lld>__<functional>"
  std::string clip_id;

  std::size_t dim() const { return values.size(); }
};

// Moments of one trajectory. Regression is least squares against t / (T - 1).
// Skewness and kurtosis are 0 when the trajectory is numerically constant
// (variance <= (1e-12 * max |x|)^2).
struct TrajectoryStats {
  double mean = 0.0, max = 0.0, min = 0.0, variance = 0.0, median = 0.0;
  double skewness = 0.0, kurtosis = 0.0;
  double slope = 0.0, offset = 0.0, mse = 0.0;

  double get(Functional f) const;
};

TrajectoryStats trajectory_stats(std::span<const double> trajectory);

// Output order: for each column (base columns, then their deltas when the set
// includes them), each functional in set order. Requires >= 2 frames.
FeatureVector apply_functionals(const LldMatrix& llds, const FunctionalSet& set);

// OpenMP-parallel over utterances.
std::vector<FeatureVector> apply_functionals_batch(std::span<const LldMatrix> llds,
                                                   const FunctionalSet& set);

namespace reference {
std::vector<FeatureVector> apply_functionals_batch(std::span<const LldMatrix> llds,
                                                   const FunctionalSet& set);
}  // namespace reference

// "hand_crafted_624": 12 functionals, no deltas. "large": 12 functionals over
// the LLDs and their deltas (1248 for 52 LLDs).
std::vector<FunctionalSet> builtin_sets();
FunctionalSet builtin_set(std::string_view name);

// Header `clip_id,<name1>,...`; one vector per row.
std::vector<FeatureVector> import_feature_csv(const std::filesystem::path& path,
                                              std::optional<std::size_t> expected_dim = {});
void export_feature_csv(const std::filesystem::path& path, std::span<const FeatureVector> vectors);

}  // namespace serkit

#endif  // SERKIT_FUNCTIONALS_HPP_
