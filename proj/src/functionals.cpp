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

#include "serkit/functionals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>

#include "csv.hpp"
#include "serkit/error.hpp"

namespace serkit {

namespace {

constexpr std::array<std::string_view, kNumFunctionals> kNames = {
    "mean", "max", "min", "range", "variance", "stddev", "median",
    "skewness", "kurtosis", "linreg_slope", "linreg_offset", "linreg_mse"};

}  // namespace

std::string_view functional_name(Functional f) { return kNames[static_cast<std::size_t>(f)]; }

Functional parse_functional(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Functional>(i);
  }
  throw Error(Errc::invalid_functional_set, "unknown functional '" + std::string(name) + "'");
}

const std::vector<Functional>& all_functionals() {
  static const std::vector<Functional> all = [] {
    std::vector<Functional> v;
    for (std::size_t i = 0; i < kNumFunctionals; ++i) v.push_back(static_cast<Functional>(i));
    return v;
  }();
  return all;
}

void FunctionalSet::validate() const {
  if (functionals.empty()) throw Error(Errc::invalid_functional_set, "'" + name + "' lists no functionals");
  std::set<Functional> seen(functionals.begin(), functionals.end());
  if (seen.size() != functionals.size()) {
    throw Error(Errc::invalid_functional_set, "'" + name + "' repeats a functional");
  }
}

double TrajectoryStats::get(Functional f) const {
  switch (f) {
    case Functional::mean: return mean;
    case Functional::max: return max;
    case Functional::min: return min;
    case Functional::range: return max - min;
    case Functional::variance: return variance;
    case Functional::stddev: return std::sqrt(variance);
    case Functional::median: return median;
    case Functional::skewness: return skewness;
    case Functional::kurtosis: return kurtosis;
    case Functional::linreg_slope: return slope;
    case Functional::linreg_offset: return offset;
    case Functional::linreg_mse: return mse;
  }
  return 0.0;
}

TrajectoryStats trajectory_stats(std::span<const double> x) {
  if (x.size() < 2) throw Error(Errc::too_few_frames, "need at least 2 frames, got " + std::to_string(x.size()));
  const std::size_t n = x.size();
  const double nd = static_cast<double>(n);
  TrajectoryStats s;

  double sum = 0.0;
  double peak_abs = 0.0;
  s.max = x[0];
  s.min = x[0];
  for (double v : x) {
    sum += v;
    s.max = std::max(s.max, v);
    s.min = std::min(s.min, v);
    peak_abs = std::max(peak_abs, std::abs(v));
  }
  s.mean = sum / nd;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;
  s.variance = m2;
  const double constant_threshold = 1e-12 * peak_abs;
  if (m2 > constant_threshold * constant_threshold && m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2) - 3.0;
  }

  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  // Abscissa t_i = i / (n - 1): mean 0.5.
  const double t_mean = 0.5;
  double stt = 0.0, stx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = static_cast<double>(i) / (nd - 1.0) - t_mean;
    stt += dt * dt;
    stx += dt * (x[i] - s.mean);
  }
  s.slope = stx / stt;
  s.offset = s.mean - s.slope * t_mean;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fit = s.offset + s.slope * static_cast<double>(i) / (nd - 1.0);
    const double r = x[i] - fit;
    sse += r * r;
  }
  s.mse = sse / nd;
  return s;
}

FeatureVector apply_functionals(const LldMatrix& llds, const FunctionalSet& set) {
  set.validate();
  if (llds.num_frames() < 2) {
    throw Error(Errc::too_few_frames, "'" + llds.clip_id + "' has " + std::to_string(llds.num_frames()) + " frames");
  }
  const std::size_t cols = llds.num_features();
  std::vector<std::vector<double>> tracks;
  std::vector<std::string> track_names;
  for (std::size_t c = 0; c < cols; ++c) {
    tracks.push_back(llds.values.column(c));
    track_names.push_back(c < llds.feature_names.size() ? llds.feature_names[c] : "lld" + std::to_string(c));
  }
  if (set.include_deltas) {
    const Matrix d = delta(llds.values);
    for (std::size_t c = 0; c < cols; ++c) {
      tracks.push_back(d.column(c));
      track_names.push_back(track_names[c] + "_de");
    }
  }

  FeatureVector out;
  out.clip_id = llds.clip_id;
  out.values.reserve(set.dimension(cols));
  out.names.reserve(set.dimension(cols));
  for (std::size_t c = 0; c < tracks.size(); ++c) {
    const TrajectoryStats stats = trajectory_stats(tracks[c]);
    for (Functional f : set.functionals) {
      const double v = stats.get(f);
      if (!std::isfinite(v)) {
        throw Error(Errc::non_finite, track_names[c] + "__" + std::string(functional_name(f)));
      }
      out.values.push_back(v);
      out.names.push_back(track_names[c] + "__" + std::string(functional_name(f)));
    }
  }
  return out;
}

std::vector<FeatureVector> apply_functionals_batch(std::span<const LldMatrix> llds,
                                                   const FunctionalSet& set) {
  set.validate();
  std::vector<FeatureVector> out(llds.size());
  const auto n = static_cast<std::ptrdiff_t>(llds.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = apply_functionals(llds[static_cast<std::size_t>(i)], set);
  }
  return out;
}

namespace reference {

std::vector<FeatureVector> apply_functionals_batch(std::span<const LldMatrix> llds,
                                                   const FunctionalSet& set) {
  std::vector<FeatureVector> out;
  out.reserve(llds.size());
  for (const auto& m : llds) out.push_back(apply_functionals(m, set));
  return out;
}

}  // namespace reference

std::vector<FunctionalSet> builtin_sets() {
  return {
      FunctionalSet{"hand_crafted_624", all_functionals(), false},
      FunctionalSet{"large", all_functionals(), true},
  };
}

FunctionalSet builtin_set(std::string_view name) {
  for (auto& s : builtin_sets()) {
    if (s.name == name) return s;
  }
  throw Error(Errc::invalid_functional_set, "no built-in functional set '" + std::string(name) + "'");
}

std::vector<FeatureVector> import_feature_csv(const std::filesystem::path& path,
                                              std::optional<std::size_t> expected_dim) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::malformed_csv, "empty feature file '" + path.string() + "'");
  auto header = detail::split_csv_line(line);
  if (header.empty() || detail::trim(header[0]) != "clip_id") {
    throw Error(Errc::malformed_csv, "first header column must be clip_id in '" + path.string() + "'");
  }
  const std::vector<std::string> names(header.begin() + 1, header.end());
  if (expected_dim && names.size() != *expected_dim) {
    throw Error(Errc::dimension_mismatch, "expected " + std::to_string(*expected_dim) + " features, file has " +
                                              std::to_string(names.size()));
  }

  std::vector<FeatureVector> out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (detail::trim(line).empty() || line == "\r") continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size()) {
      throw Error(Errc::dimension_mismatch, "row " + std::to_string(row) + " has " +
                                                std::to_string(cells.size() - 1) + " features, header has " +
                                                std::to_string(names.size()));
    }
    FeatureVector v;
    v.clip_id = std::string(detail::trim(cells[0]));
    v.names = names;
    v.values.reserve(names.size());
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const double value = detail::parse_double(cells[c], path.string() + " row " + std::to_string(row));
      if (!std::isfinite(value)) {
        throw Error(Errc::non_numeric_cell, "non-finite value in row " + std::to_string(row));
      }
      v.values.push_back(value);
    }
    out.push_back(std::move(v));
  }
  return out;
}

void export_feature_csv(const std::filesystem::path& path, std::span<const FeatureVector> vectors) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
  out << "clip_id";
  if (!vectors.empty()) {
    for (const auto& n : vectors.front().names) out << ',' << n;
  }
  out << '\n';
  for (const auto& v : vectors) {
    if (!vectors.empty() && v.values.size() != vectors.front().values.size()) {
      throw Error(Errc::dimension_mismatch, "vectors of differing dimension in one export");
    }
    out << v.clip_id;
    for (double x : v.values) out << ',' << detail::format_double(x);
    out << '\n';
  }
  if (!out) throw Error(Errc::io_error, "write failed for '" + path.string() + "'");
}

}  // namespace serkit
