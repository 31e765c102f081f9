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


#ifndef SERKIT_HARNESS_HPP_
#define SERKIT_HARNESS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "serkit/lld.hpp"
#include "serkit/models.hpp"
#include "serkit/nn/tensor.hpp"

namespace serkit {

// Class indices follow this order.
inline constexpr std::array<std::string_view, kNumClasses> kClassNames = {"anger", "happiness", "neutral", "sadness",
                                                                          "surprise"};
inline constexpr std::string_view kDroppedLabel = "fear";

// Index of a retained label. Throws UnknownLabel for anything else, fear included.
int class_index(std::string_view label);

// ---------------------------------------------------------------- manifest

struct ManifestEntry {
  std::filesystem::path path;
  int label = 0;
  std::string speaker;
  std::string gender;

  // The path stem; feature files and CSV rows are keyed by it.
  std::string clip_id() const { return path.stem().string(); }
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::size_t dropped = 0;  // fear rows removed while loading

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  std::vector<int> labels() const;
  std::array<std::size_t, kNumClasses> class_counts() const;
};

// Maps regex capture groups of a file name to gender, speaker and a label letter.
struct FilenameRule {
  std::string pattern = R"(^([FM])(\d{2})([AHNSWF])\d{2}\.wav$)";
  int gender_group = 1;
  int speaker_group = 2;
  int label_group = 3;
  std::map<std::string, std::string> letters = {{"A", "anger"},   {"H", "happiness"}, {"N", "neutral"},
                                                {"S", "sadness"}, {"W", "surprise"},  {"F", "fear"}};
};

nlohmann::json filename_rule_to_json(const FilenameRule& rule);
FilenameRule filename_rule_from_json(const nlohmann::json& j);

struct ManifestOptions {
  std::optional<FilenameRule> rule;  // used when the source is a directory
  bool check_files = true;
};

// `source` is either a CSV `path,label[,speaker,gender]` (optional header;
// relative paths resolve against the CSV's directory) or a directory scanned
// with the filename rule. Throws DuplicatePath, UnknownLabel, MissingFile,
// EmptyManifest, MalformedCsv.
Manifest load_manifest(const std::filesystem::path& source, const ManifestOptions& options = {});
void write_manifest_csv(const std::filesystem::path& path, const Manifest& manifest);

// ---------------------------------------------------------------- split

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct Splits {
  Manifest train, val, test;
};

// Stratified by label. Entries are sorted by path before the seeded shuffle,
// so the partition does not depend on manifest row order. With
// speaker_disjoint, whole speakers are assigned to splits instead.
// Throws ClassTooSmall (< 3 entries in a class) and ConfigInvalid.
Splits split_manifest(const Manifest& manifest, const SplitRatios& ratios, std::uint64_t seed,
                      bool speaker_disjoint = false);

// ---------------------------------------------------------------- metrics

struct EvalReport {
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> confusion{};  // rows are truth
  std::size_t total = 0;
  double ua = 0.0;  // percent, mean recall over classes present in the truth
  double wa = 0.0;  // percent accuracy
  std::array<double, kNumClasses> per_class_recall{};  // percent, 0 when absent
  std::array<bool, kNumClasses> present{};
  nlohmann::json metadata = nlohmann::json::object();
  nlohmann::json timestamps = nlohmann::json::object();

  nlohmann::json to_json() const;
  static EvalReport from_json(const nlohmann::json& j);
};

// Throws LengthMismatch, EmptyInput, LabelOutOfRange.
EvalReport compute_metrics(std::span<const int> truth, std::span<const int> predicted);

// ---------------------------------------------------------------- features

enum class FeatureSource {
  handcrafted_lld,          // 52 LLDs per frame, extracted from audio
  lld_dir,                  // per-clip LLD files (<clip_id>.lld or .csv) in a directory
  functional_csv,           // one vector per clip from a CSV (clip_id column)
  handcrafted_functionals,  // functionals over extracted LLDs
};

std::string_view feature_source_name(FeatureSource source);
FeatureSource parse_feature_source(std::string_view name);
bool is_frame_source(FeatureSource source);

struct FeatureConfig {
  FeatureSource source = FeatureSource::handcrafted_lld;
  int frame_ms = 32;
  std::string functional_set = "hand_crafted_624";
  std::filesystem::path path;  // directory or CSV for the file-backed sources
  std::size_t expected_dim = 0;  // 0 skips the check

  bool operator==(const FeatureConfig&) const = default;
};

nlohmann::json feature_config_to_json(const FeatureConfig& c);
FeatureConfig feature_config_from_json(const nlohmann::json& j);

// Worker count: SERKIT_NUM_WORKERS when set, otherwise the logical core count.
std::size_t default_workers();

struct ExtractionResult {
  std::vector<LldMatrix> llds;                 // manifest order, successes only
  std::vector<std::size_t> entry_index;        // manifest index of each success
  std::vector<std::pair<std::string, std::string>> failures;  // path, message
};

// decode -> resample -> condition -> LLDs, parallel over files. Per-file
// errors are collected rather than thrown.
ExtractionResult extract_manifest(const Manifest& manifest, int frame_ms, std::size_t workers);

// Per-clip examples keyed by clip id, all of one shape.
struct FeatureStore {
  nn::Shape example_shape;
  std::map<std::string, std::vector<double>> examples;
  std::vector<std::pair<std::string, std::string>> failures;
};

FeatureStore load_features(const FeatureConfig& config, const Manifest& manifest, std::size_t workers);
// Builds a handcrafted store from already extracted LLDs.
FeatureStore features_from_extraction(const ExtractionResult& extracted, const FeatureConfig& config);

struct Dataset {
  nn::Shape example_shape;
  std::vector<std::vector<double>> examples;
  std::vector<int> labels;
  std::vector<std::string> ids;

  std::size_t size() const { return labels.size(); }
  // Stacks the selected examples into [n, ...example_shape].
  nn::Tensor batch(std::span<const std::size_t> indices) const;
  // Examples as rows of a matrix (flattened).
  Matrix rows() const;
  // Each example as a [frames, features] matrix, or [1, d] for vectors.
  std::vector<Matrix> as_matrices() const;
};

// Throws FeatureMissing when a manifest entry has no features.
Dataset make_dataset(const FeatureStore& store, const Manifest& manifest);

}  // namespace serkit

#endif  // SERKIT_HARNESS_HPP_
