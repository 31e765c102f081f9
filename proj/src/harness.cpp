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


#include "serkit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <regex>
#include <set>
#include <thread>

#include "csv.hpp"
#include "serkit/audio.hpp"
#include "serkit/error.hpp"
#include "serkit/functionals.hpp"
#include "serkit/rng.hpp"

namespace serkit {

namespace fs = std::filesystem;

namespace {

std::string lowercase(std::string_view s) {
  std::string out(detail::trim(s));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Returns -1 for the dropped label.
int label_or_drop(std::string_view raw) {
  const std::string label = lowercase(raw);
  if (label == kDroppedLabel) return -1;
  return class_index(label);
}

Manifest finish_manifest(std::vector<ManifestEntry> entries, std::size_t dropped, bool check_files) {
  std::set<fs::path> seen;
  for (const auto& e : entries) {
    if (!seen.insert(e.path).second) throw Error(Errc::duplicate_path, e.path.string());
    if (check_files && !fs::is_regular_file(e.path)) throw Error(Errc::missing_file, e.path.string());
  }
  if (entries.empty()) throw Error(Errc::empty_manifest, "no usable entries");
  Manifest m;
  m.entries = std::move(entries);
  m.dropped = dropped;
  return m;
}

Manifest load_csv_manifest(const fs::path& source, bool check_files) {
  std::ifstream in(source);
  if (!in) throw Error(Errc::missing_file, source.string());
  const fs::path base = source.parent_path();
  std::vector<ManifestEntry> entries;
  std::size_t dropped = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty() || detail::trim(line) == "\r") continue;
    const auto fields = detail::split_csv_line(line);
    if (line_no == 1 && lowercase(fields[0]) == "path") continue;
    if (fields.size() < 2 || fields.size() > 4) {
      throw Error(Errc::malformed_csv, source.string() + ":" + std::to_string(line_no) + ": expected 2 to 4 fields");
    }
    const int label = label_or_drop(fields[1]);
    if (label < 0) {
      ++dropped;
      continue;
    }
    ManifestEntry e;
    const fs::path p(std::string(detail::trim(fields[0])));
    e.path = (p.is_absolute() ? p : base / p).lexically_normal();
    e.label = label;
    if (fields.size() > 2) e.speaker = std::string(detail::trim(fields[2]));
    if (fields.size() > 3) e.gender = std::string(detail::trim(fields[3]));
    entries.push_back(std::move(e));
  }
  return finish_manifest(std::move(entries), dropped, check_files);
}

Manifest load_directory_manifest(const fs::path& dir, const FilenameRule& rule, bool check_files) {
  const std::regex re(rule.pattern);
  std::vector<fs::path> files;
  for (const auto& item : fs::recursive_directory_iterator(dir)) {
    if (item.is_regular_file()) files.push_back(item.path().lexically_normal());
  }
  std::sort(files.begin(), files.end());
  std::vector<ManifestEntry> entries;
  std::size_t dropped = 0;
  for (const auto& f : files) {
    const std::string name = f.filename().string();
    std::smatch match;
    if (!std::regex_match(name, match, re)) continue;
    auto group = [&](int g) { return g > 0 && static_cast<std::size_t>(g) < match.size() ? match[g].str() : ""; };
    const std::string letter = group(rule.label_group);
    const auto it = rule.letters.find(letter);
    if (it == rule.letters.end()) throw Error(Errc::unknown_label, "label code '" + letter + "' in " + name);
    const int label = label_or_drop(it->second);
    if (label < 0) {
      ++dropped;
      continue;
    }
    entries.push_back({f, label, group(rule.speaker_group), group(rule.gender_group)});
  }
  return finish_manifest(std::move(entries), dropped, check_files);
}

}  // namespace

int class_index(std::string_view label) {
  for (std::size_t i = 0; i < kClassNames.size(); ++i) {
    if (kClassNames[i] == label) return static_cast<int>(i);
  }
  throw Error(Errc::unknown_label, "'" + std::string(label) + "'");
}

std::vector<int> Manifest::labels() const {
  std::vector<int> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.label);
  return out;
}

std::array<std::size_t, kNumClasses> Manifest::class_counts() const {
  std::array<std::size_t, kNumClasses> counts{};
  for (const auto& e : entries) ++counts[static_cast<std::size_t>(e.label)];
  return counts;
}

nlohmann::json filename_rule_to_json(const FilenameRule& rule) {
  return {{"pattern", rule.pattern},
          {"gender_group", rule.gender_group},
          {"speaker_group", rule.speaker_group},
          {"label_group", rule.label_group},
          {"letters", rule.letters}};
}

FilenameRule filename_rule_from_json(const nlohmann::json& j) {
  FilenameRule rule;
  try {
    if (j.is_string()) {
      rule.pattern = j.get<std::string>();
    } else {
      rule.pattern = j.value("pattern", rule.pattern);
      rule.gender_group = j.value("gender_group", rule.gender_group);
      rule.speaker_group = j.value("speaker_group", rule.speaker_group);
      rule.label_group = j.value("label_group", rule.label_group);
      if (j.contains("letters")) rule.letters = j.at("letters").get<std::map<std::string, std::string>>();
    }
    std::regex check(rule.pattern);
  } catch (const std::exception& e) {
    throw Error(Errc::config_invalid, std::string("filename rule: ") + e.what());
  }
  return rule;
}

Manifest load_manifest(const fs::path& source, const ManifestOptions& options) {
  if (fs::is_directory(source)) return load_directory_manifest(source, options.rule.value_or(FilenameRule{}), options.check_files);
  if (!fs::exists(source)) throw Error(Errc::missing_file, source.string());
  return load_csv_manifest(source, options.check_files);
}

void write_manifest_csv(const fs::path& path, const Manifest& manifest) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << "path,label,speaker,gender\n";
  for (const auto& e : manifest.entries) {
    out << e.path.generic_string() << ',' << kClassNames[static_cast<std::size_t>(e.label)] << ',' << e.speaker << ','
        << e.gender << '\n';
  }
}

// ---------------------------------------------------------------- split

Splits split_manifest(const Manifest& manifest, const SplitRatios& ratios, std::uint64_t seed, bool speaker_disjoint) {
  for (double r : {ratios.train, ratios.val, ratios.test}) {
    if (!(r >= 0.0 && r <= 1.0)) throw Error(Errc::config_invalid, "split ratios must lie in [0, 1]");
  }
  if (std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    throw Error(Errc::config_invalid, "split ratios must sum to 1");
  }
  const auto counts = manifest.class_counts();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (counts[c] > 0 && counts[c] < 3) {
      throw Error(Errc::class_too_small, std::string(kClassNames[c]) + " has " + std::to_string(counts[c]) + " entries");
    }
  }
  auto by_path = [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; };
  auto rounded = [](std::size_t n, double r) {
    return static_cast<std::size_t>(std::lround(static_cast<double>(n) * r));
  };

  Splits out;
  if (!speaker_disjoint) {
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      std::vector<ManifestEntry> members;
      for (const auto& e : manifest.entries) {
        if (e.label == static_cast<int>(c)) members.push_back(e);
      }
      std::sort(members.begin(), members.end(), by_path);
      Rng rng(mix_seed(seed, c));
      rng.shuffle(members);
      const std::size_t n_val = rounded(members.size(), ratios.val);
      const std::size_t n_test = std::min(rounded(members.size(), ratios.test), members.size() - n_val);
      for (std::size_t i = 0; i < members.size(); ++i) {
        Manifest& dst = i < n_val ? out.val : i < n_val + n_test ? out.test : out.train;
        dst.entries.push_back(members[i]);
      }
    }
  } else {
    std::map<std::string, std::vector<ManifestEntry>> speakers;
    for (const auto& e : manifest.entries) {
      if (e.speaker.empty()) throw Error(Errc::config_invalid, "speaker-disjoint split needs speaker ids");
      speakers[e.speaker].push_back(e);
    }
    std::vector<std::string> ids;
    for (const auto& [id, list] : speakers) ids.push_back(id);
    Rng rng(seed);
    rng.shuffle(ids);
    const std::size_t want_val = rounded(manifest.size(), ratios.val);
    const std::size_t want_test = rounded(manifest.size(), ratios.test);
    for (const auto& id : ids) {
      Manifest& dst = out.val.size() < want_val ? out.val : out.test.size() < want_test ? out.test : out.train;
      for (const auto& e : speakers[id]) dst.entries.push_back(e);
    }
  }
  for (Manifest* m : {&out.train, &out.val, &out.test}) std::sort(m->entries.begin(), m->entries.end(), by_path);
  return out;
}

// ---------------------------------------------------------------- metrics

EvalReport compute_metrics(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) {
    throw Error(Errc::length_mismatch, std::to_string(truth.size()) + " truth vs " + std::to_string(predicted.size()) +
                                           " predicted labels");
  }
  if (truth.empty()) throw Error(Errc::empty_input, "no labels to score");
  EvalReport r;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (int v : {truth[i], predicted[i]}) {
      if (v < 0 || static_cast<std::size_t>(v) >= kNumClasses) {
        throw Error(Errc::label_out_of_range, "label " + std::to_string(v));
      }
    }
    ++r.confusion[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
    correct += truth[i] == predicted[i];
  }
  r.total = truth.size();
  r.wa = 100.0 * static_cast<double>(correct) / static_cast<double>(r.total);
  double recall_sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const std::size_t row = std::accumulate(r.confusion[c].begin(), r.confusion[c].end(), std::size_t{0});
    r.present[c] = row > 0;
    if (!r.present[c]) continue;
    r.per_class_recall[c] = 100.0 * static_cast<double>(r.confusion[c][c]) / static_cast<double>(row);
    recall_sum += static_cast<double>(r.confusion[c][c]) / static_cast<double>(row);
    ++present;
  }
  r.ua = 100.0 * recall_sum / static_cast<double>(present);
  return r;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json recall = nlohmann::json::object();
  nlohmann::json absent = nlohmann::json::array();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const std::string name(kClassNames[c]);
    if (present[c]) {
      recall[name] = per_class_recall[c];
    } else {
      recall[name] = nullptr;
      absent.push_back(name);
    }
  }
  return {{"classes", kClassNames},
          {"confusion", confusion},
          {"total", total},
          {"ua", ua},
          {"wa", wa},
          {"per_class_recall", recall},
          {"absent_classes", absent},
          {"metadata", metadata},
          {"timestamps", timestamps}};
}

EvalReport EvalReport::from_json(const nlohmann::json& j) {
  EvalReport r;
  try {
    r.confusion = j.at("confusion").get<decltype(r.confusion)>();
    r.total = j.at("total").get<std::size_t>();
    r.ua = j.at("ua").get<double>();
    r.wa = j.at("wa").get<double>();
    const auto& recall = j.at("per_class_recall");
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const auto& v = recall.at(std::string(kClassNames[c]));
      r.present[c] = !v.is_null();
      r.per_class_recall[c] = v.is_null() ? 0.0 : v.get<double>();
    }
    r.metadata = j.value("metadata", nlohmann::json::object());
    r.timestamps = j.value("timestamps", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config_invalid, std::string("eval report: ") + e.what());
  }
  return r;
}

// ---------------------------------------------------------------- features

namespace {

constexpr std::array<std::string_view, 4> kSourceNames = {"handcrafted_lld", "lld_dir", "functional_csv",
                                                          "handcrafted_functionals"};

void add_example(FeatureStore& store, const std::string& id, nn::Shape shape, std::vector<double> values) {
  if (store.examples.empty()) {
    store.example_shape = std::move(shape);
  } else if (shape != store.example_shape) {
    throw Error(Errc::dimension_mismatch, "clip " + id + " has shape " + nn::shape_string(shape) + ", expected " +
                                              nn::shape_string(store.example_shape));
  }
  store.examples[id] = std::move(values);
}

}  // namespace

std::string_view feature_source_name(FeatureSource source) { return kSourceNames[static_cast<std::size_t>(source)]; }

FeatureSource parse_feature_source(std::string_view name) {
  for (std::size_t i = 0; i < kSourceNames.size(); ++i) {
    if (kSourceNames[i] == name) return static_cast<FeatureSource>(i);
  }
  throw Error(Errc::config_invalid, "unknown feature source '" + std::string(name) + "'");
}

bool is_frame_source(FeatureSource source) {
  return source == FeatureSource::handcrafted_lld || source == FeatureSource::lld_dir;
}

nlohmann::json feature_config_to_json(const FeatureConfig& c) {
  return {{"source", feature_source_name(c.source)},
          {"frame_ms", c.frame_ms},
          {"functional_set", c.functional_set},
          {"path", c.path.generic_string()},
          {"expected_dim", c.expected_dim}};
}

FeatureConfig feature_config_from_json(const nlohmann::json& j) {
  FeatureConfig c;
  try {
    if (!j.is_object()) throw Error(Errc::config_invalid, "features: expected an object");
    for (const auto& [key, value] : j.items()) {
      if (key != "source" && key != "frame_ms" && key != "functional_set" && key != "path" && key != "expected_dim") {
        throw Error(Errc::config_invalid, "features: unknown key '" + key + "'");
      }
    }
    if (j.contains("source")) c.source = parse_feature_source(j.at("source").get<std::string>());
    c.frame_ms = j.value("frame_ms", c.frame_ms);
    c.functional_set = j.value("functional_set", c.functional_set);
    c.path = j.value("path", std::string());
    c.expected_dim = j.value("expected_dim", c.expected_dim);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config_invalid, std::string("features: ") + e.what());
  }
  if (c.frame_ms != 32 && c.frame_ms != 100) throw Error(Errc::config_invalid, "frame_ms must be 32 or 100");
  if ((c.source == FeatureSource::lld_dir || c.source == FeatureSource::functional_csv) && c.path.empty()) {
    throw Error(Errc::config_invalid, std::string(feature_source_name(c.source)) + " needs a path");
  }
  if (c.source == FeatureSource::handcrafted_functionals) builtin_set(c.functional_set);
  return c;
}

std::size_t default_workers() {
  if (const char* env = std::getenv("SERKIT_NUM_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExtractionResult extract_manifest(const Manifest& manifest, int frame_ms, std::size_t workers) {
  const std::size_t n = manifest.size();
  std::vector<std::optional<LldMatrix>> slots(n);
  std::vector<std::string> errors(n);
  const int threads = static_cast<int>(std::max<std::size_t>(1, workers));
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::size_t i = 0; i < n; ++i) {
    const auto& entry = manifest.entries[i];
    try {
      slots[i] = extract_llds(load_conditioned(entry.path), frame_ms, entry.clip_id());
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  ExtractionResult out;
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]) {
      out.llds.push_back(std::move(*slots[i]));
      out.entry_index.push_back(i);
    } else {
      out.failures.emplace_back(manifest.entries[i].path.string(), errors[i]);
    }
  }
  return out;
}

FeatureStore features_from_extraction(const ExtractionResult& extracted, const FeatureConfig& config) {
  FeatureStore store;
  store.failures = extracted.failures;
  if (config.source == FeatureSource::handcrafted_lld) {
    for (const auto& m : extracted.llds) {
      if (m.frame_ms != config.frame_ms) throw Error(Errc::config_invalid, "extraction frame length differs");
      add_example(store, m.clip_id, {m.num_frames(), m.num_features()}, m.values.data());
    }
  } else if (config.source == FeatureSource::handcrafted_functionals) {
    auto vectors = apply_functionals_batch(extracted.llds, builtin_set(config.functional_set));
    for (auto& v : vectors) {
      const std::size_t dim = v.dim();
      add_example(store, v.clip_id, {dim}, std::move(v.values));
    }
  } else {
    throw Error(Errc::config_invalid, std::string(feature_source_name(config.source)) + " is not extracted from audio");
  }
  return store;
}

FeatureStore load_features(const FeatureConfig& config, const Manifest& manifest, std::size_t workers) {
  FeatureStore store;
  switch (config.source) {
    case FeatureSource::handcrafted_lld:
    case FeatureSource::handcrafted_functionals:
      store = features_from_extraction(extract_manifest(manifest, config.frame_ms, workers), config);
      break;
    case FeatureSource::lld_dir:
      for (const auto& e : manifest.entries) {
        const std::string id = e.clip_id();
        fs::path file = config.path / (id + ".lld");
        if (!fs::exists(file)) file = config.path / (id + ".csv");
        if (!fs::exists(file)) {
          store.failures.emplace_back(e.path.string(), "no LLD file for " + id);
          continue;
        }
        auto m = read_lld_file(file);
        nn::Shape shape = {m.num_frames(), m.num_features()};
        add_example(store, id, std::move(shape), std::move(m.values.data()));
      }
      break;
    case FeatureSource::functional_csv: {
      std::optional<std::size_t> dim;
      if (config.expected_dim) dim = config.expected_dim;
      std::set<std::string> wanted;
      for (const auto& e : manifest.entries) wanted.insert(e.clip_id());
      for (auto& v : import_feature_csv(config.path, dim)) {
        const std::size_t dim = v.dim();
        if (wanted.count(v.clip_id)) add_example(store, v.clip_id, {dim}, std::move(v.values));
      }
      break;
    }
  }
  if (config.expected_dim && !store.examples.empty() &&
      nn::shape_size(store.example_shape) / (store.example_shape.size() == 2 ? store.example_shape[0] : 1) !=
          config.expected_dim) {
    throw Error(Errc::dimension_mismatch, "features have shape " + nn::shape_string(store.example_shape) +
                                              ", expected dimension " + std::to_string(config.expected_dim));
  }
  return store;
}

nn::Tensor Dataset::batch(std::span<const std::size_t> indices) const {
  nn::Shape shape = {indices.size()};
  shape.insert(shape.end(), example_shape.begin(), example_shape.end());
  nn::Tensor t(shape);
  const std::size_t stride = nn::shape_size(example_shape);
  for (std::size_t b = 0; b < indices.size(); ++b) {
    const auto& ex = examples.at(indices[b]);
    std::copy(ex.begin(), ex.end(), t.data() + b * stride);
  }
  return t;
}

Matrix Dataset::rows() const {
  const std::size_t stride = nn::shape_size(example_shape);
  Matrix m(size(), stride);
  for (std::size_t i = 0; i < size(); ++i) std::copy(examples[i].begin(), examples[i].end(), m.row(i).begin());
  return m;
}

std::vector<Matrix> Dataset::as_matrices() const {
  const std::size_t cols = example_shape.back();
  std::vector<Matrix> out;
  out.reserve(size());
  for (const auto& ex : examples) {
    Matrix m(ex.size() / cols, cols);
    m.data() = ex;
    out.push_back(std::move(m));
  }
  return out;
}

Dataset make_dataset(const FeatureStore& store, const Manifest& manifest) {
  Dataset d;
  d.example_shape = store.example_shape;
  for (const auto& e : manifest.entries) {
    const std::string id = e.clip_id();
    const auto it = store.examples.find(id);
    if (it == store.examples.end()) throw Error(Errc::feature_missing, "no features for " + id);
    d.examples.push_back(it->second);
    d.labels.push_back(e.label);
    d.ids.push_back(id);
  }
  return d;
}

}  // namespace serkit
