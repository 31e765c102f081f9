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


#ifndef SERKIT_EXPERIMENT_HPP_
#define SERKIT_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "serkit/harness.hpp"
#include "serkit/models.hpp"
#include "serkit/nn/optim.hpp"

namespace serkit {

// A trained network or SVM behind one prediction interface.
class Classifier {
 public:
  explicit Classifier(Model model) : impl_(std::move(model)) {}
  explicit Classifier(SvmModel svm) : impl_(std::move(svm)) {}

  static Classifier from_checkpoint(const nn::Checkpoint& ckpt);
  static Classifier load(const std::filesystem::path& path);

  bool is_svm() const { return std::holds_alternative<SvmModel>(impl_); }
  Model& network() { return std::get<Model>(impl_); }
  const SvmModel& svm() const { return std::get<SvmModel>(impl_); }
  // Input shape of one example.
  nn::Shape input_shape() const;

  // Eval-mode predictions in chunks of `batch_size`.
  std::vector<Prediction> predict(const Dataset& data, std::size_t batch_size = 32);
  std::vector<int> predict_labels(const Dataset& data, std::size_t batch_size = 32);

  nn::Checkpoint state() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::variant<Model, SvmModel> impl_;
};

struct TrainConfig {
  nn::OptimizerKind optimizer = nn::OptimizerKind::adam;
  double learning_rate = 1e-3;
  std::size_t batch_size = 16;
  std::size_t max_epochs = 100;
  std::size_t patience = 10;  // epochs without a validation UA gain; 0 disables
  std::uint64_t seed = 42;
  double clip_norm = 5.0;  // <= 0 disables
  double stop_at_train_wa = 0.0;  // stop once eval-mode train WA reaches this percent; 0 disables
  bool eval_train = true;  // eval-mode pass over the training set each epoch

  bool operator==(const TrainConfig&) const = default;
};

nlohmann::json train_config_to_json(const TrainConfig& c);
// Missing keys keep their defaults; unknown keys are rejected.
TrainConfig train_config_from_json(const nlohmann::json& j);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_wa = -1.0;  // -1 when not evaluated
  double val_ua = -1.0;    // -1 without a validation set
  double val_wa = -1.0;
};

struct TrainResult {
  Classifier model;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;  // 0 is the untrained model
  double best_val_ua = -1.0;
};

// Mini-batch training with a seeded shuffle per epoch and early stopping on
// validation UA. Returns the best validation epoch, or the last epoch when
// `val` is empty. svm_func ignores the schedule and trains Pegasos directly.
TrainResult train_model(const ModelSpec& spec, const Dataset& train, const Dataset& val, const TrainConfig& config);

void write_history_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& history);

// ---------------------------------------------------------------- runs

struct RunConfig {
  std::filesystem::path manifest;
  std::optional<FilenameRule> filename_rule;
  SplitRatios ratios;
  std::uint64_t split_seed = 42;
  bool speaker_disjoint = false;
  FeatureConfig features;
  ModelSpec model;
  TrainConfig train;
};

nlohmann::json run_config_to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

// FNV-1a 64 over the compact, key-sorted JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& resolved);

struct PreparedData {
  Splits splits;
  Dataset train, val, test;
};

PreparedData prepare_data(const RunConfig& config, const FeatureStore& features, const Manifest& manifest);

struct RunOutcome {
  std::filesystem::path directory;
  std::string hash;
  EvalReport test_report;
  EvalReport val_report;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_val_ua = -1.0;
};

// Trains, evaluates on the test split and writes config.json, checkpoint.bin,
// history.csv, report.json and table.txt under out_root/<hash>/.
RunOutcome run_experiment(const RunConfig& config, const PreparedData& data, const std::filesystem::path& out_root);

// Loads the manifest and features itself.
RunOutcome run_experiment(const RunConfig& config, const std::filesystem::path& out_root,
                          std::size_t workers = default_workers());

// ---------------------------------------------------------------- grid

struct GridCell {
  std::string group;   // e.g. a frame length or feature-set name
  std::string method;  // row label
  FeatureConfig features;
  ModelSpec model;
};

struct GridConfig {
  std::filesystem::path manifest;
  std::optional<FilenameRule> filename_rule;
  SplitRatios ratios;
  std::uint64_t split_seed = 42;
  bool speaker_disjoint = false;
  TrainConfig train;
  std::vector<GridCell> cells;
  std::size_t workers = 0;  // 0 picks default_workers()
};

// Frame lengths 100 ms then 32 ms; BLSTM, Attention-BLSTM, CNN + Attention-BLSTM, DNN.
std::vector<GridCell> frame_level_preset();
// Functional sets hand_crafted_624 and large with SVM, DNN and CNN.
std::vector<GridCell> utterance_level_preset();
std::vector<GridCell> grid_preset(std::string_view name);

nlohmann::json grid_config_to_json(const GridConfig& c);
// Accepts {"preset": name} in place of an explicit "cells" list.
GridConfig grid_config_from_json(const nlohmann::json& j);

struct CellResult {
  GridCell cell;
  bool ok = false;
  std::string error;
  std::string hash;
  EvalReport report;
};

// Cells run in parallel threads, each single-threaded. A failing cell is
// recorded and the rest continue. Writes grid_report.json, table.txt and
// table.csv under out_dir.
std::vector<CellResult> run_grid(const GridConfig& config, const std::filesystem::path& out_dir);

std::string render_table_text(const std::vector<CellResult>& results);
std::string render_table_csv(const std::vector<CellResult>& results);

}  // namespace serkit

#endif  // SERKIT_EXPERIMENT_HPP_
