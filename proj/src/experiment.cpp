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


#include "serkit/experiment.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "csv.hpp"
#include "serkit/error.hpp"
#include "serkit/functionals.hpp"
#include "serkit/nn/loss.hpp"
#include "serkit/rng.hpp"

namespace serkit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(Errc::io_error, "cannot write " + path.string());
}

std::vector<int> network_predictions(Model& model, const Dataset& data, std::size_t batch_size) {
  std::vector<int> out;
  out.reserve(data.size());
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < data.size(); start += batch_size) {
    idx.clear();
    for (std::size_t i = start; i < std::min(data.size(), start + batch_size); ++i) idx.push_back(i);
    const nn::Tensor logits = model.forward(data.batch(idx), nn::Mode::eval);
    const std::size_t classes = logits.dim(1);
    for (std::size_t b = 0; b < idx.size(); ++b) {
      out.push_back(argmax(std::span<const double>(logits.data() + b * classes, classes)));
    }
  }
  return out;
}

// Shuffled batches; a trailing batch of one joins its predecessor.
std::vector<std::vector<std::size_t>> make_batches(std::size_t n, std::size_t batch_size, Rng& rng) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < n; start += batch_size) {
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(std::min(n, start + batch_size)));
  }
  if (batches.size() > 1 && batches.back().size() == 1) {
    batches[batches.size() - 2].push_back(batches.back().front());
    batches.pop_back();
  }
  return batches;
}

template <class T>
void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* what) {
  if (!j.is_object()) throw Error(Errc::config_invalid, std::string(what) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok |= key == k;
    if (!ok) throw Error(Errc::config_invalid, std::string(what) + ": unknown key '" + key + "'");
  }
}

}  // namespace

// ---------------------------------------------------------------- Classifier

Classifier Classifier::from_checkpoint(const nn::Checkpoint& ckpt) {
  std::string format;
  try {
    format = json::parse(ckpt.metadata).value("format", "");
  } catch (const json::exception&) {
    throw Error(Errc::bad_checkpoint, "unreadable checkpoint metadata");
  }
  if (format == "serkit-svm") return Classifier(SvmModel::from_checkpoint(ckpt));
  return Classifier(Model::from_checkpoint(ckpt));
}

Classifier Classifier::load(const fs::path& path) { return from_checkpoint(nn::load_checkpoint(path)); }

nn::Shape Classifier::input_shape() const {
  if (is_svm()) return {svm().dim()};
  return std::get<Model>(impl_).input_shape();
}

std::vector<Prediction> Classifier::predict(const Dataset& data, std::size_t batch_size) {
  std::vector<Prediction> out;
  if (is_svm()) {
    for (const auto& ex : data.examples) out.push_back(svm().predict(ex));
    return out;
  }
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < data.size(); start += batch_size) {
    idx.clear();
    for (std::size_t i = start; i < std::min(data.size(), start + batch_size); ++i) idx.push_back(i);
    for (auto& p : network().predict(data.batch(idx))) out.push_back(std::move(p));
  }
  return out;
}

std::vector<int> Classifier::predict_labels(const Dataset& data, std::size_t batch_size) {
  if (!is_svm()) return network_predictions(network(), data, batch_size);
  std::vector<int> out;
  for (const auto& ex : data.examples) out.push_back(svm().predict(ex).class_index);
  return out;
}

nn::Checkpoint Classifier::state() const {
  return std::visit([](const auto& m) { return m.state(); }, impl_);
}

void Classifier::save(const fs::path& path) const { nn::save_checkpoint(path, state()); }

// ---------------------------------------------------------------- training

json train_config_to_json(const TrainConfig& c) {
  return {{"optimizer", nn::optimizer_name(c.optimizer)},
          {"learning_rate", c.learning_rate},
          {"batch_size", c.batch_size},
          {"max_epochs", c.max_epochs},
          {"patience", c.patience},
          {"seed", c.seed},
          {"clip_norm", c.clip_norm},
          {"stop_at_train_wa", c.stop_at_train_wa},
          {"eval_train", c.eval_train}};
}

TrainConfig train_config_from_json(const json& j) {
  reject_unknown<TrainConfig>(j,
                              {"optimizer", "learning_rate", "batch_size", "max_epochs", "patience", "seed",
                               "clip_norm", "stop_at_train_wa", "eval_train"},
                              "train");
  TrainConfig c;
  try {
    if (j.contains("optimizer")) c.optimizer = nn::parse_optimizer(j.at("optimizer").get<std::string>());
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.max_epochs = j.value("max_epochs", c.max_epochs);
    c.patience = j.value("patience", c.patience);
    c.seed = j.value("seed", c.seed);
    c.clip_norm = j.value("clip_norm", c.clip_norm);
    c.stop_at_train_wa = j.value("stop_at_train_wa", c.stop_at_train_wa);
    c.eval_train = j.value("eval_train", c.eval_train);
  } catch (const json::exception& e) {
    throw Error(Errc::config_invalid, std::string("train: ") + e.what());
  }
  if (!(c.learning_rate > 0.0) || c.batch_size == 0) {
    throw Error(Errc::config_invalid, "train: learning_rate must be > 0 and batch_size >= 1");
  }
  return c;
}

TrainResult train_model(const ModelSpec& spec, const Dataset& train, const Dataset& val, const TrainConfig& config) {
  spec.validate();
  if (train.size() == 0) throw Error(Errc::empty_input, "empty training set");
  if (!(config.learning_rate > 0.0) || config.batch_size == 0) {
    throw Error(Errc::config_invalid, "learning_rate must be > 0 and batch_size >= 1");
  }
  if (val.size() > 0 && val.example_shape != train.example_shape) {
    throw Error(Errc::incompatible_shape, "validation examples differ in shape from training examples");
  }

  if (spec.kind == ModelKind::svm_func) {
    if (train.example_shape.size() != 1) {
      throw Error(Errc::incompatible_shape, "svm_func expects [d], got " + nn::shape_string(train.example_shape));
    }
    Classifier c(SvmModel::train(train.rows(), train.labels, spec.svm_c, spec.svm_epochs, config.seed,
                                 spec.num_classes));
    EpochRecord rec;
    rec.epoch = 1;
    rec.train_wa = compute_metrics(train.labels, c.predict_labels(train)).wa;
    double best = -1.0;
    if (val.size() > 0) {
      const auto r = compute_metrics(val.labels, c.predict_labels(val));
      rec.val_ua = best = r.ua;
      rec.val_wa = r.wa;
    }
    return TrainResult{std::move(c), {rec}, 1, best};
  }

  Model model = Model::build(spec, train.example_shape, config.seed);
  model.standardizer() = Standardizer::fit(train.as_matrices());
  auto optimizer = nn::make_optimizer(config.optimizer, config.learning_rate);
  const bool has_val = val.size() > 0;
  const bool eval_train = config.eval_train || config.stop_at_train_wa > 0.0;

  std::vector<EpochRecord> history;
  nn::Checkpoint best_state;
  std::size_t best_epoch = 0;
  double best_ua = -1.0;
  std::size_t stale = 0;
  std::vector<int> labels;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    Rng order_rng(mix_seed(config.seed, 2 * epoch));
    model.reseed_dropout(mix_seed(config.seed, 2 * epoch + 1));
    double loss_sum = 0.0;
    for (const auto& idx : make_batches(train.size(), config.batch_size, order_rng)) {
      labels.clear();
      for (std::size_t i : idx) labels.push_back(train.labels[i]);
      model.zero_grad();
      const auto loss = nn::softmax_cross_entropy(model.forward(train.batch(idx), nn::Mode::train), labels);
      model.backward(loss.grad);
      nn::clip_grad_norm(model.params(), config.clip_norm);
      optimizer->step(model.params());
      loss_sum += loss.loss * static_cast<double>(idx.size());
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(train.size());
    if (eval_train) rec.train_wa = compute_metrics(train.labels, network_predictions(model, train, 32)).wa;
    if (has_val) {
      const auto r = compute_metrics(val.labels, network_predictions(model, val, 32));
      rec.val_ua = r.ua;
      rec.val_wa = r.wa;
      if (r.ua > best_ua) {
        best_ua = r.ua;
        best_epoch = epoch;
        best_state = model.state();
        stale = 0;
      } else {
        ++stale;
      }
    }
    history.push_back(rec);
    if (config.stop_at_train_wa > 0.0 && rec.train_wa >= config.stop_at_train_wa) break;
    if (has_val && config.patience > 0 && stale >= config.patience) break;
  }
  if (!has_val) best_epoch = history.size();
  if (has_val && best_epoch > 0) model = Model::from_checkpoint(best_state);
  return TrainResult{Classifier(std::move(model)), std::move(history), best_epoch, best_ua};
}

void write_history_csv(const fs::path& path, const std::vector<EpochRecord>& history) {
  std::ostringstream out;
  out << "epoch,train_loss,train_wa,val_ua,val_wa\n";
  for (const auto& r : history) {
    out << r.epoch << ',' << detail::format_double(r.train_loss) << ',' << detail::format_double(r.train_wa) << ','
        << detail::format_double(r.val_ua) << ',' << detail::format_double(r.val_wa) << '\n';
  }
  write_text(path, out.str());
}

// ---------------------------------------------------------------- runs

namespace {

json split_to_json(const SplitRatios& r, std::uint64_t seed, bool speaker_disjoint) {
  return {{"train", r.train}, {"val", r.val}, {"test", r.test}, {"seed", seed}, {"speaker_disjoint", speaker_disjoint}};
}

void split_from_json(const json& j, SplitRatios& r, std::uint64_t& seed, bool& speaker_disjoint) {
  reject_unknown<SplitRatios>(j, {"train", "val", "test", "seed", "speaker_disjoint"}, "split");
  try {
    r.train = j.value("train", r.train);
    r.val = j.value("val", r.val);
    r.test = j.value("test", r.test);
    seed = j.value("seed", seed);
    speaker_disjoint = j.value("speaker_disjoint", speaker_disjoint);
  } catch (const json::exception& e) {
    throw Error(Errc::config_invalid, std::string("split: ") + e.what());
  }
}

std::optional<FilenameRule> rule_from(const json& j) {
  if (!j.contains("filename_rule") || j.at("filename_rule").is_null()) return std::nullopt;
  return filename_rule_from_json(j.at("filename_rule"));
}

std::string table_row_text(const std::string& group, const std::string& method, const std::string& ua,
                           const std::string& wa) {
  std::ostringstream out;
  out << std::left << std::setw(18) << group << std::setw(26) << method << std::right << std::setw(8) << ua
      << std::setw(8) << wa << '\n';
  return out.str();
}

std::string fixed2(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << v;
  return out.str();
}

}  // namespace

json run_config_to_json(const RunConfig& c) {
  return {{"manifest", c.manifest.generic_string()},
          {"filename_rule", c.filename_rule ? filename_rule_to_json(*c.filename_rule) : json(nullptr)},
          {"split", split_to_json(c.ratios, c.split_seed, c.speaker_disjoint)},
          {"features", feature_config_to_json(c.features)},
          {"model", model_spec_to_json(c.model)},
          {"train", train_config_to_json(c.train)}};
}

RunConfig run_config_from_json(const json& j) {
  reject_unknown<RunConfig>(j, {"manifest", "filename_rule", "split", "features", "model", "train"}, "run config");
  RunConfig c;
  try {
    c.manifest = j.value("manifest", std::string());
  } catch (const json::exception& e) {
    throw Error(Errc::config_invalid, std::string("manifest: ") + e.what());
  }
  c.filename_rule = rule_from(j);
  if (j.contains("split")) split_from_json(j.at("split"), c.ratios, c.split_seed, c.speaker_disjoint);
  if (j.contains("features")) c.features = feature_config_from_json(j.at("features"));
  if (j.contains("model")) c.model = model_spec_from_json(j.at("model"));
  if (j.contains("train")) c.train = train_config_from_json(j.at("train"));
  return c;
}

std::string config_hash(const json& resolved) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : resolved.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

PreparedData prepare_data(const RunConfig& config, const FeatureStore& features, const Manifest& manifest) {
  PreparedData d;
  d.splits = split_manifest(manifest, config.ratios, config.split_seed, config.speaker_disjoint);
  d.train = make_dataset(features, d.splits.train);
  d.val = make_dataset(features, d.splits.val);
  d.test = make_dataset(features, d.splits.test);
  return d;
}

RunOutcome run_experiment(const RunConfig& config, const PreparedData& data, const fs::path& out_root) {
  const json resolved = run_config_to_json(config);
  RunOutcome out;
  out.hash = config_hash(resolved);
  out.directory = out_root / out.hash;
  fs::create_directories(out.directory);
  const std::string started = utc_now();

  TrainResult result = train_model(config.model, data.train, data.val, config.train);
  const json metadata = {{"config_hash", out.hash},
                         {"seed", config.train.seed},
                         {"model", model_kind_name(config.model.kind)},
                         {"features", feature_source_name(config.features.source)},
                         {"best_epoch", result.best_epoch},
                         {"epochs_run", result.history.size()},
                         {"train_size", data.train.size()},
                         {"val_size", data.val.size()},
                         {"test_size", data.test.size()}};
  if (data.test.size() > 0) {
    out.test_report = compute_metrics(data.test.labels, result.model.predict_labels(data.test));
  }
  if (data.val.size() > 0) {
    out.val_report = compute_metrics(data.val.labels, result.model.predict_labels(data.val));
  }
  const json timestamps = {{"started", started}, {"finished", utc_now()}};
  for (EvalReport* r : {&out.test_report, &out.val_report}) {
    r->metadata = metadata;
    r->timestamps = timestamps;
  }
  out.test_report.metadata["split"] = "test";
  out.val_report.metadata["split"] = "val";

  write_text(out.directory / "config.json", resolved.dump(2) + "\n");
  result.model.save(out.directory / "checkpoint.bin");
  write_history_csv(out.directory / "history.csv", result.history);
  write_text(out.directory / "report.json", out.test_report.to_json().dump(2) + "\n");
  write_text(out.directory / "val_report.json", out.val_report.to_json().dump(2) + "\n");
  CellResult row{{feature_source_name(config.features.source).data(), std::string(model_kind_name(config.model.kind)),
                  config.features, config.model},
                 data.test.size() > 0,
                 data.test.size() > 0 ? "" : "empty test split",
                 out.hash,
                 out.test_report};
  write_text(out.directory / "table.txt", render_table_text({row}));
  out.history = std::move(result.history);
  out.best_epoch = result.best_epoch;
  out.best_val_ua = result.best_val_ua;
  return out;
}

RunOutcome run_experiment(const RunConfig& config, const fs::path& out_root, std::size_t workers) {
  const Manifest manifest = load_manifest(config.manifest, {config.filename_rule, true});
  const FeatureStore store = load_features(config.features, manifest, workers);
  if (!store.failures.empty()) {
    throw Error(Errc::feature_missing, std::to_string(store.failures.size()) + " clips without features, first " +
                                           store.failures.front().first + ": " + store.failures.front().second);
  }
  return run_experiment(config, prepare_data(config, store, manifest), out_root);
}

// ---------------------------------------------------------------- grid

std::vector<GridCell> frame_level_preset() {
  const std::vector<std::pair<std::string, ModelKind>> methods = {{"BLSTM", ModelKind::blstm},
                                                                  {"Attention-BLSTM", ModelKind::attn_blstm},
                                                                  {"CNN + Attention-BLSTM", ModelKind::cnn_attn_blstm},
                                                                  {"DNN", ModelKind::dnn_frames}};
  std::vector<GridCell> cells;
  for (int ms : {100, 32}) {
    for (const auto& [name, kind] : methods) {
      GridCell cell;
      cell.group = std::to_string(ms) + "ms";
      cell.method = name;
      cell.features.source = FeatureSource::handcrafted_lld;
      cell.features.frame_ms = ms;
      cell.model.kind = kind;
      cells.push_back(cell);
    }
  }
  return cells;
}

std::vector<GridCell> utterance_level_preset() {
  const std::vector<std::pair<std::string, ModelKind>> methods = {
      {"SVM", ModelKind::svm_func}, {"DNN", ModelKind::dnn_func}, {"CNN", ModelKind::cnn_func}};
  std::vector<GridCell> cells;
  for (const char* set : {"hand_crafted_624", "large"}) {
    for (const auto& [name, kind] : methods) {
      GridCell cell;
      cell.group = set;
      cell.method = name;
      cell.features.source = FeatureSource::handcrafted_functionals;
      cell.features.functional_set = set;
      cell.model.kind = kind;
      cells.push_back(cell);
    }
  }
  return cells;
}

std::vector<GridCell> grid_preset(std::string_view name) {
  if (name == "frame_level") return frame_level_preset();
  if (name == "utterance_level") return utterance_level_preset();
  throw Error(Errc::config_invalid, "unknown grid preset '" + std::string(name) + "'");
}

json grid_config_to_json(const GridConfig& c) {
  json cells = json::array();
  for (const auto& cell : c.cells) {
    cells.push_back({{"group", cell.group},
                     {"method", cell.method},
                     {"features", feature_config_to_json(cell.features)},
                     {"model", model_spec_to_json(cell.model)}});
  }
  return {{"manifest", c.manifest.generic_string()},
          {"filename_rule", c.filename_rule ? filename_rule_to_json(*c.filename_rule) : json(nullptr)},
          {"split", split_to_json(c.ratios, c.split_seed, c.speaker_disjoint)},
          {"train", train_config_to_json(c.train)},
          {"workers", c.workers},
          {"cells", cells}};
}

GridConfig grid_config_from_json(const json& j) {
  reject_unknown<GridConfig>(
      j, {"manifest", "filename_rule", "split", "train", "workers", "cells", "preset", "model_defaults"}, "grid");
  GridConfig c;
  try {
    c.manifest = j.value("manifest", std::string());
    c.workers = j.value("workers", c.workers);
  } catch (const json::exception& e) {
    throw Error(Errc::config_invalid, std::string("grid: ") + e.what());
  }
  c.filename_rule = rule_from(j);
  if (j.contains("split")) split_from_json(j.at("split"), c.ratios, c.split_seed, c.speaker_disjoint);
  if (j.contains("train")) c.train = train_config_from_json(j.at("train"));
  const json defaults = j.value("model_defaults", json::object());
  if (!defaults.is_object()) throw Error(Errc::config_invalid, "grid: model_defaults must be an object");
  auto with_defaults = [&](const ModelSpec& spec) {
    json merged = defaults;
    merged.erase("kind");
    merged["kind"] = model_kind_name(spec.kind);
    return model_spec_from_json(merged);
  };
  if (j.contains("preset") && j.contains("cells")) throw Error(Errc::config_invalid, "grid: give preset or cells");
  if (j.contains("preset")) {
    c.cells = grid_preset(j.at("preset").get<std::string>());
    for (auto& cell : c.cells) cell.model = with_defaults(cell.model);
  } else if (j.contains("cells")) {
    for (const auto& item : j.at("cells")) {
      reject_unknown<GridCell>(item, {"group", "method", "features", "model"}, "grid cell");
      GridCell cell;
      cell.group = item.value("group", "");
      cell.method = item.value("method", "");
      if (item.contains("features")) cell.features = feature_config_from_json(item.at("features"));
      json model = defaults;
      if (item.contains("model")) model.update(item.at("model"));
      cell.model = model_spec_from_json(model);
      if (cell.method.empty()) cell.method = std::string(model_kind_name(cell.model.kind));
      c.cells.push_back(cell);
    }
  }
  if (c.cells.empty()) throw Error(Errc::config_invalid, "grid: no cells");
  return c;
}

std::vector<CellResult> run_grid(const GridConfig& config, const fs::path& out_dir) {
  const std::size_t workers = config.workers ? config.workers : default_workers();
  const Manifest manifest = load_manifest(config.manifest, {config.filename_rule, true});
  fs::create_directories(out_dir);

  std::vector<CellResult> results(config.cells.size());
  std::vector<std::optional<PreparedData>> prepared(config.cells.size());
  std::vector<RunConfig> runs(config.cells.size());
  std::map<int, ExtractionResult> extractions;
  std::map<std::string, std::shared_ptr<FeatureStore>> stores;
  for (std::size_t i = 0; i < config.cells.size(); ++i) {
    const GridCell& cell = config.cells[i];
    results[i].cell = cell;
    RunConfig& run = runs[i];
    run.manifest = config.manifest;
    run.filename_rule = config.filename_rule;
    run.ratios = config.ratios;
    run.split_seed = config.split_seed;
    run.speaker_disjoint = config.speaker_disjoint;
    run.features = cell.features;
    run.model = cell.model;
    run.train = config.train;
    results[i].hash = config_hash(run_config_to_json(run));
    try {
      const std::string key = feature_config_to_json(cell.features).dump();
      if (!stores.count(key)) {
        FeatureStore store;
        const FeatureSource src = cell.features.source;
        if (src == FeatureSource::handcrafted_lld || src == FeatureSource::handcrafted_functionals) {
          auto it = extractions.find(cell.features.frame_ms);
          if (it == extractions.end()) {
            it = extractions.emplace(cell.features.frame_ms, extract_manifest(manifest, cell.features.frame_ms, workers))
                     .first;
          }
          store = features_from_extraction(it->second, cell.features);
        } else {
          store = load_features(cell.features, manifest, workers);
        }
        if (!store.failures.empty()) {
          throw Error(Errc::feature_missing, std::to_string(store.failures.size()) + " clips without features, first " +
                                                 store.failures.front().first + ": " + store.failures.front().second);
        }
        stores[key] = std::make_shared<FeatureStore>(std::move(store));
      }
      prepared[i] = prepare_data(run, *stores[key], manifest);
    } catch (const std::exception& e) {
      results[i].error = e.what();
    }
  }
  extractions.clear();

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < results.size(); i = next++) {
      if (!prepared[i]) continue;
      try {
        auto outcome = run_experiment(runs[i], *prepared[i], out_dir / "runs");
        results[i].report = std::move(outcome.test_report);
        results[i].ok = true;
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
      prepared[i].reset();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(workers, results.size()); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  json cells = json::array();
  for (const auto& r : results) {
    json item = {{"group", r.cell.group}, {"method", r.cell.method}, {"hash", r.hash}, {"ok", r.ok}};
    if (r.ok) {
      item["report"] = r.report.to_json();
    } else {
      item["error"] = r.error;
    }
    cells.push_back(item);
  }
  const json report = {{"config", grid_config_to_json(config)}, {"cells", cells}};
  write_text(out_dir / "grid_report.json", report.dump(2) + "\n");
  write_text(out_dir / "table.txt", render_table_text(results));
  write_text(out_dir / "table.csv", render_table_csv(results));
  return results;
}

std::string render_table_text(const std::vector<CellResult>& results) {
  std::string out = table_row_text("Group", "Method", "UA", "WA");
  for (const auto& r : results) {
    out += r.ok ? table_row_text(r.cell.group, r.cell.method, fixed2(r.report.ua), fixed2(r.report.wa))
                : table_row_text(r.cell.group, r.cell.method, "failed", "-");
  }
  return out;
}

std::string render_table_csv(const std::vector<CellResult>& results) {
  std::string out = "group,method,ua,wa,status,hash\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  for (const auto& r : results) {
    out += quote(r.cell.group) + "," + quote(r.cell.method) + ",";
    out += r.ok ? detail::format_double(r.report.ua) + "," + detail::format_double(r.report.wa) + ",ok,"
                : std::string(",,failed,");
    out += r.hash + "\n";
  }
  return out;
}

}  // namespace serkit
