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


// serkit command-line front end.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "serkit/error.hpp"
#include "serkit/experiment.hpp"
#include "serkit/functionals.hpp"
#include "serkit/harness.hpp"
#include "serkit/toy_corpus.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace serkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

void log(const std::string& msg) { std::cerr << "serkit: " << msg << "\n"; }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::missing_file, path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::config_invalid, path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out || !(out << j.dump(2) << "\n")) throw Error(Errc::io_error, "cannot write " + path.string());
}

json parse_inline_json(const std::string& text, const char* flag) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::config_invalid, std::string(flag) + ": " + e.what());
  }
}

bool is_config_error(Errc code) {
  switch (code) {
    case Errc::config_invalid:
    case Errc::missing_file:
    case Errc::empty_manifest:
    case Errc::unknown_label:
    case Errc::duplicate_path:
    case Errc::class_too_small:
    case Errc::feature_missing:
    case Errc::malformed_csv:
    case Errc::incompatible_shape:
    case Errc::invalid_functional_set:
      return true;
    default:
      return false;
  }
}

std::size_t workers_or_default(std::optional<std::size_t> workers) {
  return workers && *workers > 0 ? *workers : default_workers();
}

std::optional<FilenameRule> rule_or_default(const std::optional<std::string>& pattern) {
  if (!pattern) return std::nullopt;
  FilenameRule rule;
  rule.pattern = *pattern;
  return filename_rule_from_json(filename_rule_to_json(rule));
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// ---------------------------------------------------------------- extract

struct ExtractArgs {
  std::string manifest;
  std::optional<std::string> filename_rule;
  int frame_ms = 32;
  std::string out;
  std::optional<std::string> functional_set;
  std::string format = "bin";
  std::optional<std::size_t> workers;
};

int cmd_extract(const ExtractArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  if (a.frame_ms != 32 && a.frame_ms != 100) throw Error(Errc::config_invalid, "--frame-ms must be 32 or 100");
  if (a.format != "bin" && a.format != "csv") throw Error(Errc::config_invalid, "--format must be bin or csv");
  std::optional<FunctionalSet> set;
  if (a.functional_set) set = builtin_set(*a.functional_set);
  const Manifest manifest = load_manifest(a.manifest, {rule_or_default(a.filename_rule), false});
  if (manifest.dropped) log("dropped " + std::to_string(manifest.dropped) + " fear entries");
  fs::create_directories(a.out);

  const auto extracted = extract_manifest(manifest, a.frame_ms, workers_or_default(a.workers));
  for (const auto& m : extracted.llds) {
    if (a.format == "csv") {
      write_lld_csv(fs::path(a.out) / (m.clip_id + ".csv"), m);
    } else {
      write_lld_binary(fs::path(a.out) / (m.clip_id + ".lld"), m);
    }
  }
  json summary = {{"manifest", a.manifest},
                  {"frame_ms", a.frame_ms},
                  {"entries", manifest.size()},
                  {"dropped", manifest.dropped},
                  {"count", extracted.llds.size()},
                  {"failures", json::array()}};
  for (const auto& [path, msg] : extracted.failures) {
    summary["failures"].push_back({{"path", path}, {"error", msg}});
    log("failed: " + path + ": " + msg);
  }
  if (set) {
    const auto vectors = apply_functionals_batch(extracted.llds, *set);
    const fs::path csv = fs::path(a.out) / ("functionals_" + set->name + ".csv");
    export_feature_csv(csv, vectors);
    summary["functional_set"] = set->name;
    summary["functional_csv"] = csv.filename().string();
    summary["functional_dim"] = vectors.empty() ? 0 : vectors.front().dim();
  }
  summary["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(fs::path(a.out) / "summary.json", summary);
  std::cout << "extracted " << extracted.llds.size() << " of " << manifest.size() << " clips ("
            << extracted.failures.size() << " failed) into " << a.out << "\n";
  return extracted.failures.empty() ? kExitOk : kExitPartial;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::optional<std::string> config;
  std::optional<std::string> manifest;
  std::optional<std::string> filename_rule;
  std::optional<std::string> features;
  std::optional<int> frame_ms;
  std::optional<std::string> functional_set;
  std::optional<std::string> feature_path;
  std::optional<std::string> model;
  std::optional<std::string> model_json;
  std::optional<std::string> optimizer;
  std::optional<double> lr;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> patience;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> split_seed;
  std::optional<double> stop_at_train_wa;
  bool speaker_disjoint = false;
  std::string out = "runs";
  std::optional<std::size_t> workers;
};

// File values first, then flags.
RunConfig resolve_run_config(const TrainArgs& a) {
  json j = a.config ? read_json(*a.config) : json::object();
  auto section = [&](const char* key) -> json& {
    if (!j.contains(key) || !j[key].is_object()) j[key] = json::object();
    return j[key];
  };
  if (a.manifest) j["manifest"] = *a.manifest;
  if (a.filename_rule) j["filename_rule"] = *a.filename_rule;
  if (a.features) section("features")["source"] = *a.features;
  if (a.frame_ms) section("features")["frame_ms"] = *a.frame_ms;
  if (a.functional_set) section("features")["functional_set"] = *a.functional_set;
  if (a.feature_path) section("features")["path"] = *a.feature_path;
  if (a.model_json) section("model").update(parse_inline_json(*a.model_json, "--model-json"));
  if (a.model) section("model")["kind"] = *a.model;
  if (a.optimizer) section("train")["optimizer"] = *a.optimizer;
  if (a.lr) section("train")["learning_rate"] = *a.lr;
  if (a.batch_size) section("train")["batch_size"] = *a.batch_size;
  if (a.epochs) section("train")["max_epochs"] = *a.epochs;
  if (a.patience) section("train")["patience"] = *a.patience;
  if (a.seed) section("train")["seed"] = *a.seed;
  if (a.stop_at_train_wa) section("train")["stop_at_train_wa"] = *a.stop_at_train_wa;
  if (a.split_seed) section("split")["seed"] = *a.split_seed;
  if (a.speaker_disjoint) section("split")["speaker_disjoint"] = true;
  RunConfig c = run_config_from_json(j);
  if (c.manifest.empty()) throw Error(Errc::config_invalid, "no manifest given (--manifest or config file)");
  return c;
}

int cmd_train(const TrainArgs& a) {
  const RunConfig config = resolve_run_config(a);
  const Manifest manifest = load_manifest(config.manifest, {config.filename_rule, true});
  if (manifest.dropped) log("dropped " + std::to_string(manifest.dropped) + " fear entries");
  const FeatureStore store = load_features(config.features, manifest, workers_or_default(a.workers));
  if (!store.failures.empty()) {
    for (const auto& [path, msg] : store.failures) log("no features: " + path + ": " + msg);
    throw Error(Errc::feature_missing, std::to_string(store.failures.size()) + " clips without features");
  }
  const auto outcome = run_experiment(config, prepare_data(config, store, manifest), a.out);
  std::cout << "run " << outcome.directory.string() << "\n"
            << "best epoch " << outcome.best_epoch << " of " << outcome.history.size() << ", val UA "
            << percent(outcome.val_report.ua) << "\n"
            << "test UA " << percent(outcome.test_report.ua) << "  WA " << percent(outcome.test_report.wa) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string run;
  std::optional<std::string> checkpoint;
  std::string split = "test";
  std::optional<std::size_t> workers;
};

int cmd_eval(const EvalArgs& a) {
  const fs::path dir(a.run);
  const RunConfig config = run_config_from_json(read_json(dir / "config.json"));
  const fs::path ckpt = a.checkpoint ? fs::path(*a.checkpoint) : dir / "checkpoint.bin";
  if (!fs::exists(ckpt)) throw Error(Errc::missing_file, ckpt.string());
  Classifier model = Classifier::load(ckpt);
  const Manifest manifest = load_manifest(config.manifest, {config.filename_rule, true});
  const FeatureStore store = load_features(config.features, manifest, workers_or_default(a.workers));
  const PreparedData data = prepare_data(config, store, manifest);
  const Dataset* d = a.split == "test" ? &data.test : a.split == "val" ? &data.val : a.split == "train" ? &data.train : nullptr;
  if (!d) throw Error(Errc::config_invalid, "--split must be train, val or test");
  if (d->size() == 0) throw Error(Errc::empty_input, a.split + " split is empty");
  EvalReport report = compute_metrics(d->labels, model.predict_labels(*d));
  report.metadata = {{"config_hash", config_hash(run_config_to_json(config))},
                     {"checkpoint", ckpt.string()},
                     {"split", a.split},
                     {"seed", config.train.seed}};
  write_json(dir / ("eval_" + a.split + ".json"), report.to_json());
  std::cout << a.split << " UA " << percent(report.ua) << "  WA " << percent(report.wa) << "  (n=" << report.total
            << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------- grid

struct GridArgs {
  std::optional<std::string> config;
  std::optional<std::string> preset;
  std::optional<std::string> manifest;
  std::optional<std::string> filename_rule;
  std::optional<std::string> model_defaults;
  std::optional<std::size_t> epochs;
  std::optional<std::uint64_t> seed;
  std::string out = "grid";
  std::optional<std::size_t> workers;
};

int cmd_grid(const GridArgs& a) {
  json j = a.config ? read_json(*a.config) : json::object();
  if (a.preset) {
    j.erase("cells");
    j["preset"] = *a.preset;
  }
  if (!j.contains("preset") && !j.contains("cells")) j["preset"] = "frame_level";
  if (a.manifest) j["manifest"] = *a.manifest;
  if (a.filename_rule) j["filename_rule"] = *a.filename_rule;
  if (a.model_defaults) j["model_defaults"] = parse_inline_json(*a.model_defaults, "--model-defaults");
  if (a.epochs) j["train"]["max_epochs"] = *a.epochs;
  if (a.seed) j["train"]["seed"] = *a.seed;
  if (a.workers) j["workers"] = *a.workers;
  const GridConfig config = grid_config_from_json(j);
  if (config.manifest.empty()) throw Error(Errc::config_invalid, "no manifest given (--manifest or config file)");
  const auto results = run_grid(config, a.out);
  std::cout << render_table_text(results);
  std::size_t failed = 0;
  for (const auto& r : results) {
    if (!r.ok) {
      ++failed;
      log("cell " + r.cell.group + " / " + r.cell.method + " failed: " + r.error);
    }
  }
  return failed ? kExitPartial : kExitOk;
}

// ---------------------------------------------------------------- make-toy-corpus

struct ToyArgs {
  std::string out;
  ToyCorpusOptions options;
};

int cmd_make_toy_corpus(const ToyArgs& a) {
  const auto summary = make_toy_corpus(a.out, a.options);
  std::cout << "wrote " << summary.clips << " clips and " << summary.manifest.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string input;
  bool csv = false;
};

std::string confusion_text(const EvalReport& r) {
  std::ostringstream out;
  out << "truth\\pred ";
  for (auto name : kClassNames) out << ' ' << std::string(name).substr(0, 9);
  out << "   recall\n";
  for (std::size_t t = 0; t < kNumClasses; ++t) {
    char head[16];
    std::snprintf(head, sizeof head, "%-10s", std::string(kClassNames[t]).c_str());
    out << head;
    for (std::size_t p = 0; p < kNumClasses; ++p) {
      char cell[16];
      std::snprintf(cell, sizeof cell, " %9zu", r.confusion[t][p]);
      out << cell;
    }
    out << "   " << (r.present[t] ? percent(r.per_class_recall[t]) : std::string("absent")) << "\n";
  }
  out << "UA " << percent(r.ua) << "  WA " << percent(r.wa) << "  (n=" << r.total << ")\n";
  return out.str();
}

int cmd_report(const ReportArgs& a) {
  fs::path input(a.input);
  if (fs::is_directory(input)) {
    if (fs::exists(input / "grid_report.json")) {
      input /= "grid_report.json";
    } else {
      input /= "report.json";
    }
  }
  const json j = read_json(input);
  if (j.contains("cells")) {
    std::vector<CellResult> rows;
    for (const auto& c : j.at("cells")) {
      CellResult r;
      r.cell.group = c.value("group", "");
      r.cell.method = c.value("method", "");
      r.hash = c.value("hash", "");
      r.ok = c.value("ok", false);
      if (r.ok) r.report = EvalReport::from_json(c.at("report"));
      r.error = c.value("error", "");
      rows.push_back(r);
    }
    std::cout << (a.csv ? render_table_csv(rows) : render_table_text(rows));
  } else {
    std::cout << confusion_text(EvalReport::from_json(j));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serkit: speech emotion recognition toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "serkit 0.1.0");

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Extract per-clip LLD matrices (and optionally functionals)");
  extract->add_option("--manifest", ex.manifest, "Manifest CSV or corpus directory")->required();
  extract->add_option("--filename-rule", ex.filename_rule, "Regex for directory manifests (gender, speaker, label)");
  extract->add_option("--frame-ms", ex.frame_ms, "Frame length: 32 or 100")->capture_default_str();
  extract->add_option("--out", ex.out, "Output directory")->required();
  extract->add_option("--functional-set", ex.functional_set, "Also write functionals (hand_crafted_624, large)");
  extract->add_option("--format", ex.format, "LLD file format: bin or csv")->capture_default_str();
  extract->add_option("--workers", ex.workers, "Worker threads (default: SERKIT_NUM_WORKERS or all cores)");

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train one model and evaluate it on the test split");
  train->add_option("--config", tr.config, "Run config JSON; flags override its values");
  train->add_option("--manifest", tr.manifest, "Manifest CSV or corpus directory");
  train->add_option("--filename-rule", tr.filename_rule, "Regex for directory manifests");
  train->add_option("--features", tr.features,
                    "handcrafted_lld, lld_dir, functional_csv or handcrafted_functionals (default handcrafted_lld)");
  train->add_option("--frame-ms", tr.frame_ms, "Frame length: 32 or 100 (default 32)");
  train->add_option("--functional-set", tr.functional_set, "Functional set name (default hand_crafted_624)");
  train->add_option("--feature-path", tr.feature_path, "LLD directory or functional CSV");
  train->add_option("--model", tr.model,
                    "dnn_frames, blstm, attn_blstm, cnn_attn_blstm, dnn_func, cnn_func or svm_func");
  train->add_option("--model-json", tr.model_json, "Model spec overrides as JSON, e.g. '{\"lstm_hidden\":32}'");
  train->add_option("--optimizer", tr.optimizer, "adam or sgd (default adam)");
  train->add_option("--lr", tr.lr, "Learning rate (default 0.001)");
  train->add_option("--batch-size", tr.batch_size, "Batch size (default 16)");
  train->add_option("--epochs", tr.epochs, "Maximum epochs (default 100)");
  train->add_option("--patience", tr.patience, "Early-stopping patience in epochs, 0 disables (default 10)");
  train->add_option("--seed", tr.seed, "Training seed (default 42)");
  train->add_option("--split-seed", tr.split_seed, "Split seed (default 42)");
  train->add_option("--stop-at-train-wa", tr.stop_at_train_wa, "Stop once training WA reaches this percent");
  train->add_flag("--speaker-disjoint", tr.speaker_disjoint, "Split by speaker instead of stratifying by label");
  train->add_option("--out", tr.out, "Root for run directories")->capture_default_str();
  train->add_option("--workers", tr.workers, "Extraction worker threads");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate a run's checkpoint on one split");
  eval->add_option("--run", ev.run, "Run directory (holds config.json and checkpoint.bin)")->required();
  eval->add_option("--checkpoint", ev.checkpoint, "Checkpoint to use instead of the run's own");
  eval->add_option("--split", ev.split, "train, val or test")->capture_default_str();
  eval->add_option("--workers", ev.workers, "Extraction worker threads");

  GridArgs gr;
  auto* grid = app.add_subcommand("grid", "Run an experiment grid and render the comparison table");
  grid->add_option("--config", gr.config, "Grid config JSON");
  grid->add_option("--preset", gr.preset, "frame_level or utterance_level (default frame_level)");
  grid->add_option("--manifest", gr.manifest, "Manifest CSV or corpus directory");
  grid->add_option("--filename-rule", gr.filename_rule, "Regex for directory manifests");
  grid->add_option("--model-defaults", gr.model_defaults, "Model spec values applied to every cell, as JSON");
  grid->add_option("--epochs", gr.epochs, "Maximum epochs per cell");
  grid->add_option("--seed", gr.seed, "Training seed");
  grid->add_option("--out", gr.out, "Output directory")->capture_default_str();
  grid->add_option("--workers", gr.workers, "Parallel cells and extraction threads");

  ToyArgs ty;
  auto* toy = app.add_subcommand("make-toy-corpus", "Generate the synthetic five-class corpus");
  toy->add_option("--out", ty.out, "Output directory")->required();
  toy->add_option("--seed", ty.options.seed, "Generator seed")->capture_default_str();
  toy->add_option("--clips-per-class", ty.options.clips_per_class, "Clips per class")->capture_default_str();
  toy->add_option("--sample-rate", ty.options.sample_rate, "WAV sample rate")->capture_default_str();

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "Print a run report or grid table");
  report->add_option("input", rp.input, "Run directory, grid directory or report JSON")->required();
  report->add_flag("--csv", rp.csv, "Grid tables as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*extract) return cmd_extract(ex);
    if (*train) return cmd_train(tr);
    if (*eval) return cmd_eval(ev);
    if (*grid) return cmd_grid(gr);
    if (*toy) return cmd_make_toy_corpus(ty);
    if (*report) return cmd_report(rp);
  } catch (const Error& e) {
    log(e.what());
    return is_config_error(e.code()) ? kExitConfig : kExitPartial;
  } catch (const std::exception& e) {
    log(e.what());
    return kExitPartial;
  }
  return kExitConfig;
}
