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


#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "oracles.hpp"
#include "serkit/error.hpp"
#include "serkit/experiment.hpp"
#include "serkit/harness.hpp"
#include "serkit/rng.hpp"

using namespace serkit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "serkit_harness_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void touch(const fs::path& p) { std::ofstream(p) << "x"; }

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::io_error;
}

Manifest synthetic_manifest(const std::vector<std::size_t>& per_class) {
  Manifest m;
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    for (std::size_t i = 0; i < per_class[c]; ++i) {
      ManifestEntry e;
      e.path = "clips/c" + std::to_string(c) + "_" + std::to_string(i) + ".wav";
      e.label = static_cast<int>(c);
      e.speaker = std::to_string(i % 7);
      m.entries.push_back(e);
    }
  }
  return m;
}

// Class c is centred on +3 along axis c, the rest is Gaussian noise.
Dataset blob_dataset(std::size_t per_class, nn::Shape shape, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.example_shape = shape;
  const std::size_t size = nn::shape_size(shape);
  const std::size_t cols = shape.back();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<double> ex(size);
      for (std::size_t k = 0; k < size; ++k) ex[k] = rng.normal() + (k % cols == c ? 3.0 : 0.0);
      d.examples.push_back(std::move(ex));
      d.labels.push_back(static_cast<int>(c));
      d.ids.push_back("b" + std::to_string(c) + "_" + std::to_string(i));
    }
  }
  return d;
}

}  // namespace

TEST_CASE("labels: five classes in fixed order") {
  CHECK(class_index("anger") == 0);
  CHECK(class_index("surprise") == 4);
  CHECK(code_of([] { class_index("fear"); }) == Errc::unknown_label);
  CHECK(code_of([] { class_index("joy"); }) == Errc::unknown_label);
}

TEST_CASE("manifest csv: fear filter, header, relative paths, errors") {
  const auto dir = scratch("csv");
  for (const char* f : {"a.wav", "b.wav", "c.wav", "d.wav", "e.wav", "f.wav"}) touch(dir / f);
  write(dir / "m.csv", "path,label,speaker,gender\na.wav,anger,1,F\nb.wav,fear,1,F\nc.wav,happiness,2,M\n"
                       "d.wav,neutral\ne.wav,Sadness,3,F\nf.wav,surprise,3,F\n");
  const auto m = load_manifest(dir / "m.csv");
  CHECK(m.size() == 5);
  CHECK(m.dropped == 1);
  CHECK(m.entries[0].path == (dir / "a.wav").lexically_normal());
  CHECK(m.entries[0].speaker == "1");
  CHECK(m.entries[1].gender == "M");
  CHECK(m.entries[3].label == 3);
  CHECK(m.labels() == std::vector<int>{0, 1, 2, 3, 4});

  write(dir / "dup.csv", "a.wav,anger\n./a.wav,happiness\n");
  CHECK(code_of([&] { load_manifest(dir / "dup.csv"); }) == Errc::duplicate_path);
  write(dir / "unk.csv", "a.wav,boredom\n");
  CHECK(code_of([&] { load_manifest(dir / "unk.csv"); }) == Errc::unknown_label);
  write(dir / "miss.csv", "zzz.wav,anger\n");
  CHECK(code_of([&] { load_manifest(dir / "miss.csv"); }) == Errc::missing_file);
  CHECK(load_manifest(dir / "miss.csv", {std::nullopt, false}).size() == 1);
  write(dir / "fear.csv", "b.wav,fear\n");
  CHECK(code_of([&] { load_manifest(dir / "fear.csv"); }) == Errc::empty_manifest);
  CHECK(code_of([&] { load_manifest(dir / "none.csv"); }) == Errc::missing_file);

  write_manifest_csv(dir / "out.csv", m);
  const auto back = load_manifest(dir / "out.csv");
  REQUIRE(back.size() == m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(back.entries[i].path == m.entries[i].path);
    CHECK(back.entries[i].label == m.entries[i].label);
  }
}

TEST_CASE("manifest directory: 3000 files with 38 fear files") {
  const auto dir = scratch("dir");
  const std::string letters = "AHNSW";
  std::size_t made = 0;
  for (std::size_t spk = 1; spk <= 87 && made < 3000; ++spk) {
    for (std::size_t k = 1; k <= 99 && made < 3000; ++k) {
      char name[32];
      const char label = made < 38 ? 'F' : letters[made % 5];
      std::snprintf(name, sizeof name, "%c%02zu%c%02zu.wav", spk % 3 ? 'M' : 'F', spk, label, k);
      touch(dir / name);
      ++made;
    }
  }
  touch(dir / "README.txt");
  const auto m = load_manifest(dir);
  CHECK(m.size() == 2962);
  CHECK(m.dropped == 38);
  CHECK(m.entries.front().speaker.size() == 2);
  CHECK((m.entries.front().gender == "F" || m.entries.front().gender == "M"));

  FilenameRule rule;
  rule.letters.erase("W");
  const auto dir2 = scratch("dir2");
  touch(dir2 / "F01W01.wav");
  CHECK(code_of([&] { load_manifest(dir2, {rule, true}); }) == Errc::unknown_label);
}

TEST_CASE("split: sizes, stratification, determinism, order independence") {
  const auto one = synthetic_manifest({100});
  const auto s = split_manifest(one, {}, 42);
  CHECK(s.train.size() == 80);
  CHECK(s.val.size() == 10);
  CHECK(s.test.size() == 10);

  const auto m = synthetic_manifest({20, 20, 20, 20, 20});
  const auto a = split_manifest(m, {}, 42);
  for (const Manifest* part : {&a.train, &a.val, &a.test}) {
    std::array<std::size_t, 5> counts{};
    for (const auto& e : part->entries) ++counts[static_cast<std::size_t>(e.label)];
    const std::size_t want = part == &a.train ? 16 : 2;
    for (std::size_t c : counts) CHECK(c == want);
  }
  std::set<fs::path> all;
  for (const Manifest* part : {&a.train, &a.val, &a.test}) {
    for (const auto& e : part->entries) CHECK(all.insert(e.path).second);
  }
  CHECK(all.size() == m.size());

  auto shuffled = m;
  Rng rng(1);
  rng.shuffle(shuffled.entries);
  const auto b = split_manifest(shuffled, {}, 42);
  auto paths = [](const Manifest& x) {
    std::vector<fs::path> p;
    for (const auto& e : x.entries) p.push_back(e.path);
    return p;
  };
  CHECK(paths(a.test) == paths(b.test));
  CHECK(paths(a.val) == paths(b.val));
  CHECK(paths(split_manifest(m, {}, 42).train) == paths(a.train));
  CHECK(paths(split_manifest(m, {}, 43).test) != paths(a.test));

  CHECK(code_of([&] { split_manifest(synthetic_manifest({20, 2}), {}, 1); }) == Errc::class_too_small);
  CHECK(code_of([&] { split_manifest(m, {0.5, 0.1, 0.1}, 1); }) == Errc::config_invalid);

  const auto sd = split_manifest(m, {}, 42, true);
  std::set<std::string> train_speakers;
  for (const auto& e : sd.train.entries) train_speakers.insert(e.speaker);
  for (const auto& e : sd.test.entries) CHECK(train_speakers.count(e.speaker) == 0);
  CHECK(sd.train.size() + sd.val.size() + sd.test.size() == m.size());
}

TEST_CASE("metrics: hand example, identity, single-class predictions") {
  const std::vector<int> truth = {0, 0, 0, 0, 1, 1};
  const std::vector<int> pred = {0, 0, 0, 1, 1, 0};
  const auto r = compute_metrics(truth, pred);
  CHECK(r.ua == 62.5);
  CHECK(r.wa == 100.0 * 4.0 / 6.0);
  CHECK(r.present[0]);
  CHECK_FALSE(r.present[2]);
  CHECK(r.total == 6);

  const auto perfect = compute_metrics(truth, truth);
  CHECK(perfect.ua == 100.0);
  CHECK(perfect.wa == 100.0);

  std::vector<int> balanced, constant;
  for (int c = 0; c < 5; ++c) {
    for (int k = 0; k < 3; ++k) {
      balanced.push_back(c);
      constant.push_back(2);
    }
  }
  const auto flat = compute_metrics(balanced, constant);
  CHECK(flat.wa == doctest::Approx(20.0));
  CHECK(flat.ua == doctest::Approx(20.0));

  CHECK(code_of([] { compute_metrics(std::vector<int>{1, 2}, std::vector<int>{1}); }) == Errc::length_mismatch);
  CHECK(code_of([] { compute_metrics(std::vector<int>{}, std::vector<int>{}); }) == Errc::empty_input);
  CHECK(code_of([] { compute_metrics(std::vector<int>{5}, std::vector<int>{0}); }) == Errc::label_out_of_range);
}

TEST_CASE("metrics: exhaustive brute-force agreement at length 4") {
  std::vector<int> truth(4), pred(4);
  std::size_t mismatches = 0;
  for (int code = 0; code < 390625; ++code) {
    int v = code;
    for (std::size_t i = 0; i < 4; ++i, v /= 5) truth[i] = v % 5;
    for (std::size_t i = 0; i < 4; ++i, v /= 5) pred[i] = v % 5;
    const auto fast = compute_metrics(truth, pred);
    const auto slow = oracle::brute_metrics(truth, pred);
    bool same = fast.ua == slow.ua && fast.wa == slow.wa;
    for (std::size_t a = 0; a < 5; ++a) {
      for (std::size_t b = 0; b < 5; ++b) same &= static_cast<long>(fast.confusion[a][b]) == slow.confusion[a][b];
    }
    mismatches += !same;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("metrics: invariant under consistent relabeling") {
  Rng rng(3);
  std::vector<int> perm = {3, 0, 4, 1, 2};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> t(12), p(12), tp(12), pp(12);
    for (std::size_t i = 0; i < 12; ++i) {
      t[i] = static_cast<int>(rng.below(5));
      p[i] = static_cast<int>(rng.below(5));
      tp[i] = perm[static_cast<std::size_t>(t[i])];
      pp[i] = perm[static_cast<std::size_t>(p[i])];
    }
    const auto a = compute_metrics(t, p);
    const auto b = compute_metrics(tp, pp);
    CHECK(a.wa == b.wa);
    CHECK(a.ua == doctest::Approx(b.ua).epsilon(1e-12));
  }
}

TEST_CASE("eval report: json round trip") {
  auto r = compute_metrics(std::vector<int>{0, 1, 1, 3}, std::vector<int>{0, 1, 0, 3});
  r.metadata = {{"seed", 5}};
  const auto back = EvalReport::from_json(nlohmann::json::parse(r.to_json().dump()));
  CHECK(back.confusion == r.confusion);
  CHECK(back.ua == r.ua);
  CHECK(back.wa == r.wa);
  CHECK(back.present == r.present);
  CHECK(back.metadata == r.metadata);
  CHECK(r.to_json()["per_class_recall"]["neutral"].is_null());
}

TEST_CASE("dataset: features keyed by clip id") {
  FeatureStore store;
  store.example_shape = {3};
  store.examples["a"] = {1, 2, 3};
  store.examples["b"] = {4, 5, 6};
  Manifest m;
  m.entries.push_back({"x/a.wav", 1, "", ""});
  m.entries.push_back({"y/b.wav", 2, "", ""});
  const auto d = make_dataset(store, m);
  CHECK(d.size() == 2);
  const std::vector<std::size_t> idx = {1, 0};
  const auto t = d.batch(idx);
  CHECK(t.shape() == nn::Shape{2, 3});
  CHECK(t.values() == std::vector<double>{4, 5, 6, 1, 2, 3});
  m.entries.push_back({"z/c.wav", 0, "", ""});
  CHECK(code_of([&] { make_dataset(store, m); }) == Errc::feature_missing);
}

TEST_CASE("train: zero epochs returns the initialized model") {
  const auto train = blob_dataset(4, {12}, 1);
  ModelSpec spec;
  spec.kind = ModelKind::dnn_func;
  spec.dense_sizes = {8};
  TrainConfig cfg;
  cfg.max_epochs = 0;
  auto r = train_model(spec, train, Dataset{}, cfg);
  CHECK(r.history.empty());
  CHECK(r.best_epoch == 0);
  auto fresh = Model::build(spec, {12}, cfg.seed);
  const auto a = r.model.state();
  const auto b = fresh.state();
  for (const auto& [name, t] : b.tensors) CHECK(*a.find(name) == t);
}

TEST_CASE("train: overfits a small set, deterministic history, early stopping") {
  const auto train = blob_dataset(4, {24}, 2);
  ModelSpec spec;
  spec.kind = ModelKind::dnn_func;
  spec.dense_sizes = {32, 16};
  TrainConfig cfg;
  cfg.max_epochs = 200;
  cfg.batch_size = 8;
  cfg.stop_at_train_wa = 100.0;
  const auto a = train_model(spec, train, Dataset{}, cfg);
  CHECK(a.history.back().train_wa >= 95.0);
  const auto b = train_model(spec, train, Dataset{}, cfg);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].train_loss == b.history[i].train_loss);
    CHECK(a.history[i].train_wa == b.history[i].train_wa);
  }
  CHECK(a.model.state() == b.model.state());

  // 21 examples with batch 4 leave a trailing single example to merge.
  auto odd = blob_dataset(5, {24}, 3);
  odd.examples.pop_back();
  odd.examples.pop_back();
  odd.examples.pop_back();
  odd.examples.pop_back();
  odd.labels.resize(21);
  odd.ids.resize(21);
  cfg.batch_size = 4;
  cfg.max_epochs = 2;
  cfg.stop_at_train_wa = 0.0;
  CHECK(train_model(spec, odd, Dataset{}, cfg).history.size() == 2);

  const auto val = blob_dataset(2, {24}, 4);
  cfg.max_epochs = 50;
  cfg.patience = 3;
  auto early = train_model(spec, train, val, cfg);
  CHECK(early.history.size() <= early.best_epoch + 3);
  CHECK(early.best_val_ua == doctest::Approx(compute_metrics(val.labels, early.model.predict_labels(val)).ua));
}

TEST_CASE("train: svm path") {
  const auto train = blob_dataset(6, {10}, 5);
  ModelSpec spec;
  spec.kind = ModelKind::svm_func;
  auto r = train_model(spec, train, blob_dataset(2, {10}, 6), TrainConfig{});
  CHECK(r.model.is_svm());
  CHECK(r.history.size() == 1);
  CHECK(r.history[0].train_wa >= 95.0);
  auto back = Classifier::from_checkpoint(nn::decode_checkpoint(nn::encode_checkpoint(r.model.state())));
  CHECK(back.is_svm());
  CHECK(back.predict_labels(train) == r.model.predict_labels(train));
  CHECK(code_of([&] { train_model(spec, blob_dataset(3, {4, 10}, 1), Dataset{}, TrainConfig{}); }) ==
        Errc::incompatible_shape);
}

TEST_CASE("configs: json round trips and hashing") {
  RunConfig c;
  c.manifest = "data/manifest.csv";
  c.features.source = FeatureSource::handcrafted_functionals;
  c.features.functional_set = "large";
  c.model.kind = ModelKind::cnn_func;
  c.train.max_epochs = 7;
  const auto j = run_config_to_json(c);
  const auto back = run_config_from_json(j);
  CHECK(run_config_to_json(back) == j);
  CHECK(config_hash(j) == config_hash(run_config_to_json(back)));
  CHECK(config_hash(j).size() == 16);
  c.train.seed = 43;
  CHECK(config_hash(run_config_to_json(c)) != config_hash(j));
  // FNV-1a 64 of the empty JSON object "{}".
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : std::string("{}")) h = (h ^ ch) * 1099511628211ULL;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  CHECK(config_hash(nlohmann::json::object()) == hex);

  CHECK(code_of([] { run_config_from_json({{"bogus", 1}}); }) == Errc::config_invalid);
  CHECK(code_of([] { train_config_from_json({{"learning_rate", -1.0}}); }) == Errc::config_invalid);
  CHECK(code_of([] { feature_config_from_json({{"frame_ms", 25}}); }) == Errc::config_invalid);

  const auto grid = grid_config_from_json({{"manifest", "m.csv"}, {"preset", "frame_level"},
                                           {"model_defaults", {{"lstm_hidden", 16}}}});
  REQUIRE(grid.cells.size() == 8);
  const std::vector<std::string> order = {"BLSTM", "Attention-BLSTM", "CNN + Attention-BLSTM", "DNN"};
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(grid.cells[i].method == order[i % 4]);
    CHECK(grid.cells[i].group == (i < 4 ? "100ms" : "32ms"));
    CHECK(grid.cells[i].model.lstm_hidden == 16);
  }
  CHECK(grid_config_from_json(grid_config_to_json(grid)).cells.size() == 8);
  CHECK(grid_preset("utterance_level").size() == 6);
}

TEST_CASE("grid: one cell over a functional csv") {
  const auto dir = scratch("grid");
  std::string manifest = "path,label\n";
  std::string csv = "clip_id,f0,f1,f2,f3,f4\n";
  Rng rng(9);
  for (int c = 0; c < 5; ++c) {
    for (int i = 0; i < 6; ++i) {
      const std::string id = "k" + std::to_string(c) + "_" + std::to_string(i);
      touch(dir / (id + ".wav"));
      manifest += id + ".wav," + std::string(kClassNames[static_cast<std::size_t>(c)]) + "\n";
      csv += id;
      for (int k = 0; k < 5; ++k) csv += "," + std::to_string(rng.normal() + (k == c ? 4.0 : 0.0));
      csv += "\n";
    }
  }
  write(dir / "manifest.csv", manifest);
  write(dir / "feats.csv", csv);
  GridConfig g;
  g.manifest = dir / "manifest.csv";
  g.ratios = {0.6, 0.2, 0.2};
  g.workers = 2;
  GridCell cell;
  cell.group = "csv";
  cell.method = "SVM";
  cell.features.source = FeatureSource::functional_csv;
  cell.features.path = dir / "feats.csv";
  cell.features.expected_dim = 5;
  cell.model.kind = ModelKind::svm_func;
  g.cells = {cell};
  GridCell broken = cell;
  broken.method = "broken";
  broken.features.expected_dim = 7;
  g.cells.push_back(broken);
  const auto results = run_grid(g, dir / "out");
  REQUIRE(results.size() == 2);
  INFO(results[0].error);
  CHECK(results[0].ok);
  CHECK(results[0].report.total == 5);
  CHECK_FALSE(results[1].ok);
  CHECK(fs::exists(dir / "out" / "runs" / results[0].hash / "checkpoint.bin"));
  CHECK(fs::exists(dir / "out" / "grid_report.json"));
  const std::string table = render_table_text({results[0]});
  CHECK(std::count(table.begin(), table.end(), '\n') == 2);
  CHECK(render_table_csv(results).find("failed") != std::string::npos);
}
