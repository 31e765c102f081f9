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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "serkit/audio.hpp"
#include "serkit/error.hpp"
#include "serkit/harness.hpp"
#include "serkit/lld.hpp"
#include "serkit/toy_corpus.hpp"

using namespace serkit;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("toy clip: voiced segment then exact silence") {
  Rng rng(1);
  for (int label = 0; label < 5; ++label) {
    const auto clip = synthesize_toy_clip(label, 16000, rng);
    const auto voiced = static_cast<std::size_t>(clip.voiced_seconds * 16000.0);
    CHECK(clip.voiced_seconds >= 1.5);
    CHECK(clip.voiced_seconds <= 3.5);
    CHECK(clip.samples.size() > voiced);
    for (std::size_t i = voiced; i < clip.samples.size(); ++i) REQUIRE(clip.samples[i] == 0.0);
    double peak = 0.0;
    for (double v : clip.samples) peak = std::max(peak, std::abs(v));
    CHECK(peak > 0.1);
    CHECK(peak < 1.0);
  }
  CHECK_THROWS_AS(synthesize_toy_clip(5, 16000, rng), Error);
}

TEST_CASE("toy corpus: layout, manifest, determinism, silent tail frames") {
  const auto root = fs::temp_directory_path() / "serkit_toy_test";
  fs::remove_all(root);
  ToyCorpusOptions opt;
  opt.clips_per_class = 3;
  opt.sample_rate = 22050;
  const auto a = make_toy_corpus(root / "a", opt);
  const auto b = make_toy_corpus(root / "b", opt);
  CHECK(a.clips == 15);
  const auto m = load_manifest(a.manifest);
  CHECK(m.size() == 15);
  for (std::size_t c : m.class_counts()) CHECK(c == 3);
  CHECK(load_manifest(root / "a" / "wav").size() == 15);
  CHECK(slurp(a.manifest) == slurp(b.manifest));
  for (const auto& e : m.entries) CHECK(slurp(e.path) == slurp(root / "b" / "wav" / e.path.filename()));

  const auto llds = extract_llds(load_conditioned(m.entries[0].path), 32);
  std::size_t silent = 0;
  for (std::size_t t = 0; t < llds.num_frames(); ++t) silent += llds.values(t, lld_column::rms) == 0.0;
  CHECK(2 * silent > llds.num_frames());
  fs::remove_all(root);
}
