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


#ifndef SERKIT_TOY_CORPUS_HPP_
#define SERKIT_TOY_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "serkit/rng.hpp"

namespace serkit {

// Synthetic five-class corpus of vocal-like signals. Each clip is a voiced
// segment (harmonic tone complex with class-dependent pitch, spectral tilt, AM
// rate and noise level) followed by exact digital silence. The voiced part is
// at most 3.5 s, so less than half of a conditioned 7.52 s clip is voiced.
struct ToyCorpusOptions {
  std::size_t clips_per_class = 40;
  int sample_rate = 44100;
  std::uint64_t seed = 7;
};

struct ToyClip {
  std::vector<double> samples;
  double voiced_seconds = 0.0;
};

ToyClip synthesize_toy_clip(int label, int sample_rate, Rng& rng);

struct ToyCorpusSummary {
  std::filesystem::path manifest;
  std::size_t clips = 0;
};

// Writes <out_dir>/wav/*.wav and <out_dir>/manifest.csv. File names follow the
// default filename rule, e.g. F01A01.wav. Byte-identical for a given seed.
ToyCorpusSummary make_toy_corpus(const std::filesystem::path& out_dir, const ToyCorpusOptions& options = {});

}  // namespace serkit

#endif  // SERKIT_TOY_CORPUS_HPP_
