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


#include "serkit/toy_corpus.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "serkit/audio.hpp"
#include "serkit/error.hpp"
#include "serkit/harness.hpp"

namespace serkit {

namespace {

struct Voice {
  double f0;
  double tilt;     // harmonic k has amplitude k^-tilt
  double am_rate;  // Hz
  double noise;    // relative to the tone peak
};

constexpr std::array<Voice, kNumClasses> kVoices = {{
    {110.0, 0.6, 3.0, 0.02},
    {150.0, 1.0, 5.0, 0.04},
    {200.0, 1.4, 7.0, 0.01},
    {260.0, 1.8, 2.0, 0.06},
    {330.0, 2.2, 9.0, 0.03},
}};

constexpr std::array<char, kNumClasses> kLetters = {'A', 'H', 'N', 'S', 'W'};
constexpr std::size_t kHarmonics = 10;

}  // namespace

ToyClip synthesize_toy_clip(int label, int sample_rate, Rng& rng) {
  if (label < 0 || static_cast<std::size_t>(label) >= kNumClasses) {
    throw Error(Errc::label_out_of_range, "toy label " + std::to_string(label));
  }
  const Voice& v = kVoices[static_cast<std::size_t>(label)];
  const double sr = static_cast<double>(sample_rate);
  const double voiced_s = rng.uniform(1.5, 3.5);
  const double silence_s = rng.uniform(0.5, 2.0);
  const double f0 = v.f0 * rng.uniform(0.95, 1.05);
  const double vibrato = rng.uniform(0.0, 0.02);
  const double phase0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const auto voiced_n = static_cast<std::size_t>(voiced_s * sr);
  const auto total_n = voiced_n + static_cast<std::size_t>(silence_s * sr);
  const auto fade_n = static_cast<std::size_t>(0.02 * sr);

  ToyClip clip;
  clip.voiced_seconds = static_cast<double>(voiced_n) / sr;
  clip.samples.assign(total_n, 0.0);
  std::array<double, kHarmonics> amp{};
  for (std::size_t k = 0; k < kHarmonics; ++k) amp[k] = std::pow(static_cast<double>(k + 1), -v.tilt);
  double phase = phase0;
  double peak = 0.0;
  for (std::size_t i = 0; i < voiced_n; ++i) {
    const double t = static_cast<double>(i) / sr;
    const double inst_f0 = f0 * (1.0 + vibrato * std::sin(2.0 * std::numbers::pi * 5.0 * t));
    phase += 2.0 * std::numbers::pi * inst_f0 / sr;
    double s = 0.0;
    for (std::size_t k = 1; k <= kHarmonics; ++k) {
      if (static_cast<double>(k) * inst_f0 >= 0.45 * sr) break;
      s += amp[k - 1] * std::sin(static_cast<double>(k) * phase);
    }
    s *= 0.6 + 0.4 * std::sin(2.0 * std::numbers::pi * v.am_rate * t);
    clip.samples[i] = s;
    peak = std::max(peak, std::abs(s));
  }
  const double gain = 0.5 / std::max(peak, 1e-12) * rng.uniform(0.6, 1.0);
  for (std::size_t i = 0; i < voiced_n; ++i) {
    double env = 1.0;
    if (i < fade_n) env = static_cast<double>(i) / static_cast<double>(fade_n);
    if (voiced_n - i <= fade_n) env = static_cast<double>(voiced_n - i - 1) / static_cast<double>(fade_n);
    clip.samples[i] = env * (gain * clip.samples[i] + 0.5 * v.noise * rng.uniform(-1.0, 1.0));
  }
  return clip;
}

ToyCorpusSummary make_toy_corpus(const std::filesystem::path& out_dir, const ToyCorpusOptions& options) {
  if (options.clips_per_class == 0 || options.clips_per_class > 1980) {
    throw Error(Errc::config_invalid, "clips_per_class must be in [1, 1980]");
  }
  if (options.sample_rate < 8000) throw Error(Errc::config_invalid, "sample_rate must be >= 8000");
  const auto wav_dir = out_dir / "wav";
  std::filesystem::create_directories(wav_dir);
  Rng rng(options.seed);
  Manifest manifest;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (std::size_t i = 0; i < options.clips_per_class; ++i) {
      const std::size_t speaker = i % 20 + 1;
      const std::size_t take = i / 20 + 1;
      const char gender = speaker % 2 ? 'F' : 'M';
      char name[32];
      std::snprintf(name, sizeof name, "%c%02zu%c%02zu.wav", gender, speaker, kLetters[c], take);
      const ToyClip clip = synthesize_toy_clip(static_cast<int>(c), options.sample_rate, rng);
      write_wav(wav_dir / name, clip.samples, options.sample_rate);
      char spk[8];
      std::snprintf(spk, sizeof spk, "%02zu", speaker);
      manifest.entries.push_back({std::filesystem::path("wav") / name, static_cast<int>(c), spk, std::string(1, gender)});
    }
  }
  ToyCorpusSummary summary;
  summary.manifest = out_dir / "manifest.csv";
  summary.clips = manifest.size();
  write_manifest_csv(summary.manifest, manifest);
  return summary;
}

}  // namespace serkit
