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
#include <numbers>

#include "oracles.hpp"
#include "serkit/lld.hpp"
#include "serkit/rng.hpp"

using namespace serkit;

namespace {

ConditionedClip tone_clip(double hz, double amp) {
  ConditionedClip c;
  c.samples.resize(kConditionedSamples);
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    c.samples[i] = amp * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / 16000.0);
  }
  return c;
}

ConditionedClip noise_clip(std::uint64_t seed, double amp) {
  Rng rng(seed);
  ConditionedClip c;
  c.samples.resize(kConditionedSamples);
  for (double& v : c.samples) v = rng.uniform(-amp, amp);
  return c;
}

Spectrum blank_spectrum() { return Spectrum{std::vector<double>(257, 0.0), 512, 16000.0 / 512}; }

bool all_finite(const Matrix& m) {
  return std::all_of(m.data().begin(), m.data().end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

TEST_CASE("names: 52 columns in the documented order") {
  const auto& names = hand_crafted_lld_names();
  REQUIRE(names.size() == 52);
  CHECK(names[0] == "mfcc_0");
  CHECK(names[12] == "mfcc_12");
  CHECK(names[13] == "mfcc_0_d");
  CHECK(names[26] == "mfcc_0_dd");
  CHECK(names[lld_column::centroid] == "spectral_centroid");
  CHECK(names[lld_column::bandwidth] == "spectral_bandwidth");
  CHECK(names[lld_column::rolloff] == "spectral_rolloff");
  CHECK(names[lld_column::flatness] == "spectral_flatness");
  CHECK(names[lld_column::rms] == "rms");
  CHECK(names[lld_column::zcr] == "zcr");
  CHECK(names[51] == "contrast_6");
}

TEST_CASE("zcr/rms closed forms") {
  const std::vector<double> zeros(100, 0.0);
  CHECK(zcr_rms(zeros).zcr == 0.0);
  CHECK(zcr_rms(zeros).rms == 0.0);
  std::vector<double> alt(100);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? -1.0 : 1.0;
  CHECK(zcr_rms(alt).zcr == 1.0);
  CHECK(zcr_rms(alt).rms == 1.0);
  const std::vector<double> half(100, 0.5);
  CHECK(zcr_rms(half).zcr == 0.0);
  CHECK(zcr_rms(half).rms == 0.5);
}

TEST_CASE("spectral descriptors: point mass, two points, flat, silent") {
  auto s = blank_spectrum();
  s.magnitudes[64] = 1.0;  // 64 * 31.25 = 2000 Hz
  auto d = spectral_descriptors(s);
  CHECK(d.centroid == doctest::Approx(2000.0));
  CHECK(d.bandwidth == doctest::Approx(0.0));
  CHECK(d.rolloff == doctest::Approx(2000.0));

  s = blank_spectrum();
  s.magnitudes[32] = 2.0;  // 1000 Hz
  s.magnitudes[96] = 2.0;  // 3000 Hz
  d = spectral_descriptors(s);
  CHECK(d.centroid == doctest::Approx(2000.0));
  CHECK(d.bandwidth == doctest::Approx(1000.0));

  s.magnitudes.assign(257, 0.7);
  CHECK(spectral_descriptors(s).flatness == doctest::Approx(1.0).epsilon(1e-9));

  d = spectral_descriptors(blank_spectrum());
  CHECK(d.centroid == 0.0);
  CHECK(d.bandwidth == 0.0);
  CHECK(d.rolloff == 0.0);
  CHECK(d.flatness == 0.0);
}

TEST_CASE("spectral contrast: flat, silent, constructed band") {
  auto s = blank_spectrum();
  for (double c : spectral_contrast(s)) CHECK(c == 0.0);
  s.magnitudes.assign(257, 3.0);
  for (double c : spectral_contrast(s)) CHECK(c == doctest::Approx(0.0));

  // Band 3 is [800, 1600) Hz = bins 26..51, 26 bins; round(0.2 * 26) = 5.
  s.magnitudes.assign(257, 1.0);
  for (std::size_t k = 26; k < 31; ++k) s.magnitudes[k] = 10.0;
  const auto c = spectral_contrast(s);
  CHECK(c[3] == doctest::Approx(std::log(10.0)));
  CHECK(c[2] == doctest::Approx(0.0));
}

TEST_CASE("mfcc: constant log energies and the naive DCT oracle") {
  const MfccComputer m(512, 16000.0);
  const std::vector<double> e_ones(26, std::exp(1.0));
  const auto c = m.from_energies(e_ones);
  const auto expected = oracle::dct2(std::vector<double>(26, 1.0), 13);
  CHECK(c[0] == doctest::Approx(expected[0]).epsilon(1e-12));
  CHECK(c[0] == doctest::Approx(std::sqrt(26.0)).epsilon(1e-12));
  for (std::size_t k = 1; k < 13; ++k) CHECK(std::abs(c[k]) < 1e-12);

  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> e(26), logs(26);
    for (std::size_t i = 0; i < 26; ++i) {
      e[i] = std::exp(rng.uniform(-8.0, 4.0));
      logs[i] = std::log(e[i]);
    }
    const auto fast = m.from_energies(e);
    const auto slow = oracle::dct2(logs, 13);
    for (std::size_t k = 0; k < 13; ++k) {
      CHECK(std::abs(fast[k] - slow[k]) <= 1e-9 * std::max(std::abs(slow[k]), 1e-9));
    }
  }

  const auto floored = mfcc(blank_spectrum());
  for (double v : floored) CHECK(std::isfinite(v));
  CHECK(floored[0] == doctest::Approx(std::log(1e-10) * std::sqrt(26.0)));
}

TEST_CASE("delta: constant, ramp, direct formula") {
  Matrix constant(20, 3, 4.0);
  const Matrix dc = delta(constant);
  for (double v : dc.data()) CHECK(v == 0.0);

  Matrix ramp(20, 1);
  for (std::size_t t = 0; t < 20; ++t) ramp(t, 0) = static_cast<double>(t);
  const auto d = delta(ramp);
  for (std::size_t t = 2; t < 18; ++t) CHECK(d(t, 0) == doctest::Approx(1.0));

  Rng rng(9);
  Matrix x(10, 3);
  for (double& v : x.data()) v = rng.normal();
  const auto fast = delta(x, 2);
  for (std::size_t t = 0; t < 10; ++t) {
    for (std::size_t c = 0; c < 3; ++c) {
      double num = 0.0;
      for (int n = 1; n <= 2; ++n) {
        const auto hi = static_cast<std::size_t>(std::min<int>(static_cast<int>(t) + n, 9));
        const auto lo = static_cast<std::size_t>(std::max<int>(static_cast<int>(t) - n, 0));
        num += n * (x(hi, c) - x(lo, c));
      }
      CHECK(fast(t, c) == doctest::Approx(num / 10.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("extract: shapes, silence, tones, noise") {
  ConditionedClip silence;
  silence.samples.assign(kConditionedSamples, 0.0);
  const auto s32 = extract_llds(silence, 32, "silence");
  CHECK(s32.num_frames() == 469);
  CHECK(s32.num_features() == 52);
  CHECK(all_finite(s32.values));
  for (std::size_t t = 0; t < s32.num_frames(); ++t) {
    CHECK(s32.values(t, lld_column::zcr) == 0.0);
    CHECK(s32.values(t, lld_column::rms) == 0.0);
    CHECK(s32.values(t, lld_column::centroid) == 0.0);
  }
  const auto s100 = extract_llds(silence, 100);
  CHECK(s100.num_frames() == 149);
  CHECK(all_finite(s100.values));

  const auto tone = extract_llds(tone_clip(1000.0, 1.0), 32);
  CHECK(all_finite(tone.values));
  for (std::size_t t = 1; t + 1 < tone.num_frames(); ++t) {
    CHECK(std::abs(tone.values(t, lld_column::centroid) - 1000.0) <= 15.0);
    CHECK(std::abs(tone.values(t, lld_column::zcr) - 2.0 * 1000.0 / 16000.0) <= 0.01);
  }
  CHECK(all_finite(extract_llds(noise_clip(1, 1.0), 100).values));
}

TEST_CASE("extract: scaling invariances") {
  const auto base = noise_clip(4, 0.2);
  auto scaled = base;
  for (double& v : scaled.samples) v *= 3.0;
  const auto a = extract_llds(base, 32);
  const auto b = extract_llds(scaled, 32);
  for (std::size_t t = 0; t < a.num_frames(); t += 37) {
    for (std::size_t c : {lld_column::zcr, lld_column::centroid, lld_column::bandwidth, lld_column::rolloff,
                          lld_column::flatness}) {
      CHECK(b.values(t, c) == doctest::Approx(a.values(t, c)).epsilon(1e-9));
    }
    for (std::size_t c = 0; c < kNumContrastBands; ++c) {
      CHECK(b.values(t, lld_column::contrast + c) == doctest::Approx(a.values(t, lld_column::contrast + c)).epsilon(1e-9));
    }
    CHECK(b.values(t, lld_column::rms) == doctest::Approx(3.0 * a.values(t, lld_column::rms)));
    // Power scales by 9; the orthonormal DCT maps a constant log shift to c0 only.
    CHECK(b.values(t, 0) - a.values(t, 0) == doctest::Approx(std::log(9.0) * std::sqrt(26.0)));
    for (std::size_t k = 1; k < 13; ++k) CHECK(b.values(t, k) == doctest::Approx(a.values(t, k)).epsilon(1e-9));
  }
}

TEST_CASE("extract: parallel paths equal the serial reference") {
  std::vector<ConditionedClip> clips = {noise_clip(21, 0.5), tone_clip(440.0, 0.3), noise_clip(22, 0.01)};
  const auto fast = extract_llds_batch(clips, 32);
  const auto slow = reference::extract_llds_batch(clips, 32);
  REQUIRE(fast.size() == slow.size());
  for (std::size_t i = 0; i < fast.size(); ++i) {
    CHECK(fast[i].values == slow[i].values);
    CHECK(fast[i].clip_id == slow[i].clip_id);
  }
  CHECK(extract_llds(clips[0], 100).values == reference::extract_llds(clips[0], 100).values);
}

TEST_CASE("persist: csv and binary round trips") {
  const auto m = extract_llds(noise_clip(31, 0.4), 100, "clip_a");
  const auto dir = std::filesystem::temp_directory_path() / "serkit_lld_test";
  std::filesystem::create_directories(dir);
  write_lld_csv(dir / "a.csv", m);
  const auto from_csv = read_lld_csv(dir / "a.csv", 100);
  CHECK(from_csv.values == m.values);
  CHECK(from_csv.feature_names == m.feature_names);
  write_lld_binary(dir / "a.lld", m);
  const auto from_bin = read_lld_binary(dir / "a.lld");
  CHECK(from_bin.values == m.values);
  CHECK(from_bin.frame_ms == 100);
  CHECK(read_lld_file(dir / "a.lld").values == m.values);
  std::filesystem::remove_all(dir);
}
