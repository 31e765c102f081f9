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
#include <numbers>

#include "oracles.hpp"
#include "serkit/dsp.hpp"
#include "serkit/error.hpp"
#include "serkit/rng.hpp"

using namespace serkit;

namespace {

ConditionedClip constant_clip(double v) {
  ConditionedClip c;
  c.samples.assign(kConditionedSamples, v);
  return c;
}

}  // namespace

TEST_CASE("framing: frame counts and layout") {
  const auto clip = constant_clip(1.0);
  const auto f32 = frame_signal(clip, 32);
  CHECK(f32.frame_len == 512);
  CHECK(f32.hop == 256);
  CHECK(f32.num_frames() == 469);
  const auto f100 = frame_signal(clip, 100);
  CHECK(f100.frame_len == 1600);
  CHECK(f100.hop == 800);
  CHECK(f100.num_frames() == 149);
  for (double v : f32.frames.data()) CHECK(v == 1.0);
  CHECK_THROWS_AS(frame_signal(clip, 25), Error);
}

TEST_CASE("framing: frame i starts at sample i * hop") {
  std::vector<double> ramp(5000);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
  const auto f = frame_signal(ramp, 16000, 512, 256);
  CHECK(f.num_frames() == (5000 - 512) / 256 + 1);
  for (std::size_t i = 0; i < f.num_frames(); ++i) {
    CHECK(f.frames(i, 0) == static_cast<double>(i * 256));
    CHECK(f.frames(i, 511) == static_cast<double>(i * 256 + 511));
  }
}

TEST_CASE("window: rectangular identity, hamming closed form and symmetry") {
  const auto rect = make_window(WindowKind::rectangular, 512);
  for (double v : rect) CHECK(v == 1.0);

  FrameMatrix ones{Matrix(2, 512, 1.0), 512, 256, 16000};
  const auto windowed = apply_window(ones, WindowKind::hamming);
  const auto w = make_window(WindowKind::hamming, 512);
  for (std::size_t n = 0; n < 512; ++n) CHECK(windowed.frames(1, n) == w[n]);
  CHECK(w[0] == 0.08);
  double peak = 0.0;
  for (std::size_t n = 0; n < 512; ++n) {
    CHECK(w[n] == w[511 - n]);
    CHECK(w[n] == doctest::Approx(0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / 511.0)).epsilon(1e-14));
    peak = std::max(peak, w[n]);
  }
  CHECK(peak < 1.0);
}

TEST_CASE("fft: impulse, zeros, power-of-two check") {
  std::vector<double> impulse(8, 0.0);
  impulse[0] = 1.0;
  const auto s = fft_magnitude(impulse, 8);
  REQUIRE(s.magnitudes.size() == 5);
  for (double m : s.magnitudes) CHECK(m == doctest::Approx(1.0).epsilon(1e-15));
  const auto z = fft_magnitude(std::vector<double>(512, 0.0), 512);
  for (double m : z.magnitudes) CHECK(m == 0.0);
  CHECK(s.bin_hz == 16000.0 / 8);
  CHECK_THROWS_AS(FftPlan(500), Error);
  CHECK_THROWS_AS(fft_magnitude(std::vector<double>(600, 0.0), 512), Error);
}

TEST_CASE("fft: matches the naive DFT on random frames, with zero padding") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(trial % 2 ? 512 : 400);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    const auto fast = fft_magnitude(x, 512);
    const auto slow = oracle::dft_magnitude(x, 512);
    for (std::size_t k = 0; k < slow.size(); ++k) {
      CHECK(std::abs(fast.magnitudes[k] - slow[k]) <= 1e-9 * std::max(slow[k], 1e-12));
    }
  }
}

TEST_CASE("fft: Parseval and linearity") {
  Rng rng(12);
  std::vector<double> x(512);
  for (double& v : x) v = rng.normal();
  const auto s = fft_magnitude(x, 512);
  double time_energy = 0.0;
  for (double v : x) time_energy += v * v;
  // Full spectrum from the half spectrum: interior bins appear twice.
  double freq_energy = 0.0;
  for (std::size_t k = 0; k < s.magnitudes.size(); ++k) {
    const double m2 = s.magnitudes[k] * s.magnitudes[k];
    freq_energy += (k == 0 || k == 256) ? m2 : 2.0 * m2;
  }
  CHECK(freq_energy / 512.0 == doctest::Approx(time_energy).epsilon(1e-6));

  std::vector<double> scaled = x;
  for (double& v : scaled) v *= 2.5;
  const auto s2 = fft_magnitude(scaled, 512);
  for (std::size_t k = 0; k < s.magnitudes.size(); ++k) {
    CHECK(s2.magnitudes[k] == doctest::Approx(2.5 * s.magnitudes[k]).epsilon(1e-12));
  }
}

TEST_CASE("mel: scale, centers, band validation") {
  CHECK(hz_to_mel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)));
  CHECK(mel_to_hz(hz_to_mel(1234.5)) == doctest::Approx(1234.5));
  const MelFilterbank fb(26, 512, 16000.0, 0.0, 8000.0);
  CHECK(fb.num_filters() == 26);
  CHECK(fb.edges_hz().front() == 0.0);
  CHECK(fb.edges_hz().back() == doctest::Approx(8000.0));
  for (std::size_t i = 1; i < 26; ++i) CHECK(fb.center_hz(i) > fb.center_hz(i - 1));
  CHECK_THROWS_AS(MelFilterbank(26, 512, 16000.0, 4000.0, 4000.0), Error);
  CHECK_THROWS_AS(MelFilterbank(26, 512, 16000.0, 0.0, 9000.0), Error);

  Spectrum zero{std::vector<double>(257, 0.0), 512, 16000.0 / 512};
  for (double e : fb.apply(zero)) CHECK(e == 0.0);
}

TEST_CASE("mel: a 1 kHz tone peaks in the filter centred nearest 1 kHz") {
  std::vector<double> x(512);
  for (std::size_t n = 0; n < 512; ++n) x[n] = std::sin(2.0 * std::numbers::pi * 1000.0 * n / 16000.0);
  const auto w = make_window(WindowKind::hamming, 512);
  for (std::size_t n = 0; n < 512; ++n) x[n] *= w[n];
  const auto energies = mel_filterbank(fft_magnitude(x, 512), 26, 0.0, 8000.0);
  const MelFilterbank fb(26, 512, 16000.0, 0.0, 8000.0);
  std::size_t nearest = 0;
  for (std::size_t i = 0; i < 26; ++i) {
    if (std::abs(fb.center_hz(i) - 1000.0) < std::abs(fb.center_hz(nearest) - 1000.0)) nearest = i;
  }
  const auto argmax = static_cast<std::size_t>(std::max_element(energies.begin(), energies.end()) - energies.begin());
  CHECK(argmax == nearest);
}

TEST_CASE("mel: filters weight the power spectrum") {
  Spectrum s{std::vector<double>(257, 0.0), 512, 16000.0 / 512};
  const MelFilterbank fb(26, 512, 16000.0, 0.0, 8000.0);
  s.magnitudes[40] = 1.0;
  const auto e1 = fb.apply(s);
  s.magnitudes[40] = 3.0;
  const auto e3 = fb.apply(s);
  for (std::size_t i = 0; i < 26; ++i) CHECK(e3[i] == doctest::Approx(9.0 * e1[i]));
}
