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
#include "serkit/audio.hpp"
#include "serkit/error.hpp"
#include "serkit/rng.hpp"

using namespace serkit;

namespace {

std::vector<double> sine(double hz, double rate, std::size_t n, double amp = 1.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * std::numbers::pi * hz * i / rate);
  return x;
}

Errc error_code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected serkit::Error");
  return Errc::io_error;
}

// Hand-assembled container with an arbitrary format tag and bit depth.
std::vector<std::uint8_t> raw_wav(std::uint16_t format, std::uint16_t bits, std::uint32_t data_bytes) {
  std::vector<std::uint8_t> b;
  auto put = [&](std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  auto tag = [&](const char* s) { b.insert(b.end(), s, s + 4); };
  tag("RIFF");
  put(36 + data_bytes, 4);
  tag("WAVE");
  tag("fmt ");
  put(16, 4);
  put(format, 2);
  put(1, 2);
  put(16000, 4);
  put(16000 * bits / 8, 4);
  put(bits / 8, 2);
  put(bits, 2);
  tag("data");
  put(data_bytes, 4);
  b.resize(b.size() + data_bytes, 0);
  return b;
}

}  // namespace

TEST_CASE("decode: one second of silence") {
  const std::vector<double> zeros(44100, 0.0);
  const auto clip = decode_wav_bytes(encode_wav_bytes(zeros, 44100));
  CHECK(clip.sample_rate == 44100);
  REQUIRE(clip.samples.size() == 44100);
  CHECK(std::all_of(clip.samples.begin(), clip.samples.end(), [](double v) { return v == 0.0; }));
  CHECK(clip.duration_s() == 1.0);
}

TEST_CASE("decode: opposite stereo channels average to zero") {
  std::vector<double> inter;
  for (int i = 0; i < 1000; ++i) {
    inter.push_back(0.5);
    inter.push_back(-0.5);
  }
  const auto clip = decode_wav_bytes(encode_wav_bytes(inter, 22050, 2));
  REQUIRE(clip.samples.size() == 1000);
  for (double v : clip.samples) CHECK(v == 0.0);
}

TEST_CASE("decode: full-scale 440 Hz sine") {
  const auto x = sine(440.0, 16000.0, 16000);
  const auto clip = decode_wav_bytes(encode_wav_bytes(x, 16000));
  double peak = 0.0;
  for (double v : clip.samples) peak = std::max(peak, std::abs(v));
  CHECK(peak >= 0.9999);
  CHECK(peak <= 1.0);
  const std::span<const double> head(clip.samples.data(), 4000);
  CHECK(std::abs(oracle::dft_peak_hz(head, 16000.0) - 440.0) <= 1.0);
}

TEST_CASE("decode: PCM16 round trip is exact") {
  Rng rng(7);
  std::vector<double> x(5000);
  for (double& v : x) v = static_cast<double>(static_cast<int>(rng.below(65536)) - 32768) / 32768.0;
  const auto bytes = encode_wav_bytes(x, 8000);
  const auto clip = decode_wav_bytes(bytes);
  CHECK(clip.samples == x);
  CHECK(encode_wav_bytes(clip.samples, 8000) == bytes);
}

TEST_CASE("decode: error taxonomy") {
  std::vector<std::uint8_t> junk = {'R', 'I', 'F', 'X', 0, 0, 0, 0, 'W', 'A', 'V', 'E'};
  CHECK(error_code_of([&] { decode_wav_bytes(junk); }) == Errc::malformed_container);
  CHECK(error_code_of([&] { decode_wav_bytes(raw_wav(3, 32, 8)); }) == Errc::unsupported_encoding);
  CHECK(error_code_of([&] { decode_wav_bytes(raw_wav(1, 24, 6)); }) == Errc::unsupported_encoding);
  CHECK(error_code_of([&] { decode_wav_bytes(raw_wav(1, 16, 0)); }) == Errc::empty_audio);
  auto truncated = raw_wav(1, 16, 100);
  truncated.resize(truncated.size() - 50);
  CHECK(error_code_of([&] { decode_wav_bytes(truncated); }) == Errc::malformed_container);
}

TEST_CASE("resample: identity and length arithmetic") {
  AudioClip c{sine(300.0, 16000.0, 1234), 16000, "x"};
  CHECK(resample(c, 16000).samples == c.samples);
  AudioClip one_second{sine(1000.0, 44100.0, 44100, 0.5), 44100, "y"};
  CHECK(resample(one_second, 16000).samples.size() == 16000);
  AudioClip odd{std::vector<double>(1001, 0.1), 44100, "z"};
  CHECK(resample(odd, 16000).samples.size() == static_cast<std::size_t>(std::lround(1001 * 16000.0 / 44100.0)));
}

TEST_CASE("resample: 1 kHz tone survives 44.1k -> 16k") {
  AudioClip c{sine(1000.0, 44100.0, 44100, 0.5), 44100, "tone"};
  const auto out = resample(c, 16000);
  // Skip filter edge transients.
  const std::span<const double> mid(out.samples.data() + 4000, 8000);
  CHECK(std::abs(oracle::dft_peak_hz(mid, 16000.0) - 1000.0) <= 2.0);
  double sq = 0.0;
  for (double v : mid) sq += v * v;
  const double amp = std::sqrt(2.0 * sq / mid.size());
  CHECK(amp > 0.5 * 0.99);
  CHECK(amp < 0.5 * 1.01);
}

TEST_CASE("resample: content above the new Nyquist is attenuated by 40 dB") {
  AudioClip c{sine(10000.0, 44100.0, 44100, 0.9), 44100, "alias"};
  const auto out = resample(c, 16000);
  double sq = 0.0;
  for (std::size_t i = 2000; i < 14000; ++i) sq += out.samples[i] * out.samples[i];
  const double amp = std::sqrt(2.0 * sq / 12000.0);
  CHECK(20.0 * std::log10(amp / 0.9) < -40.0);
}

TEST_CASE("resample: pure tones below 7.6 kHz keep their frequency") {
  for (double hz : {200.0, 2500.0, 5000.0, 7000.0, 7500.0}) {
    AudioClip c{sine(hz, 44100.0, 22050, 0.5), 44100, "t"};
    const auto out = resample(c, 16000);
    const std::span<const double> mid(out.samples.data() + 1000, 6000);
    CHECK(std::abs(oracle::dft_peak_hz(mid, 16000.0) - hz) <= 2.0);
  }
}

TEST_CASE("resample: parallel kernel equals serial reference bit for bit") {
  Rng rng(3);
  AudioClip c{std::vector<double>(30000), 44100, "n"};
  for (double& v : c.samples) v = rng.uniform(-0.8, 0.8);
  CHECK(resample(c, 16000).samples == reference::resample(c, 16000).samples);
  CHECK(resample(c, 22050).samples == reference::resample(c, 22050).samples);
}

TEST_CASE("condition: pad, keep, crop") {
  AudioClip short_clip{std::vector<double>(48000, 0.25), 16000, "s"};
  const auto p = condition(short_clip);
  CHECK(p.samples.size() == kConditionedSamples);
  CHECK(p.padded);
  CHECK_FALSE(p.cropped);
  CHECK(std::all_of(p.samples.begin() + 48000, p.samples.end(), [](double v) { return v == 0.0; }));
  CHECK(std::count(p.samples.begin(), p.samples.end(), 0.0) == 72320);

  AudioClip exact{std::vector<double>(120320, 0.1), 16000, "e"};
  const auto e = condition(exact);
  CHECK(e.samples == exact.samples);
  CHECK_FALSE(e.padded);
  CHECK_FALSE(e.cropped);

  AudioClip long_clip{std::vector<double>(160000), 16000, "l"};
  for (std::size_t i = 0; i < long_clip.samples.size(); ++i) long_clip.samples[i] = static_cast<double>(i) / 160000.0;
  const auto c = condition(long_clip);
  CHECK(c.cropped);
  CHECK(c.samples.back() == long_clip.samples[120319]);
  CHECK(c.original_duration_s == 10.0);
}

TEST_CASE("condition: idempotent and rate-checked") {
  AudioClip clip{std::vector<double>(50000, 0.3), 16000, "i"};
  const auto once = condition(clip);
  const auto twice = condition(AudioClip{once.samples, 16000, "i"});
  CHECK(twice.samples == once.samples);
  AudioClip wrong{std::vector<double>(100, 0.0), 44100, "w"};
  CHECK(error_code_of([&] { condition(wrong); }) == Errc::wrong_rate);
}
