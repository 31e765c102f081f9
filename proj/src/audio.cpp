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

#include "serkit/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <numeric>

#include "resample_kernel.hpp"
#include "serkit/error.hpp"

namespace serkit {

namespace {

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

AudioClip decode_wav_bytes(std::span<const std::uint8_t> bytes, std::string source_path) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    throw Error(Errc::malformed_container, "missing RIFF/WAVE magic in '" + source_path + "'");
  }
  const std::size_t riff_end = std::min<std::size_t>(bytes.size(), 8 + std::size_t{read_u32(bytes, 4)});

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint16_t bits = 0;
  std::uint32_t rate = 0;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= riff_end) {
    const std::uint32_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      throw Error(Errc::malformed_container, "chunk overruns file in '" + source_path + "'");
    }
    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16) throw Error(Errc::malformed_container, "fmt chunk too short");
      std::uint16_t format = read_u16(bytes, body);
      channels = read_u16(bytes, body + 2);
      rate = read_u32(bytes, body + 4);
      bits = read_u16(bytes, body + 14);
      if (format == kFormatExtensible && size >= 40) {
        // First two bytes of the SubFormat GUID carry the format tag.
        format = read_u16(bytes, body + 24);
      }
      if (format != kFormatPcm) {
        throw Error(Errc::unsupported_encoding, "format tag " + std::to_string(format) + " is not PCM");
      }
      have_fmt = true;
    } else if (tag_is(bytes, pos, "data")) {
      data = bytes.subspan(body, size);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt || !have_data) {
    throw Error(Errc::malformed_container, "missing fmt or data chunk in '" + source_path + "'");
  }
  if (bits != 16) {
    throw Error(Errc::unsupported_encoding, std::to_string(bits) + "-bit samples are not supported");
  }
  if (channels != 1 && channels != 2) {
    throw Error(Errc::unsupported_encoding, std::to_string(channels) + " channels are not supported");
  }
  if (rate == 0) throw Error(Errc::malformed_container, "zero sample rate");

  const std::size_t frame_bytes = 2u * channels;
  const std::size_t frames = data.size() / frame_bytes;
  if (frames == 0) throw Error(Errc::empty_audio, "no samples in '" + source_path + "'");

  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  clip.source_path = std::move(source_path);
  clip.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const auto raw = static_cast<std::int16_t>(read_u16(data, i * frame_bytes + 2 * c));
      acc += static_cast<double>(raw) / 32768.0;
    }
    clip.samples[i] = acc / channels;
  }
  return clip;
}

AudioClip decode_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_wav_bytes(bytes, path.string());
}

std::int16_t to_pcm16(double amplitude) {
  const double scaled = std::nearbyint(amplitude * 32768.0);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

std::vector<std::uint8_t> encode_wav_bytes(std::span<const double> interleaved, int sample_rate,
                                           int channels) {
  const auto data_bytes = static_cast<std::uint32_t>(interleaved.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, static_cast<std::uint16_t>(channels));
  put_u32(out, static_cast<std::uint32_t>(sample_rate));
  put_u32(out, static_cast<std::uint32_t>(sample_rate * channels * 2));
  put_u16(out, static_cast<std::uint16_t>(channels * 2));
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double x : interleaved) put_u16(out, static_cast<std::uint16_t>(to_pcm16(x)));
  return out;
}

void write_wav(const std::filesystem::path& path, std::span<const double> interleaved, int sample_rate,
               int channels) {
  const auto bytes = encode_wav_bytes(interleaved, sample_rate, channels);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

namespace detail {

namespace {
constexpr double kStopbandDb = 60.0;
constexpr double kCutoffFraction = 0.95;
constexpr std::size_t kMaxTableEntries = std::size_t{1} << 22;
}  // namespace

ResampleKernel::ResampleKernel(int source_rate, int target_rate) {
  const auto g = std::gcd(source_rate, target_rate);
  up_ = static_cast<std::uint64_t>(target_rate / g);
  down_ = static_cast<std::uint64_t>(source_rate / g);

  // Frequencies below are in cycles per input sample.
  const double lower_nyquist = 0.5 * std::min(1.0, static_cast<double>(target_rate) / source_rate);
  cutoff_ = kCutoffFraction * lower_nyquist;
  const double transition = (1.0 - kCutoffFraction) * lower_nyquist;
  // Kaiser design rules for the window length and shape.
  const double length = (kStopbandDb - 7.95) / (14.36 * transition);
  half_width_ = 0.5 * length;
  beta_ = 0.1102 * (kStopbandDb - 8.7);
  i0_beta_ = std::cyl_bessel_i(0.0, beta_);
  taps_per_side_ = static_cast<std::ptrdiff_t>(std::ceil(half_width_));

  const std::size_t row = static_cast<std::size_t>(2 * taps_per_side_);
  use_table_ = up_ * row <= kMaxTableEntries;
  if (use_table_) {
    table_.resize(up_ * row);
    for (std::uint64_t phase = 0; phase < up_; ++phase) {
      const double frac = static_cast<double>(phase) / static_cast<double>(up_);
      for (std::size_t j = 0; j < row; ++j) {
        table_[phase * row + j] = tap_weight(frac + static_cast<double>(taps_per_side_ - 1) -
                                             static_cast<double>(j));
      }
    }
  }
}

double ResampleKernel::tap_weight(double offset) const {
  if (std::abs(offset) >= half_width_) return 0.0;
  const double x = 2.0 * cutoff_ * offset;
  const double sinc = x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
  const double r = offset / half_width_;
  const double window = std::cyl_bessel_i(0.0, beta_ * std::sqrt(1.0 - r * r)) / i0_beta_;
  return 2.0 * cutoff_ * sinc * window;
}

std::size_t ResampleKernel::output_length(std::size_t input_length) const {
  return static_cast<std::size_t>((input_length * up_ + down_ / 2) / down_);
}

double ResampleKernel::output_sample(std::span<const double> input, std::size_t n) const {
  const std::uint64_t num = static_cast<std::uint64_t>(n) * down_;
  const auto base = static_cast<std::ptrdiff_t>(num / up_);
  const std::uint64_t phase = num % up_;
  const std::ptrdiff_t first = base - taps_per_side_ + 1;
  const std::ptrdiff_t count = 2 * taps_per_side_;
  const auto size = static_cast<std::ptrdiff_t>(input.size());

  const std::ptrdiff_t j0 = std::max<std::ptrdiff_t>(0, -first);
  const std::ptrdiff_t j1 = std::min<std::ptrdiff_t>(count, size - first);
  double acc = 0.0;
  if (use_table_) {
    const double* w = table_.data() + phase * static_cast<std::uint64_t>(count);
    for (std::ptrdiff_t j = j0; j < j1; ++j) acc += input[static_cast<std::size_t>(first + j)] * w[j];
  } else {
    const double frac = static_cast<double>(phase) / static_cast<double>(up_);
    for (std::ptrdiff_t j = j0; j < j1; ++j) {
      acc += input[static_cast<std::size_t>(first + j)] *
             tap_weight(frac + static_cast<double>(taps_per_side_ - 1 - j));
    }
  }
  return std::clamp(acc, -1.0, 1.0);
}

}  // namespace detail

AudioClip resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0 || clip.sample_rate <= 0) {
    throw Error(Errc::wrong_rate, "sample rates must be positive");
  }
  if (clip.sample_rate == target_rate) return clip;

  const detail::ResampleKernel kernel(clip.sample_rate, target_rate);
  AudioClip out;
  out.sample_rate = target_rate;
  out.source_path = clip.source_path;
  out.samples.resize(kernel.output_length(clip.samples.size()));
  const std::span<const double> input(clip.samples);
  const auto n_out = static_cast<std::ptrdiff_t>(out.samples.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t n = 0; n < n_out; ++n) {
    out.samples[static_cast<std::size_t>(n)] = kernel.output_sample(input, static_cast<std::size_t>(n));
  }
  return out;
}

ConditionedClip condition(const AudioClip& clip) {
  if (clip.sample_rate != kPipelineRate) {
    throw Error(Errc::wrong_rate, "conditioning expects 16000 Hz, got " + std::to_string(clip.sample_rate));
  }
  ConditionedClip out;
  out.sample_rate = kPipelineRate;
  out.original_duration_s = clip.duration_s();
  const std::size_t n = clip.samples.size();
  out.padded = n < kConditionedSamples;
  out.cropped = n > kConditionedSamples;
  out.samples.assign(kConditionedSamples, 0.0);
  std::copy_n(clip.samples.begin(), std::min(n, kConditionedSamples), out.samples.begin());
  return out;
}

ConditionedClip load_conditioned(const std::filesystem::path& path) {
  return condition(resample(decode_wav(path), kPipelineRate));
}

}  // namespace serkit
