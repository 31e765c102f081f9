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

// WAV decoding, resampling and fixed-length conditioning.

#ifndef SERKIT_AUDIO_HPP_
#define SERKIT_AUDIO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace serkit {

inline constexpr int kPipelineRate = 16000;
inline constexpr double kAnalysisSeconds = 7.52;
// round(7.52 * 16000)
inline constexpr std::size_t kConditionedSamples = 120320;

struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 0;
  std::string source_path;

  double duration_s() const {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }
};

struct ConditionedClip {
  std::vector<double> samples;  // always kConditionedSamples long
  int sample_rate = kPipelineRate;
  double original_duration_s = 0.0;
  bool padded = false;
  bool cropped = false;
};

// Decodes a RIFF/WAVE PCM16 file (mono or stereo). Stereo is averaged to mono;
// amplitudes are int16 / 32768.
AudioClip decode_wav(const std::filesystem::path& path);
AudioClip decode_wav_bytes(std::span<const std::uint8_t> bytes,
                           std::string source_path = {});

// Quantizes to PCM16 (x * 32768, rounded, clamped) and writes a canonical
// 44-byte-header WAV. `interleaved` holds channels * frames samples.
std::vector<std::uint8_t> encode_wav_bytes(std::span<const double> interleaved,
                                           int sample_rate, int channels = 1);
void write_wav(const std::filesystem::path& path, std::span<const double> interleaved,
               int sample_rate, int channels = 1);

std::int16_t to_pcm16(double amplitude);

// Kaiser-windowed sinc interpolation, cutoff at 0.95 of the lower Nyquist
// frequency. Output length is round(n * target / source). The kernel is
// OpenMP-parallel over output samples; reference::resample is the serial
// implementation it is tested against.
AudioClip resample(const AudioClip& clip, int target_rate);

// Zero-pads at the tail or keeps the first kConditionedSamples samples.
ConditionedClip condition(const AudioClip& clip);

// decode_wav -> resample(16 kHz) -> condition.
ConditionedClip load_conditioned(const std::filesystem::path& path);

namespace reference {
AudioClip resample(const AudioClip& clip, int target_rate);
}  // namespace reference

}  // namespace serkit

#endif  // SERKIT_AUDIO_HPP_
