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

// Framing, windowing, FFT and mel filterbank.

#ifndef SERKIT_DSP_HPP_
#define SERKIT_DSP_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "serkit/audio.hpp"
#include "serkit/matrix.hpp"

namespace serkit {

enum class WindowKind { hamming, hann, rectangular };

struct FrameMatrix {
  Matrix frames;  // num_frames x frame_len
  std::size_t frame_len = 0;
  std::size_t hop = 0;
  int sample_rate = 0;

  std::size_t num_frames() const { return frames.rows(); }
};

struct Spectrum {
  std::vector<double> magnitudes;  // fft_size / 2 + 1 bins
  std::size_t fft_size = 0;
  double bin_hz = 0.0;

  double sample_rate() const { return bin_hz * static_cast<double>(fft_size); }
  double bin_frequency(std::size_t k) const { return bin_hz * static_cast<double>(k); }
};

// frame_ms in {32, 100}; frame_len = frame_ms * 16, hop = frame_len / 2.
std::size_t frame_length_samples(int frame_ms);
// Smallest power of two >= frame_len.
std::size_t fft_size_for(std::size_t frame_len);

// Frame i starts at i * hop; a trailing partial frame is dropped.
FrameMatrix frame_signal(std::span<const double> samples, int sample_rate, std::size_t frame_len,
                         std::size_t hop);
FrameMatrix frame_signal(const ConditionedClip& clip, int frame_ms);

// hamming: 0.54 - 0.46 cos(2 pi n / (N - 1)), hann: 0.5 - 0.5 cos(...).
std::vector<double> make_window(WindowKind kind, std::size_t length);
FrameMatrix apply_window(FrameMatrix frames, WindowKind kind);

bool is_power_of_two(std::size_t n);

// Iterative radix-2 complex FFT with precomputed twiddles. Immutable after
// construction, so one plan can be shared across threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t size);

  std::size_t size() const { return size_; }
  void forward(std::vector<std::complex<double>>& data) const;

 private:
  std::size_t size_;
  std::vector<std::complex<double>> twiddles_;
  std::vector<std::size_t> bit_reverse_;
};

// Zero-pads the frame to fft_size and returns |X_k| for k = 0..fft_size/2.
Spectrum fft_magnitude(std::span<const double> frame, std::size_t fft_size,
                       double sample_rate = kPipelineRate);
Spectrum fft_magnitude(const FftPlan& plan, std::span<const double> frame,
                       double sample_rate = kPipelineRate);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular filters (peak weight 1) equally spaced on the HTK mel scale,
// applied to the power spectrum.
class MelFilterbank {
 public:
  MelFilterbank(std::size_t num_filters, std::size_t fft_size, double sample_rate, double fmin,
                double fmax);

  std::size_t num_filters() const { return centers_hz_.size(); }
  double center_hz(std::size_t i) const { return centers_hz_[i]; }
  // num_filters + 2 edge frequencies; filter i spans [edges[i], edges[i + 2]].
  const std::vector<double>& edges_hz() const { return edges_hz_; }

  std::vector<double> apply(const Spectrum& spectrum) const;
  void apply(const Spectrum& spectrum, std::span<double> energies) const;

 private:
  struct Filter {
    std::size_t first_bin = 0;
    std::vector<double> weights;
  };
  std::size_t fft_size_;
  std::vector<double> edges_hz_;
  std::vector<double> centers_hz_;
  std::vector<Filter> filters_;
};

std::vector<double> mel_filterbank(const Spectrum& spectrum, std::size_t num_filters, double fmin,
                                   double fmax);

}  // namespace serkit

#endif  // SERKIT_DSP_HPP_
