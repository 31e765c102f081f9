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

#include "serkit/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "serkit/error.hpp"

namespace serkit {

std::size_t frame_length_samples(int frame_ms) {
  if (frame_ms != 32 && frame_ms != 100) {
    throw Error(Errc::unsupported_frame_length,
                std::to_string(frame_ms) + " ms (supported: 32, 100)");
  }
  return static_cast<std::size_t>(frame_ms) * (kPipelineRate / 1000);
}

std::size_t fft_size_for(std::size_t frame_len) {
  std::size_t n = 1;
  while (n < frame_len) n <<= 1;
  return n;
}

FrameMatrix frame_signal(std::span<const double> samples, int sample_rate, std::size_t frame_len,
                         std::size_t hop) {
  FrameMatrix out;
  out.frame_len = frame_len;
  out.hop = hop;
  out.sample_rate = sample_rate;
  const std::size_t count =
      samples.size() < frame_len ? 0 : (samples.size() - frame_len) / hop + 1;
  out.frames = Matrix(count, frame_len);
  for (std::size_t i = 0; i < count; ++i) {
    std::copy_n(samples.begin() + static_cast<std::ptrdiff_t>(i * hop), frame_len,
                out.frames.row(i).begin());
  }
  return out;
}

FrameMatrix frame_signal(const ConditionedClip& clip, int frame_ms) {
  const std::size_t len = frame_length_samples(frame_ms);
  return frame_signal(clip.samples, clip.sample_rate, len, len / 2);
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (kind == WindowKind::rectangular || length < 2) return w;
  const double denom = static_cast<double>(length - 1);
  // Written as floor + height * (1 - cos) so w[0] is exactly 0.08 (hamming)
  // or 0 (hann); the second half mirrors the first.
  const double floor = kind == WindowKind::hamming ? 0.08 : 0.0;
  const double height = kind == WindowKind::hamming ? 0.46 : 0.5;
  for (std::size_t n = 0; n <= (length - 1) / 2; ++n) {
    const double c = std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / denom);
    w[n] = floor + height * (1.0 - c);
    w[length - 1 - n] = w[n];
  }
  return w;
}

FrameMatrix apply_window(FrameMatrix frames, WindowKind kind) {
  if (kind == WindowKind::rectangular) return frames;
  const auto w = make_window(kind, frames.frame_len);
  for (std::size_t i = 0; i < frames.num_frames(); ++i) {
    auto row = frames.frames.row(i);
    for (std::size_t n = 0; n < row.size(); ++n) row[n] *= w[n];
  }
  return frames;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

FftPlan::FftPlan(std::size_t size) : size_(size) {
  if (!is_power_of_two(size)) {
    throw Error(Errc::not_power_of_two, "FFT size " + std::to_string(size));
  }
  twiddles_.resize(size / 2);
  for (std::size_t k = 0; k < size / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(size);
    twiddles_[k] = {std::cos(angle), std::sin(angle)};
  }
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < size) ++bits;
  bit_reverse_.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    bit_reverse_[i] = r;
  }
}

void FftPlan::forward(std::vector<std::complex<double>>& data) const {
  for (std::size_t i = 0; i < size_; ++i) {
    if (i < bit_reverse_[i]) std::swap(data[i], data[bit_reverse_[i]]);
  }
  for (std::size_t len = 2; len <= size_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = size_ / len;
    for (std::size_t start = 0; start < size_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> t = twiddles_[k * stride] * data[start + k + half];
        data[start + k + half] = data[start + k] - t;
        data[start + k] += t;
      }
    }
  }
}

Spectrum fft_magnitude(const FftPlan& plan, std::span<const double> frame, double sample_rate) {
  const std::size_t n = plan.size();
  if (frame.size() > n) {
    throw Error(Errc::frame_too_long,
                "frame of " + std::to_string(frame.size()) + " samples exceeds FFT size " + std::to_string(n));
  }
  std::vector<std::complex<double>> buf(n);
  for (std::size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
  plan.forward(buf);

  Spectrum s;
  s.fft_size = n;
  s.bin_hz = sample_rate / static_cast<double>(n);
  s.magnitudes.resize(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) s.magnitudes[k] = std::abs(buf[k]);
  return s;
}

Spectrum fft_magnitude(std::span<const double> frame, std::size_t fft_size, double sample_rate) {
  return fft_magnitude(FftPlan(fft_size), frame, sample_rate);
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank::MelFilterbank(std::size_t num_filters, std::size_t fft_size, double sample_rate,
                             double fmin, double fmax)
    : fft_size_(fft_size) {
  if (!(fmin >= 0.0) || !(fmin < fmax) || fmax > sample_rate / 2.0) {
    throw Error(Errc::bad_band, "need 0 <= fmin < fmax <= sample_rate / 2, got [" +
                                    std::to_string(fmin) + ", " + std::to_string(fmax) + "]");
  }
  if (num_filters == 0) throw Error(Errc::bad_band, "zero filters");

  const double mel_lo = hz_to_mel(fmin);
  const double mel_hi = hz_to_mel(fmax);
  edges_hz_.resize(num_filters + 2);
  for (std::size_t i = 0; i < edges_hz_.size(); ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / static_cast<double>(num_filters + 1);
    edges_hz_[i] = mel_to_hz(mel);
  }
  edges_hz_.front() = fmin;
  edges_hz_.back() = fmax;

  const double bin_hz = sample_rate / static_cast<double>(fft_size);
  const std::size_t num_bins = fft_size / 2 + 1;
  centers_hz_.resize(num_filters);
  filters_.resize(num_filters);
  for (std::size_t i = 0; i < num_filters; ++i) {
    const double lo = edges_hz_[i];
    const double mid = edges_hz_[i + 1];
    const double hi = edges_hz_[i + 2];
    centers_hz_[i] = mid;
    Filter& f = filters_[i];
    bool started = false;
    for (std::size_t k = 0; k < num_bins; ++k) {
      const double hz = bin_hz * static_cast<double>(k);
      double w = 0.0;
      if (hz > lo && hz <= mid) {
        w = (hz - lo) / (mid - lo);
      } else if (hz > mid && hz < hi) {
        w = (hi - hz) / (hi - mid);
      }
      if (w > 0.0) {
        if (!started) {
          f.first_bin = k;
          started = true;
        }
        f.weights.resize(k - f.first_bin + 1, 0.0);
        f.weights[k - f.first_bin] = w;
      }
    }
  }
}

void MelFilterbank::apply(const Spectrum& spectrum, std::span<double> energies) const {
  if (spectrum.fft_size != fft_size_ || energies.size() != filters_.size()) {
    throw Error(Errc::shape_mismatch, "spectrum does not match filterbank");
  }
  for (std::size_t i = 0; i < filters_.size(); ++i) {
    const Filter& f = filters_[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < f.weights.size(); ++j) {
      const double m = spectrum.magnitudes[f.first_bin + j];
      acc += f.weights[j] * m * m;
    }
    energies[i] = acc;
  }
}

std::vector<double> MelFilterbank::apply(const Spectrum& spectrum) const {
  std::vector<double> out(filters_.size());
  apply(spectrum, out);
  return out;
}

std::vector<double> mel_filterbank(const Spectrum& spectrum, std::size_t num_filters, double fmin,
                                   double fmax) {
  return MelFilterbank(num_filters, spectrum.fft_size, spectrum.sample_rate(), fmin, fmax).apply(spectrum);
}

}  // namespace serkit
