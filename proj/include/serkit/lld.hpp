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

// Frame-level low-level descriptors (LLDs).
//
// Column layout of the hand-crafted set (52 columns, frozen):
//   0..12   mfcc_0 .. mfcc_12        DCT-II of log mel energies, c0 first
//   13..25  mfcc_0_d .. mfcc_12_d    regression deltas over frames
//   26..38  mfcc_0_dd .. mfcc_12_dd  deltas of the deltas
//   39      spectral_centroid        Hz
//   40      spectral_bandwidth       Hz
//   41      spectral_rolloff         Hz, 85 % of magnitude mass
//   42      spectral_flatness
//   43      rms                      unwindowed frame
//   44      zcr                      unwindowed frame
//   45..51  contrast_0 .. contrast_6

#ifndef SERKIT_LLD_HPP_
#define SERKIT_LLD_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "serkit/dsp.hpp"
#include "serkit/matrix.hpp"

namespace serkit {

inline constexpr std::size_t kNumMfcc = 13;
inline constexpr std::size_t kNumMelFilters = 26;
inline constexpr std::size_t kNumContrastBands = 7;
inline constexpr std::size_t kNumLlds = 52;
inline constexpr double kLogFloor = 1e-10;
inline constexpr double kRolloffFraction = 0.85;
inline constexpr double kContrastQuantile = 0.2;
inline constexpr std::size_t kDeltaWidth = 2;

namespace lld_column {
inline constexpr std::size_t mfcc = 0;
inline constexpr std::size_t mfcc_delta = 13;
inline constexpr std::size_t mfcc_delta2 = 26;
inline constexpr std::size_t centroid = 39;
inline constexpr std::size_t bandwidth = 40;
inline constexpr std::size_t rolloff = 41;
inline constexpr std::size_t flatness = 42;
inline constexpr std::size_t rms = 43;
inline constexpr std::size_t zcr = 44;
inline constexpr std::size_t contrast = 45;
}  // namespace lld_column

const std::vector<std::string>& hand_crafted_lld_names();

struct LldMatrix {
  Matrix values;  // frames x features
  std::vector<std::string> feature_names;
  int frame_ms = 0;
  std::string clip_id;

  std::size_t num_frames() const { return values.rows(); }
  std::size_t num_features() const { return values.cols(); }
};

// Expected frame count for a conditioned clip: 469 at 32 ms, 149 at 100 ms.
std::size_t conditioned_frame_count(int frame_ms);

struct SpectralShape {
  double centroid = 0.0;
  double bandwidth = 0.0;
  double rolloff = 0.0;
  double flatness = 0.0;
};

// Magnitude-weighted statistics; all zero when the spectrum carries no mass.
SpectralShape spectral_descriptors(const Spectrum& spectrum);

// Per-band log(peak / valley) over bands split at
// {0, 200, 400, 800, 1600, 3200, 6400, 8000} Hz. Peak and valley are the means
// of the top and bottom max(1, round(0.2 n)) magnitudes of the n-bin band.
std::array<double, kNumContrastBands> spectral_contrast(const Spectrum& spectrum);

struct ZcrRms {
  double zcr = 0.0;
  double rms = 0.0;
};

// A crossing is a change of (x >= 0) between consecutive samples.
ZcrRms zcr_rms(std::span<const double> frame);

// d_t = sum_{n=1..W} n (x_{t+n} - x_{t-n}) / (2 sum n^2), edge frames replicated.
Matrix delta(const Matrix& track, std::size_t width = kDeltaWidth);

// Log-mel cepstrum: orthonormal DCT-II of log(max(E, 1e-10)) over 26 mel
// filters spanning 0..min(8000, Nyquist) Hz.
class MfccComputer {
 public:
  MfccComputer(std::size_t fft_size, double sample_rate);

  const MelFilterbank& filterbank() const { return filterbank_; }
  std::array<double, kNumMfcc> compute(const Spectrum& spectrum) const;
  std::array<double, kNumMfcc> from_energies(std::span<const double> energies) const;

 private:
  MelFilterbank filterbank_;
  Matrix dct_;  // kNumMfcc x kNumMelFilters
};

std::array<double, kNumMfcc> mfcc(const Spectrum& spectrum);

// Precomputes window, FFT plan and filterbank for one frame resolution.
// Immutable after construction; safe to share between threads.
class LldExtractor {
 public:
  explicit LldExtractor(int frame_ms, WindowKind window = WindowKind::hamming);

  int frame_ms() const { return frame_ms_; }
  std::size_t frame_len() const { return frame_len_; }
  std::size_t hop() const { return frame_len_ / 2; }
  std::size_t fft_size() const { return plan_.size(); }

  // Writes the 52 columns for one unwindowed frame; delta columns are zeroed
  // and filled later across frames.
  void frame_features(std::span<const double> frame, std::span<double> row) const;

  // OpenMP-parallel over frames.
  LldMatrix extract(const ConditionedClip& clip, std::string clip_id = {}) const;

 private:
  int frame_ms_;
  std::size_t frame_len_;
  std::vector<double> window_;
  FftPlan plan_;
  MfccComputer mfcc_;
};

// Fills the delta and delta-delta MFCC columns from the base MFCC columns.
void fill_mfcc_deltas(Matrix& values);

LldMatrix extract_llds(const ConditionedClip& clip, int frame_ms, std::string clip_id = {});

// OpenMP-parallel over clips.
std::vector<LldMatrix> extract_llds_batch(std::span<const ConditionedClip> clips, int frame_ms);

namespace reference {
LldMatrix extract_llds(const ConditionedClip& clip, int frame_ms, std::string clip_id = {});
std::vector<LldMatrix> extract_llds_batch(std::span<const ConditionedClip> clips, int frame_ms);
}  // namespace reference

// CSV: header of feature names, one row per frame, 17 significant digits.
void write_lld_csv(const std::filesystem::path& path, const LldMatrix& llds);
LldMatrix read_lld_csv(const std::filesystem::path& path, int frame_ms = 0);

// Binary: "SERKLLD1" magic, version, frame_ms, shape, names, little-endian f64.
void write_lld_binary(const std::filesystem::path& path, const LldMatrix& llds);
LldMatrix read_lld_binary(const std::filesystem::path& path);

// Dispatches on extension: ".csv" or anything else as binary.
LldMatrix read_lld_file(const std::filesystem::path& path);

}  // namespace serkit

#endif  // SERKIT_LLD_HPP_
