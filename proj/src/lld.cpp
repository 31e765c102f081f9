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

#include "serkit/lld.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

#include "binary_io.hpp"
#include "csv.hpp"
#include "serkit/error.hpp"

namespace serkit {

namespace {

constexpr std::array<double, kNumContrastBands + 1> kContrastEdgesHz = {
    0.0, 200.0, 400.0, 800.0, 1600.0, 3200.0, 6400.0, 8000.0};

constexpr std::string_view kLldMagic = "SERKLLD1";
constexpr std::uint32_t kLldVersion = 1;

std::vector<std::string> make_names() {
  std::vector<std::string> names;
  names.reserve(kNumLlds);
  for (std::size_t i = 0; i < kNumMfcc; ++i) names.push_back("mfcc_" + std::to_string(i));
  for (std::size_t i = 0; i < kNumMfcc; ++i) names.push_back("mfcc_" + std::to_string(i) + "_d");
  for (std::size_t i = 0; i < kNumMfcc; ++i) names.push_back("mfcc_" + std::to_string(i) + "_dd");
  for (const char* n : {"spectral_centroid", "spectral_bandwidth", "spectral_rolloff",
                        "spectral_flatness", "rms", "zcr"}) {
    names.emplace_back(n);
  }
  for (std::size_t i = 0; i < kNumContrastBands; ++i) names.push_back("contrast_" + std::to_string(i));
  return names;
}

}  // namespace

const std::vector<std::string>& hand_crafted_lld_names() {
  static const std::vector<std::string> names = make_names();
  return names;
}

std::size_t conditioned_frame_count(int frame_ms) {
  const std::size_t len = frame_length_samples(frame_ms);
  return (kConditionedSamples - len) / (len / 2) + 1;
}

SpectralShape spectral_descriptors(const Spectrum& spectrum) {
  const auto& m = spectrum.magnitudes;
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    total += m[k];
    weighted += spectrum.bin_frequency(k) * m[k];
  }
  SpectralShape out;
  if (total <= 0.0) return out;

  out.centroid = weighted / total;
  double spread = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double d = spectrum.bin_frequency(k) - out.centroid;
    spread += m[k] * d * d;
  }
  out.bandwidth = std::sqrt(spread / total);

  const double threshold = kRolloffFraction * total;
  double cumulative = 0.0;
  out.rolloff = spectrum.bin_frequency(m.size() - 1);
  for (std::size_t k = 0; k < m.size(); ++k) {
    cumulative += m[k];
    if (cumulative >= threshold) {
      out.rolloff = spectrum.bin_frequency(k);
      break;
    }
  }

  double log_sum = 0.0;
  for (double v : m) log_sum += std::log(std::max(v, kLogFloor));
  const double n = static_cast<double>(m.size());
  out.flatness = std::exp(log_sum / n) / std::max(total / n, kLogFloor);
  return out;
}

std::array<double, kNumContrastBands> spectral_contrast(const Spectrum& spectrum) {
  std::array<double, kNumContrastBands> out{};
  std::vector<double> band;
  for (std::size_t b = 0; b < kNumContrastBands; ++b) {
    const double lo = kContrastEdgesHz[b];
    const double hi = kContrastEdgesHz[b + 1];
    const bool last = b + 1 == kNumContrastBands;
    band.clear();
    for (std::size_t k = 0; k < spectrum.magnitudes.size(); ++k) {
      const double f = spectrum.bin_frequency(k);
      if (f >= lo && (f < hi || last)) band.push_back(spectrum.magnitudes[k]);
    }
    if (band.empty()) continue;
    std::sort(band.begin(), band.end());
    const auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(kContrastQuantile * static_cast<double>(band.size()))));
    const double valley =
        std::accumulate(band.begin(), band.begin() + static_cast<std::ptrdiff_t>(count), 0.0) /
        static_cast<double>(count);
    const double peak = std::accumulate(band.end() - static_cast<std::ptrdiff_t>(count), band.end(), 0.0) /
                        static_cast<double>(count);
    out[b] = std::log(std::max(peak, kLogFloor) / std::max(valley, kLogFloor));
  }
  return out;
}

ZcrRms zcr_rms(std::span<const double> frame) {
  ZcrRms out;
  if (frame.empty()) return out;
  double energy = 0.0;
  std::size_t crossings = 0;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    energy += frame[i] * frame[i];
    if (i > 0 && (frame[i] >= 0.0) != (frame[i - 1] >= 0.0)) ++crossings;
  }
  out.rms = std::sqrt(energy / static_cast<double>(frame.size()));
  if (frame.size() > 1) {
    out.zcr = static_cast<double>(crossings) / static_cast<double>(frame.size() - 1);
  }
  return out;
}

Matrix delta(const Matrix& track, std::size_t width) {
  if (width == 0) throw Error(Errc::config_invalid, "delta width must be >= 1");
  const std::size_t frames = track.rows();
  Matrix out(frames, track.cols());
  if (frames == 0) return out;
  double norm = 0.0;
  for (std::size_t n = 1; n <= width; ++n) norm += static_cast<double>(n * n);
  norm *= 2.0;
  const auto last = static_cast<std::ptrdiff_t>(frames) - 1;
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t c = 0; c < track.cols(); ++c) {
      double acc = 0.0;
      for (std::size_t n = 1; n <= width; ++n) {
        const auto ti = static_cast<std::ptrdiff_t>(t);
        const auto ahead = static_cast<std::size_t>(std::min(ti + static_cast<std::ptrdiff_t>(n), last));
        const auto behind = static_cast<std::size_t>(std::max<std::ptrdiff_t>(ti - static_cast<std::ptrdiff_t>(n), 0));
        acc += static_cast<double>(n) * (track(ahead, c) - track(behind, c));
      }
      out(t, c) = acc / norm;
    }
  }
  return out;
}

MfccComputer::MfccComputer(std::size_t fft_size, double sample_rate)
    : filterbank_(kNumMelFilters, fft_size, sample_rate, 0.0, std::min(8000.0, sample_rate / 2.0)),
      dct_(kNumMfcc, kNumMelFilters) {
  const double n = static_cast<double>(kNumMelFilters);
  for (std::size_t k = 0; k < kNumMfcc; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (std::size_t j = 0; j < kNumMelFilters; ++j) {
      dct_(k, j) = scale * std::cos(std::numbers::pi * static_cast<double>(k) *
                                    (2.0 * static_cast<double>(j) + 1.0) / (2.0 * n));
    }
  }
}

std::array<double, kNumMfcc> MfccComputer::from_energies(std::span<const double> energies) const {
  if (energies.size() != kNumMelFilters) {
    throw Error(Errc::shape_mismatch, "expected 26 filterbank energies");
  }
  std::array<double, kNumMelFilters> logs{};
  for (std::size_t j = 0; j < kNumMelFilters; ++j) logs[j] = std::log(std::max(energies[j], kLogFloor));
  std::array<double, kNumMfcc> out{};
  for (std::size_t k = 0; k < kNumMfcc; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < kNumMelFilters; ++j) acc += dct_(k, j) * logs[j];
    out[k] = acc;
  }
  return out;
}

std::array<double, kNumMfcc> MfccComputer::compute(const Spectrum& spectrum) const {
  std::array<double, kNumMelFilters> energies{};
  filterbank_.apply(spectrum, energies);
  return from_energies(energies);
}

std::array<double, kNumMfcc> mfcc(const Spectrum& spectrum) {
  return MfccComputer(spectrum.fft_size, spectrum.sample_rate()).compute(spectrum);
}

LldExtractor::LldExtractor(int frame_ms, WindowKind window)
    : frame_ms_(frame_ms),
      frame_len_(frame_length_samples(frame_ms)),
      window_(make_window(window, frame_len_)),
      plan_(fft_size_for(frame_len_)),
      mfcc_(fft_size_for(frame_len_), kPipelineRate) {}

void LldExtractor::frame_features(std::span<const double> frame, std::span<double> row) const {
  if (frame.size() != frame_len_ || row.size() != kNumLlds) {
    throw Error(Errc::shape_mismatch, "frame or output row has the wrong length");
  }
  std::fill(row.begin(), row.end(), 0.0);

  const ZcrRms zr = zcr_rms(frame);
  row[lld_column::rms] = zr.rms;
  row[lld_column::zcr] = zr.zcr;

  std::vector<double> windowed(frame_len_);
  for (std::size_t n = 0; n < frame_len_; ++n) windowed[n] = frame[n] * window_[n];
  const Spectrum spectrum = fft_magnitude(plan_, windowed, kPipelineRate);

  const auto cep = mfcc_.compute(spectrum);
  std::copy(cep.begin(), cep.end(), row.begin() + lld_column::mfcc);

  const SpectralShape shape = spectral_descriptors(spectrum);
  row[lld_column::centroid] = shape.centroid;
  row[lld_column::bandwidth] = shape.bandwidth;
  row[lld_column::rolloff] = shape.rolloff;
  row[lld_column::flatness] = shape.flatness;

  const auto contrast = spectral_contrast(spectrum);
  std::copy(contrast.begin(), contrast.end(), row.begin() + lld_column::contrast);
}

void fill_mfcc_deltas(Matrix& values) {
  Matrix base(values.rows(), kNumMfcc);
  for (std::size_t t = 0; t < values.rows(); ++t) {
    for (std::size_t c = 0; c < kNumMfcc; ++c) base(t, c) = values(t, lld_column::mfcc + c);
  }
  const Matrix d1 = delta(base);
  const Matrix d2 = delta(d1);
  for (std::size_t t = 0; t < values.rows(); ++t) {
    for (std::size_t c = 0; c < kNumMfcc; ++c) {
      values(t, lld_column::mfcc_delta + c) = d1(t, c);
      values(t, lld_column::mfcc_delta2 + c) = d2(t, c);
    }
  }
}

LldMatrix LldExtractor::extract(const ConditionedClip& clip, std::string clip_id) const {
  const FrameMatrix frames = frame_signal(clip.samples, clip.sample_rate, frame_len_, hop());
  LldMatrix out;
  out.values = Matrix(frames.num_frames(), kNumLlds);
  out.feature_names = hand_crafted_lld_names();
  out.frame_ms = frame_ms_;
  out.clip_id = std::move(clip_id);
  const auto n = static_cast<std::ptrdiff_t>(frames.num_frames());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    frame_features(frames.frames.row(r), out.values.row(r));
  }
  fill_mfcc_deltas(out.values);
  return out;
}

LldMatrix extract_llds(const ConditionedClip& clip, int frame_ms, std::string clip_id) {
  return LldExtractor(frame_ms).extract(clip, std::move(clip_id));
}

std::vector<LldMatrix> extract_llds_batch(std::span<const ConditionedClip> clips, int frame_ms) {
  const LldExtractor extractor(frame_ms);
  std::vector<LldMatrix> out(clips.size());
  const auto n = static_cast<std::ptrdiff_t>(clips.size());
  // Nested frame-level regions run on one thread each.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(i);
    out[c] = extractor.extract(clips[c], std::to_string(c));
  }
  return out;
}

void write_lld_csv(const std::filesystem::path& path, const LldMatrix& llds) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
  for (std::size_t c = 0; c < llds.feature_names.size(); ++c) {
    out << (c ? "," : "") << llds.feature_names[c];
  }
  out << '\n';
  for (std::size_t t = 0; t < llds.num_frames(); ++t) {
    for (std::size_t c = 0; c < llds.num_features(); ++c) {
      out << (c ? "," : "") << detail::format_double(llds.values(t, c));
    }
    out << '\n';
  }
  if (!out) throw Error(Errc::io_error, "write failed for '" + path.string() + "'");
}

LldMatrix read_lld_csv(const std::filesystem::path& path, int frame_ms) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::malformed_csv, "empty LLD file '" + path.string() + "'");
  LldMatrix out;
  out.feature_names = detail::split_csv_line(line);
  out.frame_ms = frame_ms;
  out.clip_id = path.stem().string();
  if (out.clip_id.ends_with(".lld")) out.clip_id.resize(out.clip_id.size() - 4);
  const std::size_t cols = out.feature_names.size();
  std::vector<double> data;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty() || line == "\r") continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != cols) {
      throw Error(Errc::malformed_csv, "row " + std::to_string(rows + 1) + " of '" + path.string() +
                                           "' has " + std::to_string(cells.size()) + " cells");
    }
    for (const auto& cell : cells) data.push_back(detail::parse_double(cell, path.string()));
    ++rows;
  }
  out.values = Matrix(rows, cols);
  out.values.data() = std::move(data);
  return out;
}

void write_lld_binary(const std::filesystem::path& path, const LldMatrix& llds) {
  detail::ByteWriter w;
  w.raw(kLldMagic);
  w.u32(kLldVersion);
  w.u32(static_cast<std::uint32_t>(llds.frame_ms));
  w.u64(llds.num_frames());
  w.u64(llds.num_features());
  w.str(llds.clip_id);
  for (const auto& name : llds.feature_names) w.str(name);
  for (double v : llds.values.data()) w.f64(v);
  w.save(path);
}

LldMatrix read_lld_binary(const std::filesystem::path& path) {
  const auto bytes = detail::read_file_bytes(path);
  detail::ByteReader r(bytes, Errc::malformed_container);
  if (!r.expect(kLldMagic)) throw Error(Errc::malformed_container, "bad LLD magic in '" + path.string() + "'");
  if (r.u32() != kLldVersion) throw Error(Errc::malformed_container, "unsupported LLD version");
  LldMatrix out;
  out.frame_ms = static_cast<int>(r.u32());
  const std::uint64_t rows = r.u64();
  const std::uint64_t cols = r.u64();
  out.clip_id = r.str();
  for (std::uint64_t c = 0; c < cols; ++c) out.feature_names.push_back(r.str());
  if (r.remaining() != rows * cols * 8) {
    throw Error(Errc::malformed_container, "LLD payload size mismatch in '" + path.string() + "'");
  }
  out.values = Matrix(rows, cols);
  for (double& v : out.values.data()) v = r.f64();
  return out;
}

LldMatrix read_lld_file(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return read_lld_csv(path);
  return read_lld_binary(path);
}

}  // namespace serkit
