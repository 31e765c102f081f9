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

#ifndef SERKIT_ERROR_HPP_
#define SERKIT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace serkit {

enum class Errc {
  // audio
  malformed_container,
  unsupported_encoding,
  empty_audio,
  wrong_rate,
  // dsp / lld
  unsupported_frame_length,
  not_power_of_two,
  frame_too_long,
  bad_band,
  // functionals / csv
  too_few_frames,
  invalid_functional_set,
  dimension_mismatch,
  non_numeric_cell,
  malformed_csv,
  // nn
  shape_mismatch,
  batch_too_small,
  label_out_of_range,
  non_finite,
  bad_checkpoint,
  // models
  incompatible_shape,
  degenerate_labels,
  // harness
  unknown_label,
  missing_file,
  empty_manifest,
  duplicate_path,
  class_too_small,
  length_mismatch,
  empty_input,
  feature_missing,
  config_invalid,
  io_error,
};

std::string_view errc_name(Errc code);

// All library failures surface as this exception; code() identifies the
// contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace serkit

#endif  // SERKIT_ERROR_HPP_
