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

#include "serkit/error.hpp"

namespace serkit {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::malformed_container: return "MalformedContainer";
    case Errc::unsupported_encoding: return "UnsupportedEncoding";
    case Errc::empty_audio: return "EmptyAudio";
    case Errc::wrong_rate: return "WrongRate";
    case Errc::unsupported_frame_length: return "UnsupportedFrameLength";
    case Errc::not_power_of_two: return "NotPowerOfTwo";
    case Errc::frame_too_long: return "FrameTooLong";
    case Errc::bad_band: return "BadBand";
    case Errc::too_few_frames: return "TooFewFrames";
    case Errc::invalid_functional_set: return "InvalidFunctionalSet";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::non_numeric_cell: return "NonNumericCell";
    case Errc::malformed_csv: return "MalformedCsv";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::batch_too_small: return "BatchTooSmall";
    case Errc::label_out_of_range: return "LabelOutOfRange";
    case Errc::non_finite: return "NonFinite";
    case Errc::bad_checkpoint: return "BadCheckpoint";
    case Errc::incompatible_shape: return "IncompatibleShape";
    case Errc::degenerate_labels: return "DegenerateLabels";
    case Errc::unknown_label: return "UnknownLabel";
    case Errc::missing_file: return "MissingFile";
    case Errc::empty_manifest: return "EmptyManifest";
    case Errc::duplicate_path: return "DuplicatePath";
    case Errc::class_too_small: return "ClassTooSmall";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::empty_input: return "EmptyInput";
    case Errc::feature_missing: return "FeatureMissing";
    case Errc::config_invalid: return "ConfigInvalid";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

}  // namespace serkit
