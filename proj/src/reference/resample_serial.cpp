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

#include "../resample_kernel.hpp"
#include "serkit/audio.hpp"
#include "serkit/error.hpp"

namespace serkit::reference {

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
  for (std::size_t n = 0; n < out.samples.size(); ++n) {
    out.samples[n] = kernel.output_sample(clip.samples, n);
  }
  return out;
}

}  // namespace serkit::reference
