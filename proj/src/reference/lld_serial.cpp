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

namespace serkit::reference {

LldMatrix extract_llds(const ConditionedClip& clip, int frame_ms, std::string clip_id) {
  const LldExtractor extractor(frame_ms);
  const FrameMatrix frames =
      frame_signal(clip.samples, clip.sample_rate, extractor.frame_len(), extractor.hop());
  LldMatrix out;
  out.values = Matrix(frames.num_frames(), kNumLlds);
  out.feature_names = hand_crafted_lld_names();
  out.frame_ms = frame_ms;
  out.clip_id = std::move(clip_id);
  for (std::size_t i = 0; i < frames.num_frames(); ++i) {
    extractor.frame_features(frames.frames.row(i), out.values.row(i));
  }
  fill_mfcc_deltas(out.values);
  return out;
}

std::vector<LldMatrix> extract_llds_batch(std::span<const ConditionedClip> clips, int frame_ms) {
  std::vector<LldMatrix> out;
  out.reserve(clips.size());
  for (std::size_t c = 0; c < clips.size(); ++c) {
    out.push_back(reference::extract_llds(clips[c], frame_ms, std::to_string(c)));
  }
  return out;
}

}  // namespace serkit::reference
