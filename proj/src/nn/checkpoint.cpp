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

#include "serkit/nn/checkpoint.hpp"

#include "../binary_io.hpp"
#include "serkit/error.hpp"

namespace serkit::nn {

namespace {

constexpr std::string_view kMagic = "SERKCKPT";
constexpr std::uint32_t kMaxRank = 8;

}  // namespace

const Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return &t;
  }
  return nullptr;
}

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt) {
  detail::ByteWriter w;
  w.raw(kMagic);
  w.u32(kCheckpointVersion);
  w.str(ckpt.metadata);
  w.u32(static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& [name, t] : ckpt.tensors) {
    w.str(name);
    w.u32(static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) w.u64(d);
    for (double v : t.values()) w.f64(v);
  }
  return w.bytes();
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, Errc::bad_checkpoint);
  if (!r.expect(kMagic)) throw Error(Errc::bad_checkpoint, "not a checkpoint (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw Error(Errc::bad_checkpoint, "unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  ckpt.metadata = r.str();
  const std::uint32_t count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.str();
    const std::uint32_t rank = r.u32();
    if (rank > kMaxRank) throw Error(Errc::bad_checkpoint, "tensor '" + name + "' has rank " + std::to_string(rank));
    Shape shape(rank);
    std::size_t size = 1;
    for (auto& d : shape) {
      d = static_cast<std::size_t>(r.u64());
      size *= d;
    }
    if (size > r.remaining() / 8) throw Error(Errc::bad_checkpoint, "tensor '" + name + "' is truncated");
    std::vector<double> data(size);
    for (double& v : data) v = r.f64();
    ckpt.tensors.emplace_back(std::move(name), Tensor(std::move(shape), std::move(data)));
  }
  if (!r.done()) throw Error(Errc::bad_checkpoint, "trailing bytes after tensor table");
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  detail::ByteWriter w;
  const auto bytes = encode_checkpoint(ckpt);
  w.raw(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  w.save(path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const auto bytes = detail::read_file_bytes(path);
  return decode_checkpoint(bytes);
}

}  // namespace serkit::nn
