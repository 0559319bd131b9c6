// src/nn/checkpoint.cpp

// Copyright 2026  The listen authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "listen/nn/checkpoint.hpp"

#include <set>

#include "listen/binary_io.hpp"
#include "listen/errors.hpp"

namespace listen::nn {

std::vector<std::uint8_t> encode_checkpoint(std::span<const NamedArray> entries) {
  ByteWriter w;
  w.tag("CKPT");
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(entries.size()));
  for (const NamedArray& e : entries) {
    if (e.values.size() != numel(e.shape)) throw ShapeError("checkpoint entry " + e.name + " shape mismatch");
    w.str(e.name);
    w.u32(static_cast<std::uint32_t>(e.shape.size()));
    for (std::size_t d : e.shape) w.u32(static_cast<std::uint32_t>(d));
    for (float v : e.values) w.f32(v);
  }
  return w.take();
}

std::vector<NamedArray> decode_checkpoint(std::span<const std::uint8_t> bytes) {
  ByteReader<TruncatedError> r(bytes);
  if (!r.tag_is("CKPT")) throw MagicMismatchError("not a checkpoint (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) throw DataError("unsupported checkpoint version " + std::to_string(version));
  const std::uint32_t count = r.u32();
  std::vector<NamedArray> out;
  std::set<std::string> names;
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedArray e;
    e.name = r.str();
    if (!names.insert(e.name).second) throw DataError("duplicate checkpoint entry " + e.name);
    const std::uint32_t rank = r.u32();
    for (std::uint32_t d = 0; d < rank; ++d) e.shape.push_back(r.u32());
    const std::uint64_t n = numel(e.shape);
    r.need(n * 4);
    e.values.resize(n);
    for (float& v : e.values) v = r.f32();
    out.push_back(std::move(e));
  }
  return out;
}

void write_checkpoint(const std::filesystem::path& path, std::span<const NamedArray> entries) {
  write_file_bytes(path, encode_checkpoint(entries));
}

std::vector<NamedArray> read_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_file_bytes(path));
}

}  // namespace listen::nn
