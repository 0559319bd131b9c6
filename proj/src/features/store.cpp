// src/features/store.cpp

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

#include "listen/features/store.hpp"

#include "listen/binary_io.hpp"
#include "listen/errors.hpp"

namespace listen::features {

std::vector<std::uint8_t> encode_features(const LogMelSpectrogram& s) {
  if (s.data.size() != s.channels * s.frames * s.mels)
    throw ShapeError("feature payload does not match its shape");
  ByteWriter w;
  w.tag("LMEL");
  w.u32(kFeatureStoreVersion);
  w.u32(static_cast<std::uint32_t>(s.channels));
  w.u32(static_cast<std::uint32_t>(s.frames));
  w.u32(static_cast<std::uint32_t>(s.mels));
  for (float v : s.data) w.f32(v);
  return w.take();
}

LogMelSpectrogram decode_features(std::span<const std::uint8_t> bytes) {
  ByteReader<TruncatedError> r(bytes);
  if (!r.tag_is("LMEL")) throw MagicMismatchError("not a feature file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kFeatureStoreVersion)
    throw DataError("unsupported feature file version " + std::to_string(version));
  LogMelSpectrogram s;
  s.channels = r.u32();
  s.frames = r.u32();
  s.mels = r.u32();
  const std::uint64_t count = static_cast<std::uint64_t>(s.channels) * s.frames * s.mels;
  r.need(count * 4);
  s.data.resize(count);
  for (float& v : s.data) v = r.f32();
  return s;
}

void write_features(const std::filesystem::path& path, const LogMelSpectrogram& s) {
  write_file_bytes(path, encode_features(s));
}

LogMelSpectrogram read_features(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_features(bytes);
  } catch (const MagicMismatchError& e) {
    throw MagicMismatchError(path.string() + ": " + e.what());
  } catch (const TruncatedError& e) {
    throw TruncatedError(path.string() + ": " + e.what());
  }
}

}  // namespace listen::features
