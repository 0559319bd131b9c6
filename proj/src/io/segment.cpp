// src/io/segment.cpp

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

#include "listen/io/segment.hpp"

#include <cmath>

#include "listen/errors.hpp"

namespace listen::io {

std::vector<SegmentWindow> plan_segments(std::size_t source_len, std::size_t segment_len,
                                         std::size_t hop, PadPolicy pad) {
  if (segment_len == 0 || hop == 0) throw InvalidInputError("segment and hop must be positive");
  std::vector<SegmentWindow> windows;
  if (source_len <= segment_len) {
    if (source_len == segment_len || (pad != PadPolicy::none && source_len > 0))
      windows.push_back({0, segment_len});
    return windows;
  }
  std::size_t start = 0;
  for (; start + segment_len <= source_len; start += hop) windows.push_back({start, segment_len});
  const std::size_t covered = windows.back().start + segment_len;
  if (covered < source_len && pad != PadPolicy::none) windows.push_back({start, segment_len});
  return windows;
}

std::vector<Waveform> segment_clip(const Waveform& w, double segment_seconds, double hop_seconds,
                                   PadPolicy pad) {
  if (!(segment_seconds > 0.0) || !(hop_seconds > 0.0))
    throw InvalidInputError("segment_clip: segment and hop must be positive");
  const auto seg = static_cast<std::size_t>(std::llround(segment_seconds * w.sample_rate));
  const auto hop = static_cast<std::size_t>(std::llround(hop_seconds * w.sample_rate));
  const std::size_t n = w.length();

  std::vector<Waveform> out;
  for (const SegmentWindow& win : plan_segments(n, seg, hop, pad)) {
    Waveform piece(w.channels, seg, w.sample_rate);
    for (std::size_t c = 0; c < w.channels; ++c) {
      const std::vector<float> src(w.channel(c).begin(), w.channel(c).end());
      const std::vector<float> cut = cut_rows(src, 1, win, pad);
      std::copy(cut.begin(), cut.end(), piece.channel(c).begin());
    }
    out.push_back(std::move(piece));
  }
  return out;
}

}  // namespace listen::io
