// include/listen/io/segment.hpp

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

#ifndef LISTEN_IO_SEGMENT_HPP_
#define LISTEN_IO_SEGMENT_HPP_

#include <cstddef>
#include <vector>

#include "listen/io/wav.hpp"

namespace listen::io {

enum class PadPolicy { repeat, zero, none };

// Placement of one fixed-length segment over a source of `source_len`
// positions. Positions past the end of the source are filled according
// to the pad policy; with `repeat`, position i of the segment reads
// source[(start + i) mod source_len].
struct SegmentWindow {
  std::size_t start = 0;
  std::size_t length = 0;
};

// Segment layout for a source of `source_len` positions. A source no longer
// than one segment yields a single window at 0 (none for PadPolicy::none).
// Longer sources get windows at multiples of `hop`; if the last full window
// stops short of the end, one more padded window covers the tail unless the
// policy is none.
std::vector<SegmentWindow> plan_segments(std::size_t source_len, std::size_t segment_len,
                                         std::size_t hop, PadPolicy pad);

// Copies `window` out of `source` (rows of `row_width` contiguous values),
// padding per policy. Used for both waveforms (row_width 1) and frame
// matrices (row_width = feature or class count).
template <typename T>
std::vector<T> cut_rows(const std::vector<T>& source, std::size_t row_width,
                        SegmentWindow window, PadPolicy pad) {
  const std::size_t rows = row_width == 0 ? 0 : source.size() / row_width;
  std::vector<T> out(window.length * row_width, T{});
  for (std::size_t i = 0; i < window.length; ++i) {
    std::size_t src = window.start + i;
    if (src >= rows) {
      if (pad != PadPolicy::repeat || rows == 0) continue;
      src %= rows;
    }
    for (std::size_t j = 0; j < row_width; ++j) out[i * row_width + j] = source[src * row_width + j];
  }
  return out;
}

// Cuts a waveform into segments of segment_seconds every hop_seconds.
std::vector<Waveform> segment_clip(const Waveform& w, double segment_seconds, double hop_seconds,
                                   PadPolicy pad);

}  // namespace listen::io

#endif  // LISTEN_IO_SEGMENT_HPP_
