// include/listen/io/labels.hpp

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

#ifndef LISTEN_IO_LABELS_HPP_
#define LISTEN_IO_LABELS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace listen::io {

// Label frames are rasterized at the feature frame rate.
inline constexpr double kLabelFrameRate = 64.0;

// Frame index of time t: floor(t * 64).
std::size_t frame_index(double seconds);

struct Event {
  std::size_t label = 0;
  double onset = 0.0;
  double offset = 0.0;
  std::optional<double> azimuth_deg;
  std::optional<double> elevation_deg;
};

enum class LabelKind { weak, strong, seld };

// Dense frame-major matrix of `frames` x `classes`.
template <typename T>
struct FrameMatrix {
  std::size_t frames = 0;
  std::size_t classes = 0;
  std::vector<T> data;

  FrameMatrix() = default;
  FrameMatrix(std::size_t n_frames, std::size_t n_classes, T fill = T{})
      : frames(n_frames), classes(n_classes), data(n_frames * n_classes, fill) {}
  T& at(std::size_t f, std::size_t k) { return data[f * classes + k]; }
  const T& at(std::size_t f, std::size_t k) const { return data[f * classes + k]; }
};

// Targets for one clip. Only the members implied by `kind` are populated:
// weak -> `weak`; strong -> `strong`; seld -> `strong` (activity) plus the
// two angle matrices in degrees.
struct LabelBundle {
  LabelKind kind = LabelKind::weak;
  std::vector<std::uint8_t> weak;
  FrameMatrix<std::uint8_t> strong;
  FrameMatrix<float> azimuth_deg;
  FrameMatrix<float> elevation_deg;
};

// Element-wise OR over annotators. Throws InvalidInputError on an empty
// list, ragged vectors, or entries outside {0, 1}.
std::vector<std::uint8_t> aggregate_annotations(
    const std::vector<std::vector<std::uint8_t>>& annotations);

// Event [onset, offset) covers frames [floor(onset*64), floor(offset*64)),
// clipped to `frames`. Angle matrices are filled when any event carries
// angles, which makes the result a seld bundle.
LabelBundle rasterize_events(const std::vector<Event>& events, std::size_t frames,
                             std::size_t n_classes);

// Clip-level tags implied by a frame activity matrix (any active frame).
std::vector<std::uint8_t> weak_from_strong(const FrameMatrix<std::uint8_t>& strong);

// Maximal runs of active frames, one event per run, in (class, onset) order.
// Times are frame / 64.
std::vector<Event> events_from_activity(const FrameMatrix<std::uint8_t>& activity);

}  // namespace listen::io

#endif  // LISTEN_IO_LABELS_HPP_
