// src/io/labels.cpp

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

#include "listen/io/labels.hpp"

#include <algorithm>
#include <cmath>

#include "listen/errors.hpp"

namespace listen::io {

std::size_t frame_index(double seconds) {
  if (seconds <= 0.0) return 0;
  return static_cast<std::size_t>(std::floor(seconds * kLabelFrameRate));
}

std::vector<std::uint8_t> aggregate_annotations(
    const std::vector<std::vector<std::uint8_t>>& annotations) {
  if (annotations.empty()) throw InvalidInputError("aggregate_annotations: no annotators");
  std::vector<std::uint8_t> out(annotations.front().size(), 0);
  for (const auto& a : annotations) {
    if (a.size() != out.size()) throw InvalidInputError("aggregate_annotations: ragged annotations");
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] > 1) throw InvalidInputError("aggregate_annotations: entries must be 0 or 1");
      out[k] |= a[k];
    }
  }
  return out;
}

LabelBundle rasterize_events(const std::vector<Event>& events, std::size_t frames,
                             std::size_t n_classes) {
  const bool seld = std::any_of(events.begin(), events.end(), [](const Event& e) {
    return e.azimuth_deg.has_value() || e.elevation_deg.has_value();
  });
  LabelBundle b;
  b.kind = seld ? LabelKind::seld : LabelKind::strong;
  b.strong = FrameMatrix<std::uint8_t>(frames, n_classes, 0);
  if (seld) {
    b.azimuth_deg = FrameMatrix<float>(frames, n_classes, 0.0f);
    b.elevation_deg = FrameMatrix<float>(frames, n_classes, 0.0f);
  }
  for (const Event& e : events) {
    if (e.label >= n_classes) throw InvalidInputError("rasterize_events: class out of range");
    const std::size_t begin = std::min(frame_index(e.onset), frames);
    const std::size_t end = std::min(frame_index(e.offset), frames);
    for (std::size_t f = begin; f < end; ++f) {
      b.strong.at(f, e.label) = 1;
      if (seld) {
        b.azimuth_deg.at(f, e.label) = static_cast<float>(e.azimuth_deg.value_or(0.0));
        b.elevation_deg.at(f, e.label) = static_cast<float>(e.elevation_deg.value_or(0.0));
      }
    }
  }
  return b;
}

std::vector<std::uint8_t> weak_from_strong(const FrameMatrix<std::uint8_t>& strong) {
  std::vector<std::uint8_t> weak(strong.classes, 0);
  for (std::size_t f = 0; f < strong.frames; ++f)
    for (std::size_t k = 0; k < strong.classes; ++k) weak[k] |= strong.at(f, k);
  return weak;
}

std::vector<Event> events_from_activity(const FrameMatrix<std::uint8_t>& activity) {
  std::vector<Event> events;
  for (std::size_t k = 0; k < activity.classes; ++k) {
    std::size_t f = 0;
    while (f < activity.frames) {
      if (!activity.at(f, k)) {
        ++f;
        continue;
      }
      const std::size_t begin = f;
      while (f < activity.frames && activity.at(f, k)) ++f;
      Event e;
      e.label = k;
      e.onset = static_cast<double>(begin) / kLabelFrameRate;
      e.offset = static_cast<double>(f) / kLabelFrameRate;
      events.push_back(e);
    }
  }
  return events;
}

}  // namespace listen::io
