// include/listen/metrics/detection.hpp

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

#ifndef LISTEN_METRICS_DETECTION_HPP_
#define LISTEN_METRICS_DETECTION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "listen/io/labels.hpp"

namespace listen::metrics {

using ActivityMatrix = io::FrameMatrix<std::uint8_t>;

// Pooled segment-level counts. Add per-clip counts with += and read the
// corpus metrics at the end.
struct SegmentCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
  std::size_t substitutions = 0, deletions = 0, insertions = 0;
  std::size_t reference_active = 0;

  SegmentCounts& operator+=(const SegmentCounts& o);
  double f1() const;
  // (S + D + I) / N_ref; absent when the reference has no active pair.
  std::optional<double> error_rate() const;
};

// Frame activity is max-pooled into segments of segment_seconds (the last
// segment may be partial). Within each segment, S = min(FN, FP),
// D = max(0, FN - FP), I = max(0, FP - FN). Frames missing from the
// shorter matrix count as inactive.
SegmentCounts sed_segment_metrics(const ActivityMatrix& reference, const ActivityMatrix& estimate,
                                  double segment_seconds = 1.0,
                                  double frame_rate = io::kLabelFrameRate);

struct TimedEvent {
  std::string clip_id;
  std::size_t label = 0;
  double onset = 0.0;
  double offset = 0.0;
};

struct EventCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
  double f1() const;
};

// Greedy one-to-one matching within each (clip, class): reference events in
// onset order take the earliest unmatched estimate whose onset is within
// the collar and whose offset is within max(collar, 0.2 * reference
// duration).
EventCounts sed_event_counts(const std::vector<TimedEvent>& reference,
                             const std::vector<TimedEvent>& estimate, double onset_collar = 0.2);

double sed_event_f1(const std::vector<TimedEvent>& reference, const std::vector<TimedEvent>& estimate,
                    double onset_collar = 0.2);

}  // namespace listen::metrics

#endif  // LISTEN_METRICS_DETECTION_HPP_
