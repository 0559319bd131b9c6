// src/metrics/detection.cpp

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

#include "listen/metrics/detection.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "listen/errors.hpp"
#include "listen/metrics/tagging.hpp"

namespace listen::metrics {

SegmentCounts& SegmentCounts::operator+=(const SegmentCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  reference_active += o.reference_active;
  return *this;
}

double SegmentCounts::f1() const { return f1_from_counts(tp, fp, fn); }

std::optional<double> SegmentCounts::error_rate() const {
  if (reference_active == 0) return std::nullopt;
  return static_cast<double>(substitutions + deletions + insertions) /
         static_cast<double>(reference_active);
}

SegmentCounts sed_segment_metrics(const ActivityMatrix& reference, const ActivityMatrix& estimate,
                                  double segment_seconds, double frame_rate) {
  if (reference.classes != estimate.classes)
    throw ShapeError("segment metrics: reference and estimate class counts differ");
  const auto seg = static_cast<std::size_t>(std::llround(segment_seconds * frame_rate));
  if (seg == 0) throw InvalidInputError("segment metrics: segment shorter than one frame");
  const std::size_t K = reference.classes;
  const std::size_t frames = std::max(reference.frames, estimate.frames);
  auto active = [&](const ActivityMatrix& m, std::size_t begin, std::size_t end, std::size_t k) {
    for (std::size_t f = begin; f < std::min(end, m.frames); ++f)
      if (m.at(f, k)) return true;
    return false;
  };

  SegmentCounts counts;
  for (std::size_t begin = 0; begin < frames; begin += seg) {
    const std::size_t end = begin + seg;
    std::size_t tp = 0, fp = 0, fn = 0, n_ref = 0;
    for (std::size_t k = 0; k < K; ++k) {
      const bool r = active(reference, begin, end, k);
      const bool e = active(estimate, begin, end, k);
      n_ref += r;
      tp += r && e;
      fp += !r && e;
      fn += r && !e;
    }
    counts.tp += tp;
    counts.fp += fp;
    counts.fn += fn;
    counts.reference_active += n_ref;
    counts.substitutions += std::min(fn, fp);
    counts.deletions += fn > fp ? fn - fp : 0;
    counts.insertions += fp > fn ? fp - fn : 0;
  }
  return counts;
}

double EventCounts::f1() const { return f1_from_counts(tp, fp, fn); }

EventCounts sed_event_counts(const std::vector<TimedEvent>& reference,
                             const std::vector<TimedEvent>& estimate, double onset_collar) {
  using Key = std::pair<std::string, std::size_t>;
  std::map<Key, std::vector<const TimedEvent*>> refs, ests;
  for (const TimedEvent& e : reference) refs[{e.clip_id, e.label}].push_back(&e);
  for (const TimedEvent& e : estimate) ests[{e.clip_id, e.label}].push_back(&e);
  auto by_onset = [](const TimedEvent* a, const TimedEvent* b) { return a->onset < b->onset; };

  EventCounts counts;
  for (auto& [key, ref_list] : refs) {
    std::stable_sort(ref_list.begin(), ref_list.end(), by_onset);
    std::vector<const TimedEvent*> est_list;
    if (auto it = ests.find(key); it != ests.end()) est_list = it->second;
    std::stable_sort(est_list.begin(), est_list.end(), by_onset);
    std::vector<bool> used(est_list.size(), false);
    for (const TimedEvent* r : ref_list) {
      const double offset_collar = std::max(onset_collar, 0.2 * (r->offset - r->onset));
      for (std::size_t j = 0; j < est_list.size(); ++j) {
        if (used[j]) continue;
        const TimedEvent* e = est_list[j];
        if (std::abs(e->onset - r->onset) <= onset_collar &&
            std::abs(e->offset - r->offset) <= offset_collar) {
          used[j] = true;
          ++counts.tp;
          break;
        }
      }
    }
  }
  counts.fn = reference.size() - counts.tp;
  counts.fp = estimate.size() - counts.tp;
  return counts;
}

double sed_event_f1(const std::vector<TimedEvent>& reference, const std::vector<TimedEvent>& estimate,
                    double onset_collar) {
  return sed_event_counts(reference, estimate, onset_collar).f1();
}

}  // namespace listen::metrics
