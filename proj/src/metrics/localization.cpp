// src/metrics/localization.cpp

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

#include "listen/metrics/localization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "listen/errors.hpp"

namespace listen::metrics {

double central_angle_deg(double azimuth1, double elevation1, double azimuth2, double elevation2) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double e1 = elevation1 * rad, e2 = elevation2 * rad;
  const double cosine = std::sin(e1) * std::sin(e2) +
                        std::cos(e1) * std::cos(e2) * std::cos((azimuth1 - azimuth2) * rad);
  return std::acos(std::clamp(cosine, -1.0, 1.0)) / rad;
}

LocalizationCounts& LocalizationCounts::operator+=(const LocalizationCounts& o) {
  angle_sum += o.angle_sum;
  matched_pairs += o.matched_pairs;
  frames += o.frames;
  count_matches += o.count_matches;
  return *this;
}

std::optional<double> LocalizationCounts::doa_error() const {
  if (matched_pairs == 0) return std::nullopt;
  return angle_sum / static_cast<double>(matched_pairs);
}

double LocalizationCounts::frame_recall() const {
  return frames == 0 ? 1.0 : static_cast<double>(count_matches) / static_cast<double>(frames);
}

LocalizationCounts localization_counts(const SeldFrames& reference, const SeldFrames& estimate) {
  const auto& ra = reference.activity;
  const auto& ea = estimate.activity;
  if (ra.classes != ea.classes) throw ShapeError("localization: class counts differ");
  LocalizationCounts counts;
  counts.frames = std::max(ra.frames, ea.frames);
  for (std::size_t f = 0; f < counts.frames; ++f) {
    std::size_t n_ref = 0, n_est = 0;
    for (std::size_t k = 0; k < ra.classes; ++k) {
      const bool r = f < ra.frames && ra.at(f, k);
      const bool e = f < ea.frames && ea.at(f, k);
      n_ref += r;
      n_est += e;
      if (r && e) {
        counts.angle_sum += central_angle_deg(reference.azimuth.at(f, k), reference.elevation.at(f, k),
                                              estimate.azimuth.at(f, k), estimate.elevation.at(f, k));
        ++counts.matched_pairs;
      }
    }
    counts.count_matches += n_ref == n_est;
  }
  return counts;
}

std::optional<double> doa_error(const SeldFrames& reference, const SeldFrames& estimate) {
  return localization_counts(reference, estimate).doa_error();
}

double frame_recall(const SeldFrames& reference, const SeldFrames& estimate) {
  return localization_counts(reference, estimate).frame_recall();
}

double seld_score(double error_rate, double f1, double doa_deg, double frame_recall) {
  const double er = std::max(0.0, error_rate);
  const double f = std::clamp(f1, 0.0, 1.0);
  const double doa = std::clamp(doa_deg, 0.0, 180.0);
  const double fr = std::clamp(frame_recall, 0.0, 1.0);
  return (er + (1.0 - f) + doa / 180.0 + (1.0 - fr)) / 4.0;
}

}  // namespace listen::metrics
