// include/listen/metrics/localization.hpp

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

#ifndef LISTEN_METRICS_LOCALIZATION_HPP_
#define LISTEN_METRICS_LOCALIZATION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>

#include "listen/io/labels.hpp"

namespace listen::metrics {

// Frame-level activity with angles in degrees; angles are only read where
// the activity is set.
struct SeldFrames {
  io::FrameMatrix<std::uint8_t> activity;
  io::FrameMatrix<float> azimuth;
  io::FrameMatrix<float> elevation;
};

// Great-circle angle between two directions, degrees in [0, 180].
double central_angle_deg(double azimuth1, double elevation1, double azimuth2, double elevation2);

// Running sums over clips for DOA error and frame recall.
struct LocalizationCounts {
  double angle_sum = 0.0;
  std::size_t matched_pairs = 0;
  std::size_t frames = 0;
  std::size_t count_matches = 0;

  LocalizationCounts& operator+=(const LocalizationCounts& o);
  // Mean central angle over jointly-active (frame, class) pairs.
  std::optional<double> doa_error() const;
  // Fraction of frames whose active-event counts agree.
  double frame_recall() const;
};

LocalizationCounts localization_counts(const SeldFrames& reference, const SeldFrames& estimate);

std::optional<double> doa_error(const SeldFrames& reference, const SeldFrames& estimate);
double frame_recall(const SeldFrames& reference, const SeldFrames& estimate);

// Mean of [ER, 1 - F1, DOA / 180, 1 - FR] after clamping ER >= 0,
// F1 and FR into [0, 1] and DOA into [0, 180].
double seld_score(double error_rate, double f1, double doa_deg, double frame_recall);

}  // namespace listen::metrics

#endif  // LISTEN_METRICS_LOCALIZATION_HPP_
