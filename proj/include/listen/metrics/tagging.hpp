// include/listen/metrics/tagging.hpp

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

#ifndef LISTEN_METRICS_TAGGING_HPP_
#define LISTEN_METRICS_TAGGING_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace listen::metrics {

// (N x K) clip scores with binary targets, row-major. Scores may be
// probabilities or raw logits: every ranking metric below is invariant to
// strictly monotone transforms.
struct ClipScores {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<double> scores;
  std::vector<std::uint8_t> targets;

  ClipScores() = default;
  ClipScores(std::size_t rows, std::size_t classes)
      : n(rows), k(classes), scores(rows * classes, 0.0), targets(rows * classes, 0) {}
  double score(std::size_t i, std::size_t c) const { return scores[i * k + c]; }
  bool target(std::size_t i, std::size_t c) const { return targets[i * k + c] != 0; }
};

// Many-to-one map from fine to coarse class indices. Coarse indices must be
// contiguous from 0 with every coarse class used.
struct Taxonomy {
  std::vector<std::size_t> fine_to_coarse;

  std::size_t coarse_count() const;
  void validate(std::size_t fine_classes) const;
};

enum class Averaging { micro, macro };

// Mean over reference classes of per-class recall; classes absent from the
// reference are left out of the mean.
double accuracy_classwise(const std::vector<std::size_t>& predicted,
                          const std::vector<std::size_t>& truth, std::size_t n_classes);

// Label-weighted label-ranking average precision. Within each row, labels
// are ranked by descending score with ties broken by class index. Returns
// NaN when there is no positive label at all.
double lwlrap(const ClipScores& c);

struct ApResult {
  std::vector<std::optional<double>> per_class;  // empty for classes without positives
  double mean = 0.0;                             // NaN if no class has positives
};

// Rank-based (non-interpolated) average precision per class: the mean of
// precision@rank over the positive samples, samples ranked by descending
// score with ties broken by row index.
ApResult average_precision(const ClipScores& c);

// Area under the precision/recall step curve, sum of
// (R_i - R_{i-1}) * P_i over rank cut-offs. Micro pools every
// (sample, class) pair in row-major order; macro averages the classes that
// have positives. With a taxonomy, scores and targets are first rolled up
// by max over each coarse group.
double auprc(const ClipScores& c, Averaging averaging, const Taxonomy* taxonomy = nullptr);

// Roll-up used by the coarse metrics.
ClipScores to_coarse(const ClipScores& fine, const Taxonomy& taxonomy);

// F1 over pooled (sample, class) decisions with score >= threshold.
double micro_f1(const ClipScores& c, double threshold = 0.5, const Taxonomy* taxonomy = nullptr);

// 2 TP / (2 TP + FP + FN); 1 when there is nothing to find and nothing found.
double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);

}  // namespace listen::metrics

#endif  // LISTEN_METRICS_TAGGING_HPP_
