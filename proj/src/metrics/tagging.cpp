// src/metrics/tagging.cpp

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

#include "listen/metrics/tagging.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "listen/errors.hpp"

namespace listen::metrics {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check(const ClipScores& c) {
  if (c.scores.size() != c.n * c.k || c.targets.size() != c.n * c.k)
    throw ShapeError("clip scores and targets must both be N x K");
}

// Indices ordered by descending score; equal scores keep index order.
std::vector<std::size_t> rank_descending(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

// Step-curve area for one ranked list.
std::optional<double> step_auprc(const std::vector<double>& scores,
                                 const std::vector<std::uint8_t>& targets) {
  const std::size_t positives =
      static_cast<std::size_t>(std::count_if(targets.begin(), targets.end(), [](auto t) { return t != 0; }));
  if (positives == 0) return std::nullopt;
  const auto order = rank_descending(scores);
  const double P = static_cast<double>(positives);
  double area = 0.0, prev_recall = 0.0;
  std::size_t tp = 0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (targets[order[r]]) ++tp;
    const double precision = static_cast<double>(tp) / static_cast<double>(r + 1);
    const double recall = static_cast<double>(tp) / P;
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return area;
}

}  // namespace

std::size_t Taxonomy::coarse_count() const {
  return fine_to_coarse.empty() ? 0 : *std::max_element(fine_to_coarse.begin(), fine_to_coarse.end()) + 1;
}

void Taxonomy::validate(std::size_t fine_classes) const {
  if (fine_to_coarse.size() != fine_classes)
    throw InvalidInputError("taxonomy covers " + std::to_string(fine_to_coarse.size()) +
                            " fine classes, scores have " + std::to_string(fine_classes));
  std::vector<bool> used(coarse_count(), false);
  for (std::size_t c : fine_to_coarse) used[c] = true;
  if (std::find(used.begin(), used.end(), false) != used.end())
    throw InvalidInputError("taxonomy coarse indices are not contiguous");
}

double accuracy_classwise(const std::vector<std::size_t>& predicted,
                          const std::vector<std::size_t>& truth, std::size_t n_classes) {
  if (predicted.size() != truth.size()) throw ShapeError("accuracy: prediction/reference length mismatch");
  std::vector<std::size_t> total(n_classes, 0), correct(n_classes, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= n_classes || predicted[i] >= n_classes)
      throw InvalidInputError("accuracy: class index out of range");
    ++total[truth[i]];
    if (predicted[i] == truth[i]) ++correct[truth[i]];
  }
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t k = 0; k < n_classes; ++k) {
    if (total[k] == 0) continue;
    sum += static_cast<double>(correct[k]) / static_cast<double>(total[k]);
    ++present;
  }
  return present == 0 ? kNaN : sum / static_cast<double>(present);
}

double lwlrap(const ClipScores& c) {
  check(c);
  // precision[i*k + label] for every positive label, summed afterwards in
  // row-major order.
  std::vector<double> precision(c.n * c.k, 0.0);
  std::size_t positives = 0;
  std::vector<double> row(c.k);
  for (std::size_t i = 0; i < c.n; ++i) {
    std::copy(c.scores.begin() + static_cast<std::ptrdiff_t>(i * c.k),
              c.scores.begin() + static_cast<std::ptrdiff_t>((i + 1) * c.k), row.begin());
    const auto order = rank_descending(row);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < c.k; ++r) {
      const std::size_t label = order[r];
      if (!c.target(i, label)) continue;
      ++hits;
      ++positives;
      precision[i * c.k + label] = static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  if (positives == 0) return kNaN;
  double sum = 0.0;
  for (std::size_t i = 0; i < c.n * c.k; ++i)
    if (c.targets[i]) sum += precision[i];
  return sum / static_cast<double>(positives);
}

ApResult average_precision(const ClipScores& c) {
  check(c);
  ApResult result;
  result.per_class.resize(c.k);
  std::vector<double> column(c.n);
  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t k = 0; k < c.k; ++k) {
    for (std::size_t i = 0; i < c.n; ++i) column[i] = c.score(i, k);
    const auto order = rank_descending(column);
    std::size_t hits = 0;
    double acc = 0.0;
    for (std::size_t r = 0; r < c.n; ++r) {
      if (!c.target(order[r], k)) continue;
      ++hits;
      acc += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
    if (hits == 0) continue;
    result.per_class[k] = acc / static_cast<double>(hits);
    sum += *result.per_class[k];
    ++counted;
  }
  result.mean = counted == 0 ? kNaN : sum / static_cast<double>(counted);
  return result;
}

ClipScores to_coarse(const ClipScores& fine, const Taxonomy& taxonomy) {
  check(fine);
  taxonomy.validate(fine.k);
  ClipScores coarse(fine.n, taxonomy.coarse_count());
  std::fill(coarse.scores.begin(), coarse.scores.end(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < fine.n; ++i)
    for (std::size_t f = 0; f < fine.k; ++f) {
      const std::size_t g = taxonomy.fine_to_coarse[f];
      double& s = coarse.scores[i * coarse.k + g];
      s = std::max(s, fine.score(i, f));
      coarse.targets[i * coarse.k + g] |= fine.targets[i * fine.k + f];
    }
  return coarse;
}

double auprc(const ClipScores& c, Averaging averaging, const Taxonomy* taxonomy) {
  if (taxonomy) return auprc(to_coarse(c, *taxonomy), averaging, nullptr);
  check(c);
  if (averaging == Averaging::micro) return step_auprc(c.scores, c.targets).value_or(kNaN);
  std::vector<double> scores(c.n);
  std::vector<std::uint8_t> targets(c.n);
  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t k = 0; k < c.k; ++k) {
    for (std::size_t i = 0; i < c.n; ++i) {
      scores[i] = c.score(i, k);
      targets[i] = c.targets[i * c.k + k];
    }
    if (const auto a = step_auprc(scores, targets)) {
      sum += *a;
      ++counted;
    }
  }
  return counted == 0 ? kNaN : sum / static_cast<double>(counted);
}

double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double micro_f1(const ClipScores& c, double threshold, const Taxonomy* taxonomy) {
  if (taxonomy) return micro_f1(to_coarse(c, *taxonomy), threshold, nullptr);
  check(c);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < c.scores.size(); ++i) {
    const bool predicted = c.scores[i] >= threshold;
    const bool actual = c.targets[i] != 0;
    tp += predicted && actual;
    fp += predicted && !actual;
    fn += !predicted && actual;
  }
  return f1_from_counts(tp, fp, fn);
}

}  // namespace listen::metrics
