// src/nn/losses.cpp

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

#include "listen/nn/losses.hpp"

#include <algorithm>
#include <cmath>

#include "listen/errors.hpp"
#include "listen/nn/ops.hpp"

namespace listen::nn {

template <typename Real>
Tensor<Real> loss_ce(const Tensor<Real>& logits, const Tensor<Real>& target) {
  if (logits.rank() != 2 || logits.shape() != target.shape())
    throw ShapeError("loss_ce: logits " + to_string(logits.shape()) + " vs target " +
                     to_string(target.shape()));
  const std::size_t N = logits.dim(0), K = logits.dim(1);
  if (N == 0 || K == 0) throw ShapeError("loss_ce: empty batch");
  const auto z = logits.values();
  const auto y = target.values();
  std::vector<std::size_t> label(N);
  for (std::size_t n = 0; n < N; ++n) {
    std::size_t ones = 0;
    for (std::size_t k = 0; k < K; ++k) {
      const Real v = y[n * K + k];
      if (v == Real(1)) {
        ++ones;
        label[n] = k;
      } else if (v != Real(0)) {
        ones = 2;
      }
    }
    if (ones != 1) throw ContractViolation("loss_ce: target row " + std::to_string(n) + " is not one-hot");
  }

  std::vector<Real> prob(N * K);
  double total = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    const Real* row = z.data() + n * K;
    const Real m = *std::max_element(row, row + K);
    double sum = 0.0;
    for (std::size_t k = 0; k < K; ++k) sum += std::exp(static_cast<double>(row[k] - m));
    const double log_norm = static_cast<double>(m) + std::log(sum);
    total += log_norm - static_cast<double>(row[label[n]]);
    for (std::size_t k = 0; k < K; ++k)
      prob[n * K + k] = static_cast<Real>(std::exp(static_cast<double>(row[k]) - log_norm));
  }
  auto ln = logits.node_ptr();
  return Tensor<Real>::from_op(
      {}, {static_cast<Real>(total / static_cast<double>(N))}, {logits},
      [ln, N, K, prob = std::move(prob), label = std::move(label)](const detail::Node<Real>& self) {
        auto* dz = grad_sink(ln);
        const Real g = self.grad[0] / static_cast<Real>(N);
        for (std::size_t n = 0; n < N; ++n)
          for (std::size_t k = 0; k < K; ++k)
            (*dz)[n * K + k] += g * (prob[n * K + k] - (k == label[n] ? Real(1) : Real(0)));
      });
}

template <typename Real>
Tensor<Real> loss_bce(const Tensor<Real>& logits, const Tensor<Real>& target,
                      const std::optional<Tensor<Real>>& mask) {
  if (logits.shape() != target.shape())
    throw ShapeError("loss_bce: logits " + to_string(logits.shape()) + " vs target " +
                     to_string(target.shape()));
  if (mask && mask->shape() != logits.shape()) throw ShapeError("loss_bce: mask shape mismatch");
  const auto z = logits.values();
  const auto y = target.values();
  const std::size_t n = z.size();
  double count = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = mask ? static_cast<double>(mask->values()[i]) : 1.0;
    if (w == 0.0) continue;
    const double zi = z[i], yi = y[i];
    total += w * (std::max(zi, 0.0) - zi * yi + std::log1p(std::exp(-std::abs(zi))));
    count += w;
  }
  const double loss = count > 0.0 ? total / count : 0.0;
  std::vector<Real> weights;
  if (mask) weights.assign(mask->values().begin(), mask->values().end());
  auto ln = logits.node_ptr();
  auto tn = target.node_ptr();
  return Tensor<Real>::from_op(
      {}, {static_cast<Real>(loss)}, {logits},
      [ln, tn, count, weights = std::move(weights)](const detail::Node<Real>& self) {
        if (count <= 0.0) return;
        auto* dz = grad_sink(ln);
        const double g = static_cast<double>(self.grad[0]) / count;
        for (std::size_t i = 0; i < dz->size(); ++i) {
          const double w = weights.empty() ? 1.0 : static_cast<double>(weights[i]);
          if (w == 0.0) continue;
          const double zi = ln->value[i];
          const double p = zi >= 0.0 ? 1.0 / (1.0 + std::exp(-zi)) : std::exp(zi) / (1.0 + std::exp(zi));
          (*dz)[i] += static_cast<Real>(g * w * (p - static_cast<double>(tn->value[i])));
        }
      });
}

template <typename Real>
Tensor<Real> masked_l1(const Tensor<Real>& pred, const Tensor<Real>& target, const Tensor<Real>& mask) {
  if (pred.shape() != target.shape() || pred.shape() != mask.shape())
    throw ShapeError("masked_l1: shape mismatch");
  const auto p = pred.values();
  const auto t = target.values();
  const auto m = mask.values();
  double count = 0.0, total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (m[i] == Real(0)) continue;
    total += static_cast<double>(m[i]) * std::abs(static_cast<double>(p[i]) - t[i]);
    count += m[i];
  }
  auto pn = pred.node_ptr(), tn = target.node_ptr(), mn = mask.node_ptr();
  return Tensor<Real>::from_op(
      {}, {static_cast<Real>(count > 0.0 ? total / count : 0.0)}, {pred},
      [pn, tn, mn, count](const detail::Node<Real>& self) {
        if (count <= 0.0) return;
        auto* dp = grad_sink(pn);
        const double g = static_cast<double>(self.grad[0]) / count;
        for (std::size_t i = 0; i < dp->size(); ++i) {
          const double diff = static_cast<double>(pn->value[i]) - tn->value[i];
          const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
          (*dp)[i] += static_cast<Real>(g * mn->value[i] * sign);
        }
      });
}

template <typename Real>
Tensor<Real> loss_seld(const Tensor<Real>& sed_logits, const Tensor<Real>& azimuth,
                       const Tensor<Real>& elevation, const SeldTargets<Real>& targets, Real lambda) {
  const Tensor<Real> detection = loss_bce(sed_logits, targets.activity);
  // Both angle terms share the active-pair count, so their sum is the
  // per-pair sum of azimuth and elevation errors.
  const Tensor<Real> localisation =
      add(masked_l1(azimuth, targets.azimuth, targets.activity),
          masked_l1(elevation, targets.elevation, targets.activity));
  return add(detection, scale(localisation, lambda));
}

#define LISTEN_INSTANTIATE_LOSSES(Real)                                                         \
  template Tensor<Real> loss_ce(const Tensor<Real>&, const Tensor<Real>&);                      \
  template Tensor<Real> loss_bce(const Tensor<Real>&, const Tensor<Real>&,                      \
                                 const std::optional<Tensor<Real>>&);                           \
  template Tensor<Real> masked_l1(const Tensor<Real>&, const Tensor<Real>&, const Tensor<Real>&); \
  template Tensor<Real> loss_seld(const Tensor<Real>&, const Tensor<Real>&, const Tensor<Real>&, \
                                  const SeldTargets<Real>&, Real);

LISTEN_INSTANTIATE_LOSSES(float)
LISTEN_INSTANTIATE_LOSSES(double)
#undef LISTEN_INSTANTIATE_LOSSES

}  // namespace listen::nn
