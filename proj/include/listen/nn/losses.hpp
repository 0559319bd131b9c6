// include/listen/nn/losses.hpp

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

#ifndef LISTEN_NN_LOSSES_HPP_
#define LISTEN_NN_LOSSES_HPP_

#include <optional>

#include "listen/nn/tensor.hpp"

namespace listen::nn {

// Mean over rows of -sum_k y_k ln softmax(z)_k, via a fused log-softmax.
// logits and target are (N, K); every target row must be one-hot, otherwise
// ContractViolation is thrown.
template <typename Real>
Tensor<Real> loss_ce(const Tensor<Real>& logits, const Tensor<Real>& target);

// Mean of -[y ln p + (1 - y) ln(1 - p)] with p = sigmoid(z), computed as
// max(z, 0) - z y + log1p(exp(-|z|)). With a mask (same shape, 0/1) the
// mean runs over masked-in elements only; an empty mask gives 0.
template <typename Real>
Tensor<Real> loss_bce(const Tensor<Real>& logits, const Tensor<Real>& target,
                      const std::optional<Tensor<Real>>& mask = std::nullopt);

// sum(mask * |pred - target|) / sum(mask); 0 when the mask is empty.
// The subgradient of |.| at 0 is taken as 0.
template <typename Real>
Tensor<Real> masked_l1(const Tensor<Real>& pred, const Tensor<Real>& target, const Tensor<Real>& mask);

// Frame-aligned SELD targets; angles in normalised units (azimuth / 180,
// elevation / 90).
template <typename Real>
struct SeldTargets {
  Tensor<Real> activity;
  Tensor<Real> azimuth;
  Tensor<Real> elevation;
};

// BCE on the detection logits plus lambda times the azimuth and elevation
// absolute errors, summed per active (frame, class) pair and averaged over
// the number of active pairs.
template <typename Real>
Tensor<Real> loss_seld(const Tensor<Real>& sed_logits, const Tensor<Real>& azimuth,
                       const Tensor<Real>& elevation, const SeldTargets<Real>& targets, Real lambda);

}  // namespace listen::nn

#endif  // LISTEN_NN_LOSSES_HPP_
