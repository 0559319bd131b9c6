// include/listen/nn/ops.hpp

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

#ifndef LISTEN_NN_OPS_HPP_
#define LISTEN_NN_OPS_HPP_

#include <cstddef>
#include <vector>

#include "listen/nn/tensor.hpp"

namespace listen::nn {

enum class Mode { train, eval };
enum class PoolKind { avg, max };

// Per-channel running statistics of a batch-norm layer.
template <typename Real>
struct BatchNormStats {
  std::vector<Real> running_mean;
  std::vector<Real> running_var;
  Real momentum = Real(0.1);
  Real eps = Real(1e-5);

  explicit BatchNormStats(std::size_t channels = 0)
      : running_mean(channels, Real(0)), running_var(channels, Real(1)) {}
};

// Stride-1 convolution with zero "same" padding and no bias.
// x: (N, Cin, H, W); weight: (Cout, Cin, kh, kw) with odd kh, kw.
template <typename Real>
Tensor<Real> conv2d(const Tensor<Real>& x, const Tensor<Real>& weight);

// Train mode normalises with the batch statistics over (N, H, W) and folds
// them into `stats` (unbiased variance, momentum update). Eval mode reads
// `stats` only.
template <typename Real>
Tensor<Real> batchnorm2d(const Tensor<Real>& x, const Tensor<Real>& gamma, const Tensor<Real>& beta,
                         BatchNormStats<Real>& stats, Mode mode);
template <typename Real>
Tensor<Real> batchnorm2d_eval(const Tensor<Real>& x, const Tensor<Real>& gamma,
                              const Tensor<Real>& beta, const BatchNormStats<Real>& stats);

template <typename Real>
Tensor<Real> relu(const Tensor<Real>& x);

// 2x2 pooling over the last two axes of an NCHW tensor. An odd axis is
// first extended by repeating its last row/column. Max pooling sends the
// gradient to the first maximum in row-major window order.
template <typename Real>
Tensor<Real> pool2x2(const Tensor<Real>& x, PoolKind kind);

// (N, C, T, F) -> (N, C): mean over F, then max over T.
template <typename Real>
Tensor<Real> global_pool_clip(const Tensor<Real>& x);

// (N, C, T, F) -> (N, T, C): mean over F.
template <typename Real>
Tensor<Real> global_pool_frames(const Tensor<Real>& x);

// Affine map over the last axis: y = x W^T + b with W (out, in), b (out).
template <typename Real>
Tensor<Real> linear(const Tensor<Real>& x, const Tensor<Real>& weight, const Tensor<Real>& bias);

// (N, C, T, F) -> (N, C, frames, F), repeating the last time step.
template <typename Real>
Tensor<Real> pad_time_edge(const Tensor<Real>& x, std::size_t frames);

// (N, T, K) -> (N, T * factor, K), nearest neighbour.
template <typename Real>
Tensor<Real> upsample_time(const Tensor<Real>& x, std::size_t factor);

// (N, T, K) -> (N, frames, K), keeping the leading frames.
template <typename Real>
Tensor<Real> crop_time(const Tensor<Real>& x, std::size_t frames);

// (N, T, K) -> (N, K), first maximum on ties.
template <typename Real>
Tensor<Real> max_over_time(const Tensor<Real>& x);

template <typename Real>
Tensor<Real> add(const Tensor<Real>& a, const Tensor<Real>& b);

template <typename Real>
Tensor<Real> scale(const Tensor<Real>& a, Real factor);

// Inference helpers without graph recording; softmax is over the last axis.
template <typename Real>
std::vector<Real> softmax(const Tensor<Real>& logits);
template <typename Real>
std::vector<Real> sigmoid(const Tensor<Real>& logits);

}  // namespace listen::nn

#endif  // LISTEN_NN_OPS_HPP_
