// src/nn/ops.cpp

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

#include "listen/nn/ops.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>

#include "listen/errors.hpp"

namespace listen::nn {
namespace {

template <typename Real>
using RowMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Real>
using MatMap = Eigen::Map<RowMat<Real>>;
template <typename Real>
using ConstMatMap = Eigen::Map<const RowMat<Real>>;
template <typename Real>
using StridedMap = Eigen::Map<RowMat<Real>, 0, Eigen::OuterStride<>>;
template <typename Real>
using ConstStridedMap = Eigen::Map<const RowMat<Real>, 0, Eigen::OuterStride<>>;

// Bounds the im2col scratch buffer to this many output positions.
constexpr std::size_t kConvChunkPositions = 8192;

void require_rank(const Shape& s, std::size_t rank, const char* op) {
  if (s.size() != rank)
    throw ShapeError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                     to_string(s));
}

struct ConvGeometry {
  std::size_t channels, height, width, kh, kw;
  std::size_t taps() const { return channels * kh * kw; }
};

// col is (channels*kh*kw) x ((y1 - y0) * width).
template <typename Real>
void im2col(const Real* x, const ConvGeometry& g, std::size_t y0, std::size_t y1, Real* col) {
  const std::size_t positions = (y1 - y0) * g.width;
  const auto ph = static_cast<std::ptrdiff_t>(g.kh / 2), pw = static_cast<std::ptrdiff_t>(g.kw / 2);
  const auto H = static_cast<std::ptrdiff_t>(g.height), W = static_cast<std::ptrdiff_t>(g.width);
  std::size_t row = 0;
  for (std::size_t c = 0; c < g.channels; ++c) {
    const Real* plane = x + c * g.height * g.width;
    for (std::size_t ky = 0; ky < g.kh; ++ky) {
      for (std::size_t kx = 0; kx < g.kw; ++kx, ++row) {
        Real* dst = col + row * positions;
        const std::ptrdiff_t dy = static_cast<std::ptrdiff_t>(ky) - ph;
        const std::ptrdiff_t dx = static_cast<std::ptrdiff_t>(kx) - pw;
        for (std::size_t y = y0; y < y1; ++y) {
          const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y) + dy;
          Real* out = dst + (y - y0) * g.width;
          if (sy < 0 || sy >= H) {
            std::fill(out, out + g.width, Real(0));
            continue;
          }
          const Real* src = plane + sy * W;
          for (std::ptrdiff_t xo = 0; xo < W; ++xo) {
            const std::ptrdiff_t sx = xo + dx;
            out[xo] = (sx >= 0 && sx < W) ? src[sx] : Real(0);
          }
        }
      }
    }
  }
}

template <typename Real>
void col2im_add(const Real* col, const ConvGeometry& g, std::size_t y0, std::size_t y1, Real* x) {
  const std::size_t positions = (y1 - y0) * g.width;
  const auto ph = static_cast<std::ptrdiff_t>(g.kh / 2), pw = static_cast<std::ptrdiff_t>(g.kw / 2);
  const auto H = static_cast<std::ptrdiff_t>(g.height), W = static_cast<std::ptrdiff_t>(g.width);
  std::size_t row = 0;
  for (std::size_t c = 0; c < g.channels; ++c) {
    Real* plane = x + c * g.height * g.width;
    for (std::size_t ky = 0; ky < g.kh; ++ky) {
      for (std::size_t kx = 0; kx < g.kw; ++kx, ++row) {
        const Real* src = col + row * positions;
        const std::ptrdiff_t dy = static_cast<std::ptrdiff_t>(ky) - ph;
        const std::ptrdiff_t dx = static_cast<std::ptrdiff_t>(kx) - pw;
        for (std::size_t y = y0; y < y1; ++y) {
          const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y) + dy;
          if (sy < 0 || sy >= H) continue;
          Real* dst = plane + sy * W;
          const Real* in = src + (y - y0) * g.width;
          for (std::ptrdiff_t xo = 0; xo < W; ++xo) {
            const std::ptrdiff_t sx = xo + dx;
            if (sx >= 0 && sx < W) dst[sx] += in[xo];
          }
        }
      }
    }
  }
}

}  // namespace

template <typename Real>
Tensor<Real> conv2d(const Tensor<Real>& x, const Tensor<Real>& weight) {
  require_rank(x.shape(), 4, "conv2d input");
  require_rank(weight.shape(), 4, "conv2d weight");
  const std::size_t N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  const std::size_t Co = weight.dim(0), kh = weight.dim(2), kw = weight.dim(3);
  if (weight.dim(1) != C)
    throw ShapeError("conv2d: weight expects " + std::to_string(weight.dim(1)) +
                     " input channels, input has " + std::to_string(C));
  if (kh % 2 == 0 || kw % 2 == 0) throw ShapeError("conv2d: kernel sizes must be odd");

  const ConvGeometry g{C, H, W, kh, kw};
  const std::size_t HW = H * W, taps = g.taps();
  const std::size_t chunk_rows =
      std::max<std::size_t>(1, std::min(H, kConvChunkPositions / std::max<std::size_t>(W, 1)));
  std::vector<Real> out(N * Co * HW);
  const Real* xv = x.values().data();
  const Real* wv = weight.values().data();
  const ConstMatMap<Real> wm(wv, static_cast<Eigen::Index>(Co), static_cast<Eigen::Index>(taps));

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(N); ++n) {
    std::vector<Real> col(taps * chunk_rows * W);
    for (std::size_t y0 = 0; y0 < H; y0 += chunk_rows) {
      const std::size_t y1 = std::min(H, y0 + chunk_rows), P = (y1 - y0) * W;
      im2col(xv + n * C * HW, g, y0, y1, col.data());
      const ConstMatMap<Real> cm(col.data(), static_cast<Eigen::Index>(taps), static_cast<Eigen::Index>(P));
      StridedMap<Real> om(out.data() + n * Co * HW + y0 * W, static_cast<Eigen::Index>(Co),
                          static_cast<Eigen::Index>(P), Eigen::OuterStride<>(static_cast<Eigen::Index>(HW)));
      om.noalias() = wm * cm;
    }
  }

  auto xn = x.node_ptr();
  auto wn = weight.node_ptr();
  return Tensor<Real>::from_op(
      {N, Co, H, W}, std::move(out), {x, weight},
      [xn, wn, g, N, Co, HW, chunk_rows](const detail::Node<Real>& self) {
        const std::size_t taps = g.taps(), H = g.height, W = g.width;
        const Real* dy = self.grad.data();
        const ConstMatMap<Real> wm(wn->value.data(), static_cast<Eigen::Index>(Co),
                                   static_cast<Eigen::Index>(taps));
        if (auto* dx = grad_sink(xn)) {
#pragma omp parallel for schedule(static)
          for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(N); ++n) {
            std::vector<Real> col(taps * chunk_rows * W);
            for (std::size_t y0 = 0; y0 < H; y0 += chunk_rows) {
              const std::size_t y1 = std::min(H, y0 + chunk_rows), P = (y1 - y0) * W;
              const ConstStridedMap<Real> gm(dy + n * Co * HW + y0 * W, static_cast<Eigen::Index>(Co),
                                             static_cast<Eigen::Index>(P),
                                             Eigen::OuterStride<>(static_cast<Eigen::Index>(HW)));
              MatMap<Real> cm(col.data(), static_cast<Eigen::Index>(taps), static_cast<Eigen::Index>(P));
              cm.noalias() = wm.transpose() * gm;
              col2im_add(col.data(), g, y0, y1, dx->data() + n * g.channels * HW);
            }
          }
        }
        if (auto* dw = grad_sink(wn)) {
          MatMap<Real> dwm(dw->data(), static_cast<Eigen::Index>(Co), static_cast<Eigen::Index>(taps));
          std::vector<Real> col(taps * chunk_rows * W);
          for (std::size_t n = 0; n < N; ++n) {
            for (std::size_t y0 = 0; y0 < H; y0 += chunk_rows) {
              const std::size_t y1 = std::min(H, y0 + chunk_rows), P = (y1 - y0) * W;
              im2col(xn->value.data() + n * g.channels * HW, g, y0, y1, col.data());
              const ConstMatMap<Real> cm(col.data(), static_cast<Eigen::Index>(taps),
                                         static_cast<Eigen::Index>(P));
              const ConstStridedMap<Real> gm(dy + n * Co * HW + y0 * W, static_cast<Eigen::Index>(Co),
                                             static_cast<Eigen::Index>(P),
                                             Eigen::OuterStride<>(static_cast<Eigen::Index>(HW)));
              dwm.noalias() += gm * cm.transpose();
            }
          }
        }
      });
}

template <typename Real>
Tensor<Real> batchnorm2d(const Tensor<Real>& x, const Tensor<Real>& gamma, const Tensor<Real>& beta,
                         BatchNormStats<Real>& stats, Mode mode) {
  if (mode == Mode::eval) return batchnorm2d_eval(x, gamma, beta, stats);
  require_rank(x.shape(), 4, "batchnorm2d");
  const std::size_t N = x.dim(0), C = x.dim(1), HW = x.dim(2) * x.dim(3);
  if (gamma.size() != C || beta.size() != C || stats.running_mean.size() != C)
    throw ShapeError("batchnorm2d: per-channel parameters do not match " + std::to_string(C) +
                     " channels");
  const std::size_t M = N * HW;
  const Real* xv = x.values().data();
  const Real* gv = gamma.values().data();
  const Real* bv = beta.values().data();
  std::vector<Real> out(x.size()), xhat(x.size()), inv_std(C);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(C); ++c) {
    double sum = 0.0;
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t i = 0; i < HW; ++i) sum += xv[(n * C + c) * HW + i];
    const double mean = sum / static_cast<double>(M);
    double sq = 0.0;
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t i = 0; i < HW; ++i) {
        const double d = xv[(n * C + c) * HW + i] - mean;
        sq += d * d;
      }
    const double var = sq / static_cast<double>(M);
    const double is = 1.0 / std::sqrt(var + static_cast<double>(stats.eps));
    inv_std[c] = static_cast<Real>(is);
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t i = 0; i < HW; ++i) {
        const std::size_t at = (n * C + c) * HW + i;
        xhat[at] = static_cast<Real>((xv[at] - mean) * is);
        out[at] = gv[c] * xhat[at] + bv[c];
      }
    const double unbiased = M > 1 ? sq / static_cast<double>(M - 1) : var;
    const Real m = stats.momentum;
    stats.running_mean[c] = (Real(1) - m) * stats.running_mean[c] + m * static_cast<Real>(mean);
    stats.running_var[c] = (Real(1) - m) * stats.running_var[c] + m * static_cast<Real>(unbiased);
  }

  auto xn = x.node_ptr(), gn = gamma.node_ptr(), bn = beta.node_ptr();
  return Tensor<Real>::from_op(
      x.shape(), std::move(out), {x, gamma, beta},
      [xn, gn, bn, N, C, HW, M, xhat = std::move(xhat),
       inv_std = std::move(inv_std)](const detail::Node<Real>& self) {
        const Real* dy = self.grad.data();
        auto* dx = grad_sink(xn);
        auto* dg = grad_sink(gn);
        auto* db = grad_sink(bn);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(C); ++c) {
          double sum_dy = 0.0, sum_dy_xhat = 0.0;
          for (std::size_t n = 0; n < N; ++n)
            for (std::size_t i = 0; i < HW; ++i) {
              const std::size_t at = (n * C + c) * HW + i;
              sum_dy += dy[at];
              sum_dy_xhat += static_cast<double>(dy[at]) * xhat[at];
            }
          if (dg) (*dg)[c] += static_cast<Real>(sum_dy_xhat);
          if (db) (*db)[c] += static_cast<Real>(sum_dy);
          if (dx) {
            const double k = static_cast<double>(gn->value[c]) * inv_std[c] / static_cast<double>(M);
            for (std::size_t n = 0; n < N; ++n)
              for (std::size_t i = 0; i < HW; ++i) {
                const std::size_t at = (n * C + c) * HW + i;
                (*dx)[at] += static_cast<Real>(
                    k * (static_cast<double>(M) * dy[at] - sum_dy - xhat[at] * sum_dy_xhat));
              }
          }
        }
      });
}

template <typename Real>
Tensor<Real> batchnorm2d_eval(const Tensor<Real>& x, const Tensor<Real>& gamma,
                              const Tensor<Real>& beta, const BatchNormStats<Real>& stats) {
  require_rank(x.shape(), 4, "batchnorm2d");
  const std::size_t N = x.dim(0), C = x.dim(1), HW = x.dim(2) * x.dim(3);
  if (gamma.size() != C || beta.size() != C || stats.running_mean.size() != C)
    throw ShapeError("batchnorm2d: per-channel parameters do not match " + std::to_string(C) +
                     " channels");
  std::vector<Real> inv_std(C);
  for (std::size_t c = 0; c < C; ++c)
    inv_std[c] = Real(1) / std::sqrt(stats.running_var[c] + stats.eps);
  const Real* xv = x.values().data();
  std::vector<Real> out(x.size());
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t c = 0; c < C; ++c) {
      const Real g = gamma.values()[c] * inv_std[c];
      const Real shift = beta.values()[c] - g * stats.running_mean[c];
      for (std::size_t i = 0; i < HW; ++i) {
        const std::size_t at = (n * C + c) * HW + i;
        out[at] = g * xv[at] + shift;
      }
    }
  auto xn = x.node_ptr(), gn = gamma.node_ptr(), bn = beta.node_ptr();
  std::vector<Real> mean = stats.running_mean;
  return Tensor<Real>::from_op(
      x.shape(), std::move(out), {x, gamma, beta},
      [xn, gn, bn, N, C, HW, inv_std = std::move(inv_std),
       mean = std::move(mean)](const detail::Node<Real>& self) {
        const Real* dy = self.grad.data();
        auto* dx = grad_sink(xn);
        auto* dg = grad_sink(gn);
        auto* db = grad_sink(bn);
        for (std::size_t n = 0; n < N; ++n)
          for (std::size_t c = 0; c < C; ++c)
            for (std::size_t i = 0; i < HW; ++i) {
              const std::size_t at = (n * C + c) * HW + i;
              if (dx) (*dx)[at] += dy[at] * gn->value[c] * inv_std[c];
              if (dg) (*dg)[c] += dy[at] * (xn->value[at] - mean[c]) * inv_std[c];
              if (db) (*db)[c] += dy[at];
            }
      });
}

template <typename Real>
Tensor<Real> relu(const Tensor<Real>& x) {
  std::vector<Real> out(x.size());
  const auto xv = x.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = xv[i] > Real(0) ? xv[i] : Real(0);
  auto xn = x.node_ptr();
  return Tensor<Real>::from_op(x.shape(), std::move(out), {x}, [xn](const detail::Node<Real>& self) {
    auto* dx = grad_sink(xn);
    for (std::size_t i = 0; i < self.value.size(); ++i)
      if (self.value[i] > Real(0)) (*dx)[i] += self.grad[i];
  });
}

template <typename Real>
Tensor<Real> pool2x2(const Tensor<Real>& x, PoolKind kind) {
  require_rank(x.shape(), 4, "pool2x2");
  const std::size_t N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  if (H == 0 || W == 0) throw ShapeError("pool2x2: empty spatial axis");
  const std::size_t Ho = (H + 1) / 2, Wo = (W + 1) / 2;
  const std::size_t planes = N * C;
  std::vector<Real> out(planes * Ho * Wo);
  // For max pooling, the flat input index each output copies.
  std::vector<std::size_t> source(kind == PoolKind::max ? out.size() : 0);
  const Real* xv = x.values().data();

  for (std::size_t p = 0; p < planes; ++p)
    for (std::size_t i = 0; i < Ho; ++i)
      for (std::size_t j = 0; j < Wo; ++j) {
        const std::size_t o = (p * Ho + i) * Wo + j;
        Real acc = Real(0), best = -std::numeric_limits<Real>::infinity();
        std::size_t best_at = 0;
        for (std::size_t a = 0; a < 2; ++a)
          for (std::size_t b = 0; b < 2; ++b) {
            const std::size_t r = std::min(2 * i + a, H - 1), c = std::min(2 * j + b, W - 1);
            const std::size_t at = (p * H + r) * W + c;
            acc += xv[at];
            if (xv[at] > best) {
              best = xv[at];
              best_at = at;
            }
          }
        if (kind == PoolKind::avg) {
          out[o] = acc * Real(0.25);
        } else {
          out[o] = best;
          source[o] = best_at;
        }
      }

  auto xn = x.node_ptr();
  return Tensor<Real>::from_op(
      {N, C, Ho, Wo}, std::move(out), {x},
      [xn, kind, planes, H, W, Ho, Wo, source = std::move(source)](const detail::Node<Real>& self) {
        auto* dx = grad_sink(xn);
        if (kind == PoolKind::max) {
          for (std::size_t o = 0; o < self.grad.size(); ++o) (*dx)[source[o]] += self.grad[o];
          return;
        }
        for (std::size_t p = 0; p < planes; ++p)
          for (std::size_t i = 0; i < Ho; ++i)
            for (std::size_t j = 0; j < Wo; ++j) {
              const Real g = self.grad[(p * Ho + i) * Wo + j] * Real(0.25);
              for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b) {
                  const std::size_t r = std::min(2 * i + a, H - 1), c = std::min(2 * j + b, W - 1);
                  (*dx)[(p * H + r) * W + c] += g;
                }
            }
      });
}

template <typename Real>
Tensor<Real> global_pool_clip(const Tensor<Real>& x) {
  require_rank(x.shape(), 4, "global_pool_clip");
  const std::size_t N = x.dim(0), C = x.dim(1), T = x.dim(2), F = x.dim(3);
  if (T == 0 || F == 0) throw ShapeError("global_pool_clip: empty time or frequency axis");
  std::vector<Real> out(N * C);
  std::vector<std::size_t> argmax(N * C);
  const Real* xv = x.values().data();
  for (std::size_t p = 0; p < N * C; ++p) {
    Real best = -std::numeric_limits<Real>::infinity();
    for (std::size_t t = 0; t < T; ++t) {
      Real sum = Real(0);
      for (std::size_t f = 0; f < F; ++f) sum += xv[(p * T + t) * F + f];
      const Real mean = sum / static_cast<Real>(F);
      if (mean > best) {
        best = mean;
        argmax[p] = t;
      }
    }
    out[p] = best;
  }
  auto xn = x.node_ptr();
  return Tensor<Real>::from_op({N, C}, std::move(out), {x},
                               [xn, T, F, argmax = std::move(argmax)](const detail::Node<Real>& self) {
                                 auto* dx = grad_sink(xn);
                                 for (std::size_t p = 0; p < argmax.size(); ++p) {
                                   const Real g = self.grad[p] / static_cast<Real>(F);
                                   Real* row = dx->data() + (p * T + argmax[p]) * F;
                                   for (std::size_t f = 0; f < F; ++f) row[f] += g;
                                 }
                               });
}

template <typename Real>
Tensor<Real> global_pool_frames(const Tensor<Real>& x) {
  require_rank(x.shape(), 4, "global_pool_frames");
  const std::size_t N = x.dim(0), C = x.dim(1), T = x.dim(2), F = x.dim(3);
  if (F == 0) throw ShapeError("global_pool_frames: empty frequency axis");
  std::vector<Real> out(N * T * C);
  const Real* xv = x.values().data();
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t t = 0; t < T; ++t) {
        Real sum = Real(0);
        for (std::size_t f = 0; f < F; ++f) sum += xv[((n * C + c) * T + t) * F + f];
        out[(n * T + t) * C + c] = sum / static_cast<Real>(F);
      }
  auto xn = x.node_ptr();
  return Tensor<Real>::from_op({N, T, C}, std::move(out), {x},
                               [xn, N, C, T, F](const detail::Node<Real>& self) {
                                 auto* dx = grad_sink(xn);
                                 for (std::size_t n = 0; n < N; ++n)
                                   for (std::size_t c = 0; c < C; ++c)
                                     for (std::size_t t = 0; t < T; ++t) {
                                       const Real g = self.grad[(n * T + t) * C + c] / static_cast<Real>(F);
                                       Real* row = dx->data() + ((n * C + c) * T + t) * F;
                                       for (std::size_t f = 0; f < F; ++f) row[f] += g;
                                     }
                               });
}

template <typename Real>
Tensor<Real> linear(const Tensor<Real>& x, const Tensor<Real>& weight, const Tensor<Real>& bias) {
  require_rank(weight.shape(), 2, "linear weight");
  if (x.rank() == 0) throw ShapeError("linear: input must have at least one axis");
  const std::size_t out_f = weight.dim(0), in_f = weight.dim(1);
  if (x.shape().back() != in_f)
    throw ShapeError("linear: input features " + std::to_string(x.shape().back()) +
                     " != weight columns " + std::to_string(in_f));
  if (bias.size() != out_f) throw ShapeError("linear: bias size mismatch");
  const std::size_t rows = x.size() / in_f;
  const auto R = static_cast<Eigen::Index>(rows), I = static_cast<Eigen::Index>(in_f),
             O = static_cast<Eigen::Index>(out_f);

  std::vector<Real> out(rows * out_f);
  const ConstMatMap<Real> xm(x.values().data(), R, I);
  const ConstMatMap<Real> wm(weight.values().data(), O, I);
  MatMap<Real> ym(out.data(), R, O);
  ym.noalias() = xm * wm.transpose();
  const Eigen::Map<const Eigen::Matrix<Real, 1, Eigen::Dynamic>> bm(bias.values().data(), O);
  ym.rowwise() += bm;

  Shape shape = x.shape();
  shape.back() = out_f;
  auto xn = x.node_ptr(), wn = weight.node_ptr(), bn = bias.node_ptr();
  return Tensor<Real>::from_op(shape, std::move(out), {x, weight, bias},
                               [xn, wn, bn, R, I, O](const detail::Node<Real>& self) {
                                 const ConstMatMap<Real> gm(self.grad.data(), R, O);
                                 if (auto* dx = grad_sink(xn)) {
                                   MatMap<Real> dxm(dx->data(), R, I);
                                   dxm.noalias() += gm * ConstMatMap<Real>(wn->value.data(), O, I);
                                 }
                                 if (auto* dw = grad_sink(wn)) {
                                   MatMap<Real> dwm(dw->data(), O, I);
                                   dwm.noalias() += gm.transpose() * ConstMatMap<Real>(xn->value.data(), R, I);
                                 }
                                 if (auto* db = grad_sink(bn)) {
                                   Eigen::Map<Eigen::Matrix<Real, 1, Eigen::Dynamic>> dbm(db->data(), O);
                                   dbm += gm.colwise().sum();
                                 }
                               });
}

template <typename Real>
Tensor<Real> pad_time_edge(const Tensor<Real>& x, std::size_t frames) {
  require_rank(x.shape(), 4, "pad_time_edge");
  const std::size_t N = x.dim(0), C = x.dim(1), T = x.dim(2), F = x.dim(3);
  if (frames < T) throw ShapeError("pad_time_edge: target shorter than input");
  if (T == 0) throw ShapeError("pad_time_edge: empty time axis");
  if (frames == T) return x;
  std::vector<Real> out(N * C * frames * F);
  const Real* xv = x.values().data();
  for (std::size_t p = 0; p < N * C; ++p)
    for (std::size_t t = 0; t < frames; ++t) {
      const Real* src = xv + (p * T + std::min(t, T - 1)) * F;
      std::copy(src, src + F, out.begin() + static_cast<std::ptrdiff_t>((p * frames + t) * F));
    }
  auto xn = x.node_ptr();
  return Tensor<Real>::from_op({N, C, frames, F}, std::move(out), {x},
                               [xn, N, C, T, F, frames](const detail::Node<Real>& self) {
                                 auto* dx = grad_sink(xn);
                                 for (std::size_t p = 0; p < N * C; ++p)
                                   for (std::size_t t = 0; t < frames; ++t) {
                                     const Real* g = self.grad.data() + (p * frames + t) * F;
                                     Real* d = dx->data() + (p * T + std::min(t, T - 1)) * F;
                                     for (std::size_t f = 0; f < F; ++f) d[f] += g[f];
                                   }
                               });
}

template <typename Real>
Tensor<Real> upsample_time(const Tensor<Real>& x, std::size_t factor) {
  require_rank(x.shape(), 3, "upsample_time");
  if (factor == 0) throw ShapeError("upsample_time: factor must be positive");
  const std::size_t N = x.dim(0), T = x.dim(1), K = x.dim(2), To = T * factor;
  std::vector<Real> out(N * To * K);
  const Real* xv = x.values().data();
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t t = 0; t < To; ++t) {
      const Real* src = xv + (n * T + t / factor) * K;
      std::copy(src, src + K, out.begin() + static_cast<std::ptrdiff_t>((n * To + t) * K));
    }
  auto xn = x.node_ptr();
  return Tensor<Real>::from_op({N, To, K}, std::move(out), {x},
                               [xn, N, T, K, factor, To](const detail::Node<Real>& self) {
                                 auto* dx = grad_sink(xn);
                                 for (std::size_t n = 0; n < N; ++n)
                                   for (std::size_t t = 0; t < To; ++t)
                                     for (std::size_t k = 0; k < K; ++k)
                                       (*dx)[(n * T + t / factor) * K + k] += self.grad[(n * To + t) * K + k];
                               });
}

template <typename Real>
Tensor<Real> crop_time(const Tensor<Real>& x, std::size_t frames) {
  require_rank(x.shape(), 3, "crop_time");
  const std::size_t N = x.dim(0), T = x.dim(1), K = x.dim(2);
  if (frames > T) throw ShapeError("crop_time: target longer than input");
  if (frames == T) return x;
  std::vector<Real> out(N * frames * K);
  const Real* xv = x.values().data();
  for (std::size_t n = 0; n < N; ++n)
    std::copy(xv + n * T * K, xv + n * T * K + frames * K,
              out.begin() + static_cast<std::ptrdiff_t>(n * frames * K));
  auto xn = x.node_ptr();
  return Tensor<Real>::from_op({N, frames, K}, std::move(out), {x},
                               [xn, N, T, K, frames](const detail::Node<Real>& self) {
                                 auto* dx = grad_sink(xn);
                                 for (std::size_t n = 0; n < N; ++n)
                                   for (std::size_t i = 0; i < frames * K; ++i)
                                     (*dx)[n * T * K + i] += self.grad[n * frames * K + i];
                               });
}

template <typename Real>
Tensor<Real> max_over_time(const Tensor<Real>& x) {
  require_rank(x.shape(), 3, "max_over_time");
  const std::size_t N = x.dim(0), T = x.dim(1), K = x.dim(2);
  if (T == 0) throw ShapeError("max_over_time: empty time axis");
  std::vector<Real> out(N * K);
  std::vector<std::size_t> source(N * K);
  const Real* xv = x.values().data();
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t k = 0; k < K; ++k) {
      std::size_t best = n * T * K + k;
      for (std::size_t t = 1; t < T; ++t) {
        const std::size_t at = (n * T + t) * K + k;
        if (xv[at] > xv[best]) best = at;
      }
      out[n * K + k] = xv[best];
      source[n * K + k] = best;
    }
  auto xn = x.node_ptr();
  return Tensor<Real>::from_op({N, K}, std::move(out), {x},
                               [xn, source = std::move(source)](const detail::Node<Real>& self) {
                                 auto* dx = grad_sink(xn);
                                 for (std::size_t i = 0; i < source.size(); ++i) (*dx)[source[i]] += self.grad[i];
                               });
}

template <typename Real>
Tensor<Real> add(const Tensor<Real>& a, const Tensor<Real>& b) {
  if (a.shape() != b.shape())
    throw ShapeError("add: shapes " + to_string(a.shape()) + " and " + to_string(b.shape()));
  std::vector<Real> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] + b.values()[i];
  auto an = a.node_ptr(), bn = b.node_ptr();
  return Tensor<Real>::from_op(a.shape(), std::move(out), {a, b}, [an, bn](const detail::Node<Real>& self) {
    for (auto* sink : {grad_sink(an), grad_sink(bn)})
      if (sink)
        for (std::size_t i = 0; i < self.grad.size(); ++i) (*sink)[i] += self.grad[i];
  });
}

template <typename Real>
Tensor<Real> scale(const Tensor<Real>& a, Real factor) {
  std::vector<Real> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] * factor;
  auto an = a.node_ptr();
  return Tensor<Real>::from_op(a.shape(), std::move(out), {a}, [an, factor](const detail::Node<Real>& self) {
    auto* da = grad_sink(an);
    for (std::size_t i = 0; i < self.grad.size(); ++i) (*da)[i] += self.grad[i] * factor;
  });
}

template <typename Real>
std::vector<Real> softmax(const Tensor<Real>& logits) {
  if (logits.rank() == 0) throw ShapeError("softmax: needs at least one axis");
  const std::size_t K = logits.shape().back(), rows = K == 0 ? 0 : logits.size() / K;
  std::vector<Real> p(logits.size());
  const auto z = logits.values();
  for (std::size_t r = 0; r < rows; ++r) {
    const Real m = *std::max_element(z.begin() + static_cast<std::ptrdiff_t>(r * K),
                                     z.begin() + static_cast<std::ptrdiff_t>((r + 1) * K));
    Real sum = Real(0);
    for (std::size_t k = 0; k < K; ++k) sum += (p[r * K + k] = std::exp(z[r * K + k] - m));
    for (std::size_t k = 0; k < K; ++k) p[r * K + k] /= sum;
  }
  return p;
}

template <typename Real>
std::vector<Real> sigmoid(const Tensor<Real>& logits) {
  std::vector<Real> p(logits.size());
  const auto z = logits.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (z[i] >= Real(0)) {
      p[i] = Real(1) / (Real(1) + std::exp(-z[i]));
    } else {
      const Real e = std::exp(z[i]);
      p[i] = e / (Real(1) + e);
    }
  }
  return p;
}

#define LISTEN_INSTANTIATE_OPS(Real)                                                              \
  template Tensor<Real> conv2d(const Tensor<Real>&, const Tensor<Real>&);                         \
  template Tensor<Real> batchnorm2d(const Tensor<Real>&, const Tensor<Real>&, const Tensor<Real>&, \
                                    BatchNormStats<Real>&, Mode);                                 \
  template Tensor<Real> batchnorm2d_eval(const Tensor<Real>&, const Tensor<Real>&,                \
                                         const Tensor<Real>&, const BatchNormStats<Real>&);       \
  template Tensor<Real> relu(const Tensor<Real>&);                                                \
  template Tensor<Real> pool2x2(const Tensor<Real>&, PoolKind);                                   \
  template Tensor<Real> global_pool_clip(const Tensor<Real>&);                                    \
  template Tensor<Real> global_pool_frames(const Tensor<Real>&);                                  \
  template Tensor<Real> linear(const Tensor<Real>&, const Tensor<Real>&, const Tensor<Real>&);    \
  template Tensor<Real> pad_time_edge(const Tensor<Real>&, std::size_t);                          \
  template Tensor<Real> upsample_time(const Tensor<Real>&, std::size_t);                          \
  template Tensor<Real> crop_time(const Tensor<Real>&, std::size_t);                              \
  template Tensor<Real> max_over_time(const Tensor<Real>&);                                       \
  template Tensor<Real> add(const Tensor<Real>&, const Tensor<Real>&);                            \
  template Tensor<Real> scale(const Tensor<Real>&, Real);                                         \
  template std::vector<Real> softmax(const Tensor<Real>&);                                        \
  template std::vector<Real> sigmoid(const Tensor<Real>&);

LISTEN_INSTANTIATE_OPS(float)
LISTEN_INSTANTIATE_OPS(double)
#undef LISTEN_INSTANTIATE_OPS

}  // namespace listen::nn
