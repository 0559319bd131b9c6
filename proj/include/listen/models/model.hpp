// include/listen/models/model.hpp

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

#ifndef LISTEN_MODELS_MODEL_HPP_
#define LISTEN_MODELS_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "listen/nn/adam.hpp"
#include "listen/nn/checkpoint.hpp"
#include "listen/nn/ops.hpp"
#include "listen/nn/tensor.hpp"

namespace listen::models {

using nn::Mode;
using nn::PoolKind;

// cnn5: 4 blocks of one 5x5 conv. cnn9: 4 blocks of two 3x3 convs.
// cnn13: 6 blocks of two 3x3 convs. Every conv is followed by batch norm
// and ReLU, every block by 2x2 pooling.
enum class Arch { cnn5, cnn9, cnn13 };
enum class Head { clip_softmax, clip_sigmoid, frame_sigmoid, seld };
enum class ParamScope { trunk, all };

Arch parse_arch(const std::string& text);
Head parse_head(const std::string& text);
PoolKind parse_pool(const std::string& text);
std::string to_string(Arch arch);
std::string to_string(Head head);
std::string to_string(PoolKind pool);

bool is_clip_head(Head head);

struct ModelSpec {
  Arch arch = Arch::cnn9;
  PoolKind pool = PoolKind::avg;
  std::size_t in_channels = 1;
  std::size_t n_classes = 10;
  Head head = Head::clip_softmax;
  // Channels of the first block; each later block doubles it. 64 is the
  // published configuration; smaller values give fast test-sized models.
  std::size_t base_width = 64;
};

struct ConvStage {
  std::size_t in_channels;
  std::size_t out_channels;
  std::size_t kernel;
};

// Convolutions of each block, in order.
std::vector<std::vector<ConvStage>> trunk_plan(const ModelSpec& spec);

// Conv weights plus batch-norm gamma and beta, from the plan alone.
std::size_t count_trunk_parameters(const ModelSpec& spec);

template <typename Real>
struct FrameOutput {
  nn::Tensor<Real> sed;                     // (N, T, K) logits
  std::optional<nn::Tensor<Real>> azimuth;  // (N, T, K), normalised units
  std::optional<nn::Tensor<Real>> elevation;
};

template <typename Real>
class Model {
 public:
  // Glorot-uniform conv and linear weights from `seed`; gamma 1, beta 0,
  // zero head biases, running statistics (0, 1).
  static Model build(const ModelSpec& spec, std::uint64_t seed = 0);

  const ModelSpec& spec() const { return spec_; }
  std::size_t pooling_stages() const { return blocks_.size(); }
  std::size_t downsample_factor_time() const { return std::size_t{1} << blocks_.size(); }

  // x is (N, in_channels, frames, mels). Returns (N, K) logits. Requires a
  // clip head.
  nn::Tensor<Real> forward_clip(const nn::Tensor<Real>& x, Mode mode);

  // Frame-level logits at the input frame rate. Requires a frame or seld
  // head. Frame counts that are not a multiple of downsample_factor_time()
  // are padded by repeating the last frame and cropped after upsampling.
  FrameOutput<Real> forward_frames(const nn::Tensor<Real>& x, Mode mode);

  // Trunk features (N, C, T', F') of the padded input.
  nn::Tensor<Real> forward_trunk(const nn::Tensor<Real>& x, Mode mode);

  std::vector<nn::Parameter<Real>*> parameters();
  std::size_t count_parameters(ParamScope scope) const;
  void zero_grad();

  // Parameters and batch-norm running statistics, by name.
  std::vector<nn::NamedArray> state() const;
  // Inverse of state(); every entry of this model must be present with a
  // matching shape, extra entries are ignored.
  void load_state(std::span<const nn::NamedArray> entries);

 private:
  struct ConvUnit {
    nn::Parameter<Real> weight;
    nn::Parameter<Real> gamma;
    nn::Parameter<Real> beta;
    nn::BatchNormStats<Real> stats;
  };
  struct Linear {
    nn::Parameter<Real> weight;
    nn::Parameter<Real> bias;
  };

  ModelSpec spec_;
  std::vector<std::vector<ConvUnit>> blocks_;
  Linear classifier_;
  std::optional<Linear> azimuth_;
  std::optional<Linear> elevation_;
};

extern template class Model<float>;
extern template class Model<double>;

}  // namespace listen::models

#endif  // LISTEN_MODELS_MODEL_HPP_
