// src/models/model.cpp

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

#include "listen/models/model.hpp"

#include <cmath>
#include <map>
#include <random>

#include "listen/errors.hpp"

namespace listen::models {
namespace {

std::size_t block_count(Arch arch) { return arch == Arch::cnn13 ? 6 : 4; }

template <typename Real>
nn::Tensor<Real> glorot_uniform(nn::Shape shape, std::size_t fan_in, std::size_t fan_out,
                                std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  std::vector<Real> v(nn::numel(shape));
  for (Real& x : v) x = static_cast<Real>(dist(rng));
  return nn::Tensor<Real>(std::move(shape), std::move(v), true);
}

}  // namespace

Arch parse_arch(const std::string& text) {
  if (text == "cnn5") return Arch::cnn5;
  if (text == "cnn9") return Arch::cnn9;
  if (text == "cnn13") return Arch::cnn13;
  throw ConfigError("unknown architecture '" + text + "' (expected cnn5, cnn9 or cnn13)");
}

Head parse_head(const std::string& text) {
  if (text == "clip_softmax") return Head::clip_softmax;
  if (text == "clip_sigmoid") return Head::clip_sigmoid;
  if (text == "frame_sigmoid") return Head::frame_sigmoid;
  if (text == "seld") return Head::seld;
  throw ConfigError("unknown head '" + text + "'");
}

PoolKind parse_pool(const std::string& text) {
  if (text == "avg") return PoolKind::avg;
  if (text == "max") return PoolKind::max;
  throw ConfigError("unknown pooling '" + text + "' (expected avg or max)");
}

std::string to_string(Arch arch) {
  switch (arch) {
    case Arch::cnn5: return "cnn5";
    case Arch::cnn9: return "cnn9";
    case Arch::cnn13: return "cnn13";
  }
  return "?";
}

std::string to_string(Head head) {
  switch (head) {
    case Head::clip_softmax: return "clip_softmax";
    case Head::clip_sigmoid: return "clip_sigmoid";
    case Head::frame_sigmoid: return "frame_sigmoid";
    case Head::seld: return "seld";
  }
  return "?";
}

std::string to_string(PoolKind pool) { return pool == PoolKind::avg ? "avg" : "max"; }

bool is_clip_head(Head head) { return head == Head::clip_softmax || head == Head::clip_sigmoid; }

std::vector<std::vector<ConvStage>> trunk_plan(const ModelSpec& spec) {
  if (spec.in_channels == 0) throw ConfigError("model needs at least one input channel");
  if (spec.base_width == 0) throw ConfigError("model base width must be positive");
  if (spec.n_classes == 0) throw ConfigError("model needs at least one class");
  const std::size_t convs_per_block = spec.arch == Arch::cnn5 ? 1 : 2;
  const std::size_t kernel = spec.arch == Arch::cnn5 ? 5 : 3;
  std::vector<std::vector<ConvStage>> plan;
  std::size_t in = spec.in_channels;
  for (std::size_t b = 0; b < block_count(spec.arch); ++b) {
    const std::size_t out = spec.base_width << b;
    std::vector<ConvStage> block;
    for (std::size_t u = 0; u < convs_per_block; ++u) {
      block.push_back({in, out, kernel});
      in = out;
    }
    plan.push_back(std::move(block));
  }
  return plan;
}

std::size_t count_trunk_parameters(const ModelSpec& spec) {
  std::size_t total = 0;
  for (const auto& block : trunk_plan(spec))
    for (const ConvStage& c : block)
      total += c.in_channels * c.out_channels * c.kernel * c.kernel + 2 * c.out_channels;
  return total;
}

template <typename Real>
Model<Real> Model<Real>::build(const ModelSpec& spec, std::uint64_t seed) {
  Model m;
  m.spec_ = spec;
  std::mt19937_64 rng(seed);
  const auto plan = trunk_plan(spec);
  std::size_t width = spec.in_channels;
  for (std::size_t b = 0; b < plan.size(); ++b) {
    std::vector<ConvUnit> units;
    for (std::size_t u = 0; u < plan[b].size(); ++u) {
      const ConvStage& c = plan[b][u];
      const std::string prefix = "block" + std::to_string(b + 1);
      const std::string idx = std::to_string(u + 1);
      const std::size_t kk = c.kernel * c.kernel;
      units.push_back(ConvUnit{
          {prefix + ".conv" + idx + ".weight",
           glorot_uniform<Real>({c.out_channels, c.in_channels, c.kernel, c.kernel}, c.in_channels * kk,
                                c.out_channels * kk, rng)},
          {prefix + ".bn" + idx + ".gamma", nn::Tensor<Real>::full({c.out_channels}, Real(1), true)},
          {prefix + ".bn" + idx + ".beta", nn::Tensor<Real>::zeros({c.out_channels}, true)},
          nn::BatchNormStats<Real>(c.out_channels)});
      width = c.out_channels;
    }
    m.blocks_.push_back(std::move(units));
  }

  const std::size_t K = spec.n_classes;
  auto make_linear = [&](const std::string& name) {
    return Linear{{"head." + name + ".weight", glorot_uniform<Real>({K, width}, width, K, rng)},
                  {"head." + name + ".bias", nn::Tensor<Real>::zeros({K}, true)}};
  };
  m.classifier_ = make_linear("fc");
  if (spec.head == Head::seld) {
    m.azimuth_ = make_linear("azimuth");
    m.elevation_ = make_linear("elevation");
  }
  return m;
}

template <typename Real>
nn::Tensor<Real> Model<Real>::forward_trunk(const nn::Tensor<Real>& x, Mode mode) {
  if (x.rank() != 4 || x.dim(1) != spec_.in_channels)
    throw ShapeError("model input must be (N, " + std::to_string(spec_.in_channels) +
                     ", frames, mels), got " + nn::to_string(x.shape()));
  if (x.dim(0) == 0 || x.dim(2) == 0 || x.dim(3) == 0) throw ShapeError("model input is empty");
  const std::size_t factor = downsample_factor_time();
  const std::size_t padded = (x.dim(2) + factor - 1) / factor * factor;
  nn::Tensor<Real> h = nn::pad_time_edge(x, padded);
  for (auto& block : blocks_) {
    for (ConvUnit& u : block) {
      h = nn::conv2d(h, u.weight.tensor);
      h = mode == Mode::train
              ? nn::batchnorm2d(h, u.gamma.tensor, u.beta.tensor, u.stats, Mode::train)
              : nn::batchnorm2d_eval(h, u.gamma.tensor, u.beta.tensor, u.stats);
      h = nn::relu(h);
    }
    h = nn::pool2x2(h, spec_.pool);
  }
  return h;
}

template <typename Real>
nn::Tensor<Real> Model<Real>::forward_clip(const nn::Tensor<Real>& x, Mode mode) {
  if (!is_clip_head(spec_.head))
    throw ContractViolation("forward_clip on a model with head " + to_string(spec_.head));
  const nn::Tensor<Real> pooled = nn::global_pool_clip(forward_trunk(x, mode));
  return nn::linear(pooled, classifier_.weight.tensor, classifier_.bias.tensor);
}

template <typename Real>
FrameOutput<Real> Model<Real>::forward_frames(const nn::Tensor<Real>& x, Mode mode) {
  if (is_clip_head(spec_.head))
    throw ContractViolation("forward_frames on a model with head " + to_string(spec_.head));
  const std::size_t frames = x.rank() == 4 ? x.dim(2) : 0;
  const nn::Tensor<Real> pooled = nn::global_pool_frames(forward_trunk(x, mode));
  const std::size_t factor = downsample_factor_time();
  auto project = [&](const Linear& l) {
    return nn::crop_time(nn::upsample_time(nn::linear(pooled, l.weight.tensor, l.bias.tensor), factor),
                         frames);
  };
  FrameOutput<Real> out{project(classifier_), std::nullopt, std::nullopt};
  if (azimuth_) out.azimuth = project(*azimuth_);
  if (elevation_) out.elevation = project(*elevation_);
  return out;
}

template <typename Real>
std::vector<nn::Parameter<Real>*> Model<Real>::parameters() {
  std::vector<nn::Parameter<Real>*> out;
  for (auto& block : blocks_)
    for (ConvUnit& u : block) {
      out.push_back(&u.weight);
      out.push_back(&u.gamma);
      out.push_back(&u.beta);
    }
  for (Linear* l : {&classifier_, azimuth_ ? &*azimuth_ : nullptr, elevation_ ? &*elevation_ : nullptr})
    if (l) {
      out.push_back(&l->weight);
      out.push_back(&l->bias);
    }
  return out;
}

template <typename Real>
std::size_t Model<Real>::count_parameters(ParamScope scope) const {
  std::size_t total = 0;
  for (const auto& block : blocks_)
    for (const ConvUnit& u : block) total += u.weight.tensor.size() + u.gamma.tensor.size() + u.beta.tensor.size();
  if (scope == ParamScope::all) {
    for (const Linear* l : {&classifier_, azimuth_ ? &*azimuth_ : nullptr, elevation_ ? &*elevation_ : nullptr})
      if (l) total += l->weight.tensor.size() + l->bias.tensor.size();
  }
  return total;
}

template <typename Real>
void Model<Real>::zero_grad() {
  for (nn::Parameter<Real>* p : parameters()) p->tensor.zero_grad();
}

template <typename Real>
std::vector<nn::NamedArray> Model<Real>::state() const {
  std::vector<nn::NamedArray> out;
  auto tensor_entry = [&](const nn::Parameter<Real>& p) {
    out.push_back({p.name, p.tensor.shape(), {p.tensor.values().begin(), p.tensor.values().end()}});
  };
  for (const auto& block : blocks_)
    for (const ConvUnit& u : block) {
      tensor_entry(u.weight);
      tensor_entry(u.gamma);
      tensor_entry(u.beta);
      const std::string bn = u.gamma.name.substr(0, u.gamma.name.size() - std::string(".gamma").size());
      out.push_back({bn + ".running_mean", {u.stats.running_mean.size()},
                     {u.stats.running_mean.begin(), u.stats.running_mean.end()}});
      out.push_back({bn + ".running_var", {u.stats.running_var.size()},
                     {u.stats.running_var.begin(), u.stats.running_var.end()}});
    }
  for (const Linear* l : {&classifier_, azimuth_ ? &*azimuth_ : nullptr, elevation_ ? &*elevation_ : nullptr})
    if (l) {
      tensor_entry(l->weight);
      tensor_entry(l->bias);
    }
  return out;
}

template <typename Real>
void Model<Real>::load_state(std::span<const nn::NamedArray> entries) {
  std::map<std::string, const nn::NamedArray*> by_name;
  for (const nn::NamedArray& e : entries) by_name[e.name] = &e;
  auto fetch = [&](const std::string& name, const nn::Shape& shape) -> const nn::NamedArray& {
    const auto it = by_name.find(name);
    if (it == by_name.end()) throw DataError("checkpoint is missing " + name);
    if (it->second->shape != shape)
      throw DataError("checkpoint entry " + name + " has shape " + nn::to_string(it->second->shape) +
                      ", model expects " + nn::to_string(shape));
    return *it->second;
  };
  auto load_tensor = [&](nn::Parameter<Real>& p) {
    const auto& e = fetch(p.name, p.tensor.shape());
    std::copy(e.values.begin(), e.values.end(), p.tensor.mutable_values().begin());
  };
  auto load_vector = [&](const std::string& name, std::vector<Real>& v) {
    const auto& e = fetch(name, {v.size()});
    std::copy(e.values.begin(), e.values.end(), v.begin());
  };
  for (auto& block : blocks_)
    for (ConvUnit& u : block) {
      load_tensor(u.weight);
      load_tensor(u.gamma);
      load_tensor(u.beta);
      const std::string bn = u.gamma.name.substr(0, u.gamma.name.size() - std::string(".gamma").size());
      load_vector(bn + ".running_mean", u.stats.running_mean);
      load_vector(bn + ".running_var", u.stats.running_var);
    }
  for (Linear* l : {&classifier_, azimuth_ ? &*azimuth_ : nullptr, elevation_ ? &*elevation_ : nullptr})
    if (l) {
      load_tensor(l->weight);
      load_tensor(l->bias);
    }
}

template class Model<float>;
template class Model<double>;

}  // namespace listen::models
