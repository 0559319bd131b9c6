// src/app/train.cpp

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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "listen/io/segment.hpp"
#include "listen/models/model.hpp"
#include "listen/nn/losses.hpp"
#include "pipeline.hpp"

namespace listen::app {
namespace {

using T = nn::Tensor<float>;

struct Item {
  std::vector<float> x;  // (C, frames, mels)
  std::vector<float> weak;
  bool strong = false;
  std::vector<float> activity;  // (frames, K)
  std::vector<float> azimuth;   // normalised
  std::vector<float> elevation;
};

struct Batch {
  T x, weak, weak_mask, activity, frame_mask, azimuth, elevation;
  bool any_weak = false, any_strong = false;
};

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::min(n - 1, static_cast<std::size_t>(u * static_cast<double>(n)));
}

void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[pick(rng, i)]);
}

Batch assemble(const std::vector<Item>& items, const std::vector<std::size_t>& idx, std::size_t C,
               std::size_t frames, std::size_t mels, std::size_t K) {
  const std::size_t N = idx.size();
  std::vector<float> x, weak, weak_mask, act, frame_mask, azi, ele;
  Batch b;
  for (std::size_t i : idx) {
    const Item& it = items[i];
    x.insert(x.end(), it.x.begin(), it.x.end());
    weak.insert(weak.end(), it.weak.begin(), it.weak.end());
    weak_mask.insert(weak_mask.end(), K, it.strong ? 0.0f : 1.0f);
    frame_mask.insert(frame_mask.end(), frames * K, it.strong ? 1.0f : 0.0f);
    if (it.strong) {
      act.insert(act.end(), it.activity.begin(), it.activity.end());
      b.any_strong = true;
    } else {
      act.insert(act.end(), frames * K, 0.0f);
      b.any_weak = true;
    }
    if (it.azimuth.empty()) {
      azi.insert(azi.end(), frames * K, 0.0f);
      ele.insert(ele.end(), frames * K, 0.0f);
    } else {
      azi.insert(azi.end(), it.azimuth.begin(), it.azimuth.end());
      ele.insert(ele.end(), it.elevation.begin(), it.elevation.end());
    }
  }
  b.x = T({N, C, frames, mels}, std::move(x));
  b.weak = T({N, K}, std::move(weak));
  b.weak_mask = T({N, K}, std::move(weak_mask));
  b.activity = T({N, frames, K}, std::move(act));
  b.frame_mask = T({N, frames, K}, std::move(frame_mask));
  b.azimuth = T({N, frames, K}, std::move(azi));
  b.elevation = T({N, frames, K}, std::move(ele));
  return b;
}

// Fraction of rows whose arg-max logit is a target class.
double batch_accuracy(const T& logits, const std::vector<Item>& items, const std::vector<std::size_t>& idx,
                      std::size_t K) {
  const auto v = logits.values();
  std::size_t correct = 0;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const auto row = v.subspan(r * K, K);
    const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    correct += items[idx[r]].weak[best] > 0.5f;
  }
  return static_cast<double>(correct) / static_cast<double>(idx.size());
}

T task_loss(TaskKind task, models::Model<float>& model, const Batch& b, float lambda) {
  switch (task) {
    case TaskKind::clip_class: return nn::loss_ce(model.forward_clip(b.x, nn::Mode::train), b.weak);
    case TaskKind::clip_tag: return nn::loss_bce(model.forward_clip(b.x, nn::Mode::train), b.weak);
    case TaskKind::frame_sed: {
      const auto out = model.forward_frames(b.x, nn::Mode::train);
      std::optional<T> loss;
      if (b.any_strong) loss = nn::loss_bce(out.sed, b.activity, std::optional<T>(b.frame_mask));
      if (b.any_weak) {
        T clip = nn::loss_bce(nn::max_over_time(out.sed), b.weak, std::optional<T>(b.weak_mask));
        loss = loss ? nn::add(*loss, clip) : clip;
      }
      return *loss;
    }
    case TaskKind::seld: {
      const auto out = model.forward_frames(b.x, nn::Mode::train);
      return nn::loss_seld(out.sed, *out.azimuth, *out.elevation,
                           nn::SeldTargets<float>{b.activity, b.azimuth, b.elevation}, lambda);
    }
  }
  throw ContractViolation("unhandled task");
}

}  // namespace

TrainSummary cmd_train(const ExperimentConfig& config, const Dataset& dataset,
                       const fs::path& features_dir, const fs::path& checkpoint,
                       const std::optional<fs::path>& log) {
  config.validate();
  const LoadedDataset data = load_dataset(dataset);
  const FeatureStats stats = read_stats(features_dir / kStatsFile);
  const std::size_t K = data.vocab.size();
  const std::size_t C = config.model.in_channels;
  const std::size_t mels = stats.mean.size();

  struct Loaded {
    features::LogMelSpectrogram feats;
    io::LabelBundle labels;
  };
  std::vector<Loaded> clips;
  for (const io::ClipRecord& clip : data.clips) {
    if (clip.split != io::Split::train) continue;
    auto feats = detail::load_standardized(features_dir, clip.clip_id, stats, C);
    auto labels = detail::labels_at(clip, feats.frames, K);
    if (config.task == TaskKind::seld && labels.kind != io::LabelKind::seld)
      throw ConfigError("task seld needs direction labels, clip " + clip.clip_id + " has none");
    if (config.task == TaskKind::clip_class) {
      const auto tags = detail::clip_tags(labels);
      if (std::count(tags.begin(), tags.end(), 1) != 1)
        throw ConfigError("task clip_class needs exactly one label per clip, clip " + clip.clip_id +
                          " does not have one");
    }
    clips.push_back({std::move(feats), std::move(labels)});
  }
  if (clips.empty()) throw DataError("the manifest has no training clips");

  std::size_t seg = 0;
  for (const Loaded& c : clips) seg = std::max(seg, c.feats.frames);
  if (config.segment_seconds > 0.0)
    seg = static_cast<std::size_t>(std::llround(config.segment_seconds * io::kLabelFrameRate));
  std::size_t hop = seg;
  if (config.hop_seconds > 0.0)
    hop = static_cast<std::size_t>(std::llround(config.hop_seconds * io::kLabelFrameRate));
  if (seg == 0 || hop == 0) throw ConfigError("segment and hop must cover at least one frame");

  std::vector<Item> items;
  for (const Loaded& c : clips) {
    const std::size_t F = c.feats.frames;
    const bool frame_labels = c.labels.kind != io::LabelKind::weak;
    for (const io::SegmentWindow& w : io::plan_segments(F, seg, hop, config.pad)) {
      Item it;
      for (std::size_t ch = 0; ch < C; ++ch) {
        const auto begin = c.feats.data.begin() + static_cast<std::ptrdiff_t>(ch * F * mels);
        const std::vector<float> plane(begin, begin + static_cast<std::ptrdiff_t>(F * mels));
        const auto cut = io::cut_rows(plane, mels, w, config.pad);
        it.x.insert(it.x.end(), cut.begin(), cut.end());
      }
      if (frame_labels) {
        io::FrameMatrix<std::uint8_t> act(seg, K);
        act.data = io::cut_rows(c.labels.strong.data, K, w, config.pad);
        it.strong = true;
        it.activity.assign(act.data.begin(), act.data.end());
        const auto tags = io::weak_from_strong(act);
        it.weak.assign(tags.begin(), tags.end());
        if (c.labels.kind == io::LabelKind::seld) {
          for (float a : io::cut_rows(c.labels.azimuth_deg.data, K, w, config.pad)) it.azimuth.push_back(a / 180.0f);
          for (float e : io::cut_rows(c.labels.elevation_deg.data, K, w, config.pad))
            it.elevation.push_back(e / 90.0f);
        }
      } else {
        it.weak.assign(c.labels.weak.begin(), c.labels.weak.end());
      }
      items.push_back(std::move(it));
    }
  }
  if (items.empty()) throw DataError("no training segments (clips shorter than one segment?)");

  models::ModelSpec spec = config.model;
  spec.n_classes = K;
  spec.head = head_for(config.task);
  auto model = models::Model<float>::build(spec, config.seed);
  auto params = model.parameters();
  auto adam = nn::make_adam_state<float>(params, nn::AdamConfig{config.lr});

  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle(order, rng);
  std::size_t cursor = 0;
  const std::size_t B = std::min(config.batch_size, items.size());

  std::optional<std::ofstream> log_out;
  if (log) {
    log_out.emplace(*log, std::ios::trunc);
    if (!*log_out) throw DataError("cannot write " + log->string());
    *log_out << "step,loss\n";
  }

  TrainSummary summary;
  for (std::size_t step = 1; step <= config.steps; ++step) {
    std::vector<std::size_t> idx;
    while (idx.size() < B) {
      if (cursor == order.size()) {
        shuffle(order, rng);
        cursor = 0;
      }
      idx.push_back(order[cursor++]);
    }
    const Batch batch = assemble(items, idx, C, seg, mels, K);
    model.zero_grad();
    T loss;
    if (config.task == TaskKind::clip_class) {
      const T logits = model.forward_clip(batch.x, nn::Mode::train);
      summary.train_accuracy = batch_accuracy(logits, items, idx, K);
      loss = nn::loss_ce(logits, batch.weak);
    } else {
      loss = task_loss(config.task, model, batch, static_cast<float>(config.lambda));
    }
    const double value = loss.item();
    if (!std::isfinite(value)) throw NumericError("loss became " + detail::num(value) + " at step " +
                                                  std::to_string(step));
    loss.backward();
    adam.config.lr = learning_rate(config, step);
    nn::adam_step<float>(params, adam);
    summary.losses.push_back(value);
    if (log_out) *log_out << step << ',' << detail::num(value) << '\n';
    if (config.target_loss > 0.0 && value < config.target_loss) break;
  }

  // Fit on the training items with running statistics.
  std::size_t correct = 0, active = 0;
  double angle_err = 0.0;
  for (std::size_t start = 0; start < items.size(); start += B) {
    std::vector<std::size_t> idx;
    for (std::size_t i = start; i < std::min(items.size(), start + B); ++i) idx.push_back(i);
    const Batch batch = assemble(items, idx, C, seg, mels, K);
    if (config.task == TaskKind::clip_class) {
      correct += static_cast<std::size_t>(
          std::lround(batch_accuracy(model.forward_clip(batch.x, nn::Mode::eval), items, idx, K) *
                      static_cast<double>(idx.size())));
    } else if (config.task == TaskKind::seld) {
      const auto out = model.forward_frames(batch.x, nn::Mode::eval);
      const auto act = batch.activity.values();
      for (std::size_t j = 0; j < act.size(); ++j) {
        if (act[j] < 0.5f) continue;
        angle_err += std::abs(out.azimuth->values()[j] - batch.azimuth.values()[j]) +
                     std::abs(out.elevation->values()[j] - batch.elevation.values()[j]);
        active += 2;
      }
    }
  }
  if (config.task == TaskKind::clip_class)
    summary.eval_accuracy = static_cast<double>(correct) / static_cast<double>(items.size());
  if (config.task == TaskKind::seld && active > 0) summary.train_angle_mae = angle_err / static_cast<double>(active);

  std::vector<nn::NamedArray> entries = model.state();
  for (std::size_t p = 0; p < params.size(); ++p) {
    const auto& shape = params[p]->tensor.shape();
    entries.push_back({"adam.m/" + params[p]->name, shape, {adam.m[p].begin(), adam.m[p].end()}});
    entries.push_back({"adam.v/" + params[p]->name, shape, {adam.v[p].begin(), adam.v[p].end()}});
  }
  entries.push_back({"adam.step", {1}, {static_cast<float>(adam.step)}});
  if (checkpoint.has_parent_path()) fs::create_directories(checkpoint.parent_path());
  nn::write_checkpoint(checkpoint, entries);
  return summary;
}

}  // namespace listen::app
