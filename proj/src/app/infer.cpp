// src/app/infer.cpp

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

#include <fstream>

#include "listen/models/model.hpp"
#include "listen/nn/checkpoint.hpp"
#include "pipeline.hpp"

namespace listen::app {

void cmd_infer(const ExperimentConfig& config, const fs::path& checkpoint, const Dataset& dataset,
               const fs::path& features_dir, const fs::path& out_dir) {
  config.validate();
  const LoadedDataset data = load_dataset(dataset);
  const FeatureStats stats = read_stats(features_dir / kStatsFile);
  const std::size_t K = data.vocab.size();
  const std::size_t C = config.model.in_channels;

  models::ModelSpec spec = config.model;
  spec.n_classes = K;
  spec.head = head_for(config.task);
  auto model = models::Model<float>::build(spec, config.seed);
  const auto entries = nn::read_checkpoint(checkpoint);
  model.load_state(entries);

  fs::create_directories(out_dir);
  const auto& names = data.vocab.names();

  if (models::is_clip_head(spec.head)) {
    std::ofstream out(out_dir / "scores.csv", std::ios::trunc);
    out << "clip_id";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    for (const io::ClipRecord& clip : data.clips) {
      const auto f = detail::load_standardized(features_dir, clip.clip_id, stats, C);
      const nn::Tensor<float> x({1, C, f.frames, f.mels}, f.data);
      const auto logits = model.forward_clip(x, nn::Mode::eval);
      const auto p = config.task == TaskKind::clip_class ? nn::softmax(logits) : nn::sigmoid(logits);
      out << clip.clip_id;
      for (float v : p) out << ',' << detail::num(v);
      out << '\n';
    }
    return;
  }

  const bool seld = config.task == TaskKind::seld;
  std::ofstream frames_out(out_dir / "frame_scores.csv", std::ios::trunc);
  frames_out << "clip_id,frame";
  for (const auto& n : names) frames_out << ',' << n;
  if (seld) {
    for (const auto& n : names) frames_out << ",azimuth:" << n;
    for (const auto& n : names) frames_out << ",elevation:" << n;
  }
  frames_out << '\n';

  std::vector<std::pair<std::string, io::Event>> events;
  for (const io::ClipRecord& clip : data.clips) {
    const auto f = detail::load_standardized(features_dir, clip.clip_id, stats, C);
    const nn::Tensor<float> x({1, C, f.frames, f.mels}, f.data);
    const auto out = model.forward_frames(x, nn::Mode::eval);
    const auto p = nn::sigmoid(out.sed);
    const std::size_t T = f.frames;
    io::FrameMatrix<std::uint8_t> activity(T, K);
    for (std::size_t t = 0; t < T; ++t) {
      frames_out << clip.clip_id << ',' << t;
      for (std::size_t k = 0; k < K; ++k) {
        frames_out << ',' << detail::num(p[t * K + k]);
        activity.at(t, k) = p[t * K + k] >= config.threshold;
      }
      if (seld) {
        for (std::size_t k = 0; k < K; ++k) frames_out << ',' << detail::num(out.azimuth->values()[t * K + k] * 180.0);
        for (std::size_t k = 0; k < K; ++k) frames_out << ',' << detail::num(out.elevation->values()[t * K + k] * 90.0);
      }
      frames_out << '\n';
    }
    for (io::Event e : io::events_from_activity(activity)) {
      if (seld) {
        // Mean predicted direction over the event's frames.
        const std::size_t begin = io::frame_index(e.onset), end = io::frame_index(e.offset);
        double azi = 0.0, ele = 0.0;
        for (std::size_t t = begin; t < end; ++t) {
          azi += out.azimuth->values()[t * K + e.label] * 180.0;
          ele += out.elevation->values()[t * K + e.label] * 90.0;
        }
        e.azimuth_deg = azi / static_cast<double>(end - begin);
        e.elevation_deg = ele / static_cast<double>(end - begin);
      }
      events.emplace_back(clip.clip_id, e);
    }
  }
  io::write_events(out_dir / "events.csv", events, data.vocab);
}

}  // namespace listen::app
