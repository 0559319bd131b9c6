// src/app/pipeline.hpp

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

#ifndef LISTEN_SRC_APP_PIPELINE_HPP_
#define LISTEN_SRC_APP_PIPELINE_HPP_

#include <cstdio>
#include <string>

#include "listen/app/commands.hpp"
#include "listen/errors.hpp"
#include "listen/features/store.hpp"
#include "listen/io/labels.hpp"

namespace listen::app::detail {

inline features::LogMelSpectrogram load_standardized(const fs::path& features_dir,
                                                     const std::string& clip_id,
                                                     const FeatureStats& stats, std::size_t channels) {
  auto s = features::read_features(features_dir / (clip_id + ".lmel"));
  if (s.channels != channels)
    throw ConfigError("features of " + clip_id + " have " + std::to_string(s.channels) +
                      " channels, config expects " + std::to_string(channels));
  standardize(s, stats);
  return s;
}

// Labels of a clip re-rasterized at the clip's feature frame count.
inline io::LabelBundle labels_at(const io::ClipRecord& clip, std::size_t frames, std::size_t classes) {
  if (clip.labels.kind == io::LabelKind::weak) return clip.labels;
  return io::rasterize_events(clip.events, frames, classes);
}

inline std::vector<std::uint8_t> clip_tags(const io::LabelBundle& labels) {
  return labels.kind == io::LabelKind::weak ? labels.weak : io::weak_from_strong(labels.strong);
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace listen::app::detail

#endif  // LISTEN_SRC_APP_PIPELINE_HPP_
