// include/listen/app/config.hpp

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

#ifndef LISTEN_APP_CONFIG_HPP_
#define LISTEN_APP_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "listen/io/segment.hpp"
#include "listen/models/model.hpp"

namespace listen::app {

enum class TaskKind { clip_class, clip_tag, frame_sed, seld };
enum class LrSchedule { constant, cosine };

TaskKind parse_task(const std::string& text);
std::string to_string(TaskKind task);


// Head wired to each task: softmax for single-label classification,
// sigmoid for tagging, frame sigmoid for detection, and the SED + DOA head.
models::Head head_for(TaskKind task);

struct ExperimentConfig {
  TaskKind task = TaskKind::clip_class;
  // n_classes is taken from the vocabulary at run time; head from the task.
  models::ModelSpec model;
  // Training segment length; 0 trains on whole clips repeat-padded to the
  // longest clip. hop 0 means hop = segment length.
  double segment_seconds = 0.0;
  double hop_seconds = 0.0;
  io::PadPolicy pad = io::PadPolicy::repeat;
  std::size_t batch_size = 32;
  std::size_t steps = 1000;
  double lr = 1e-3;
  // cosine anneals lr to 0 over `steps`: lr * (1 + cos(pi * (t - 1) / steps)) / 2.
  LrSchedule lr_schedule = LrSchedule::constant;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  // Training stops after the first step whose loss is below this value;
  // 0 runs all `steps`.
  double target_loss = 0.0;
  double threshold = 0.5;

  void validate() const;
};

// Learning rate for 1-based optimizer step `step`.
double learning_rate(const ExperimentConfig& config, std::size_t step);

// `key = value` lines; blank lines and lines starting with '#' are skipped.
// Unknown keys and malformed values throw ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
// Applies one `key=value` assignment on top of an existing config.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

// Every key in a fixed order, one `key=value` per line. parse_config of the
// result gives back the same config.
std::string canonical_text(const ExperimentConfig& config);
// 64-bit FNV-1a of canonical_text, as 16 hex digits.
std::string fingerprint(const ExperimentConfig& config);

}  // namespace listen::app

#endif  // LISTEN_APP_CONFIG_HPP_
