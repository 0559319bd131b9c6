// include/listen/app/commands.hpp

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

#ifndef LISTEN_APP_COMMANDS_HPP_
#define LISTEN_APP_COMMANDS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "listen/app/config.hpp"
#include "listen/features/logmel.hpp"
#include "listen/io/manifest.hpp"

namespace listen::app {

namespace fs = std::filesystem;

// Manifest plus the vocabulary and sidecar next to it. `vocab` defaults to
// vocab.txt in the manifest's directory; `events` to events.csv there when
// that file exists.
struct Dataset {
  fs::path manifest;
  std::optional<fs::path> vocab;
  std::optional<fs::path> events;
};

struct LoadedDataset {
  io::Vocabulary vocab;
  std::vector<io::ClipRecord> clips;
};

LoadedDataset load_dataset(const Dataset& dataset);

inline constexpr std::uint32_t kTargetSampleRate = 32000;
inline constexpr const char* kStatsFile = "stats.lmel";

// Per-mel-bin mean and standard deviation of the training features.
struct FeatureStats {
  std::vector<float> mean;
  std::vector<float> stddev;
};

// Stored as a 1 x 2 x mels feature block: row 0 mean, row 1 std.
void write_stats(const fs::path& path, const FeatureStats& stats);
FeatureStats read_stats(const fs::path& path);
void standardize(features::LogMelSpectrogram& s, const FeatureStats& stats);

// Decodes, resamples to 32 kHz, matches `in_channels` (mono downmix when 1)
// and computes the log-mel block.
features::LogMelSpectrogram extract_clip(const fs::path& wav, std::size_t in_channels);

// Writes <out_dir>/<clip_id>.lmel for every clip and <out_dir>/stats.lmel
// over the train split.
void cmd_extract(const Dataset& dataset, const fs::path& out_dir, const ExperimentConfig& config);

struct TrainSummary {
  std::vector<double> losses;  // one per optimizer step
  // clip_class: accuracy of the last step's batch, from the same
  // train-mode forward pass as the last loss.
  std::optional<double> train_accuracy;
  // Evaluated on all training items after the last step, eval mode.
  std::optional<double> eval_accuracy;        // clip_class
  std::optional<double> train_angle_mae;      // seld, normalised units
};

// Trains on the train split and writes the checkpoint (parameters,
// batch-norm statistics and Adam moments). When `log` is given, writes
// `step,loss` lines to it.
TrainSummary cmd_train(const ExperimentConfig& config, const Dataset& dataset,
                       const fs::path& features_dir, const fs::path& checkpoint,
                       const std::optional<fs::path>& log = std::nullopt);

// Writes scores.csv (clip tasks) or frame_scores.csv and events.csv (frame
// tasks) for every clip of the manifest.
void cmd_infer(const ExperimentConfig& config, const fs::path& checkpoint, const Dataset& dataset,
               const fs::path& features_dir, const fs::path& out_dir);

// Scores the predictions in `predictions_dir` against the manifest and
// writes a JSON report. The taxonomy file holds one coarse index per line,
// line i for fine class i.
std::string cmd_evaluate(const ExperimentConfig& config, const fs::path& predictions_dir,
                         const Dataset& reference, const fs::path& report,
                         const std::optional<fs::path>& taxonomy = std::nullopt);

struct SynthOptions {
  TaskKind task = TaskKind::clip_class;
  std::size_t clips = 8;
  std::size_t classes = 4;
  double seconds = 10.0;
  std::uint64_t seed = 0;
};

// Signature centre frequency of each synthetic class.
std::vector<double> synth_class_frequencies(std::size_t classes);

// Writes wav/, manifest.csv, vocab.txt and, for frame tasks, events.csv.
void cmd_synth(const SynthOptions& options, const fs::path& out_dir);

}  // namespace listen::app

#endif  // LISTEN_APP_COMMANDS_HPP_
