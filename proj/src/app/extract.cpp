// src/app/extract.cpp

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

#include <cmath>
#include <exception>
#include <mutex>

#include "listen/app/commands.hpp"
#include "listen/errors.hpp"
#include "listen/features/store.hpp"
#include "listen/io/resample.hpp"
#include "listen/io/wav.hpp"

namespace listen::app {

LoadedDataset load_dataset(const Dataset& dataset) {
  const fs::path dir = dataset.manifest.parent_path();
  LoadedDataset out;
  out.vocab = io::Vocabulary::load(dataset.vocab.value_or(dir / "vocab.txt"));
  io::ManifestOptions options;
  if (dataset.events) {
    options.events_path = dataset.events;
  } else if (fs::exists(dir / "events.csv")) {
    options.events_path = dir / "events.csv";
  }
  out.clips = io::load_manifest(dataset.manifest, out.vocab, options);
  return out;
}

void write_stats(const fs::path& path, const FeatureStats& stats) {
  features::LogMelSpectrogram block;
  block.channels = 1;
  block.frames = 2;
  block.mels = stats.mean.size();
  block.data = stats.mean;
  block.data.insert(block.data.end(), stats.stddev.begin(), stats.stddev.end());
  features::write_features(path, block);
}

FeatureStats read_stats(const fs::path& path) {
  const auto block = features::read_features(path);
  if (block.channels != 1 || block.frames != 2)
    throw FormatError(path.string() + " is not a statistics file");
  FeatureStats stats;
  stats.mean.assign(block.data.begin(), block.data.begin() + static_cast<std::ptrdiff_t>(block.mels));
  stats.stddev.assign(block.data.begin() + static_cast<std::ptrdiff_t>(block.mels), block.data.end());
  return stats;
}

void standardize(features::LogMelSpectrogram& s, const FeatureStats& stats) {
  if (stats.mean.size() != s.mels) throw ShapeError("statistics and features disagree on mel count");
  for (std::size_t i = 0; i < s.data.size(); ++i) {
    const std::size_t m = i % s.mels;
    s.data[i] = (s.data[i] - stats.mean[m]) / stats.stddev[m];
  }
}

features::LogMelSpectrogram extract_clip(const fs::path& wav, std::size_t in_channels) {
  io::Waveform w = io::resample(io::decode_wav(wav), kTargetSampleRate);
  if (in_channels == 1) {
    w = io::downmix_to_mono(w);
  } else if (w.channels != in_channels) {
    throw DataError(wav.string() + " has " + std::to_string(w.channels) + " channels, model expects " +
                    std::to_string(in_channels));
  }
  return features::logmel(w);
}

void cmd_extract(const Dataset& dataset, const fs::path& out_dir, const ExperimentConfig& config) {
  const LoadedDataset data = load_dataset(dataset);
  fs::create_directories(out_dir);
  const auto n = static_cast<std::ptrdiff_t>(data.clips.size());
  std::exception_ptr failure;
  std::mutex failure_mutex;

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const io::ClipRecord& clip = data.clips[static_cast<std::size_t>(i)];
      features::write_features(out_dir / (clip.clip_id + ".lmel"),
                               extract_clip(clip.path, config.model.in_channels));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> sum, sum_sq;
  std::size_t count = 0;
  for (const io::ClipRecord& clip : data.clips) {
    if (clip.split != io::Split::train) continue;
    const auto s = features::read_features(out_dir / (clip.clip_id + ".lmel"));
    if (sum.empty()) {
      sum.assign(s.mels, 0.0);
      sum_sq.assign(s.mels, 0.0);
    }
    for (std::size_t i = 0; i < s.data.size(); ++i) {
      const double v = s.data[i];
      sum[i % s.mels] += v;
      sum_sq[i % s.mels] += v * v;
    }
    count += s.channels * s.frames;
  }
  if (count == 0) throw DataError("no training frames to compute feature statistics from");

  FeatureStats stats;
  for (std::size_t m = 0; m < sum.size(); ++m) {
    const double mean = sum[m] / static_cast<double>(count);
    const double var = std::max(0.0, sum_sq[m] / static_cast<double>(count) - mean * mean);
    const double sd = std::sqrt(var);
    stats.mean.push_back(static_cast<float>(mean));
    stats.stddev.push_back(sd > 1e-6 ? static_cast<float>(sd) : 1.0f);
  }
  write_stats(out_dir / kStatsFile, stats);
}

}  // namespace listen::app
