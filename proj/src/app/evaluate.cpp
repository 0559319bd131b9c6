// src/app/evaluate.cpp

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
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "listen/metrics/detection.hpp"
#include "listen/metrics/localization.hpp"
#include "listen/metrics/tagging.hpp"
#include "pipeline.hpp"

#ifndef LISTEN_GIT_REVISION
#define LISTEN_GIT_REVISION "unknown"
#endif

namespace listen::app {
namespace {

using json = nlohmann::ordered_json;

json value_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json value_or_null(const std::optional<double>& v) { return v ? value_or_null(*v) : json(nullptr); }

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + " is empty");
  t.header = io::split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto f = io::split_csv_line(line);
    if (f.size() != t.header.size())
      throw FormatError(path.string() + ": row has " + std::to_string(f.size()) + " fields, header has " +
                        std::to_string(t.header.size()));
    t.rows.push_back(std::move(f));
  }
  return t;
}

double to_real(const std::string& s, const fs::path& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw FormatError(where.string() + ": '" + s + "' is not a number");
}

void check_header(const CsvTable& t, const std::vector<std::string>& expected, const fs::path& path) {
  if (t.header != expected) throw FormatError(path.string() + ": unexpected header");
}

metrics::Taxonomy read_taxonomy(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  metrics::Taxonomy tax;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    tax.fine_to_coarse.push_back(static_cast<std::size_t>(to_real(line, path)));
  }
  return tax;
}

struct FramePredictions {
  io::FrameMatrix<float> scores, azimuth, elevation;
};

std::map<std::string, FramePredictions> read_frame_scores(const fs::path& path,
                                                          const io::Vocabulary& vocab, bool seld) {
  const CsvTable t = read_csv(path);
  const std::size_t K = vocab.size();
  std::vector<std::string> expected{"clip_id", "frame"};
  for (const auto& n : vocab.names()) expected.push_back(n);
  if (seld) {
    for (const auto& n : vocab.names()) expected.push_back("azimuth:" + n);
    for (const auto& n : vocab.names()) expected.push_back("elevation:" + n);
  }
  check_header(t, expected, path);

  std::map<std::string, std::vector<const std::vector<std::string>*>> by_clip;
  for (const auto& row : t.rows) by_clip[row[0]].push_back(&row);
  std::map<std::string, FramePredictions> out;
  for (const auto& [clip, rows] : by_clip) {
    FramePredictions p{io::FrameMatrix<float>(rows.size(), K), io::FrameMatrix<float>(rows.size(), K),
                       io::FrameMatrix<float>(rows.size(), K)};
    for (const auto* row : rows) {
      const auto frame = static_cast<std::size_t>(to_real((*row)[1], path));
      if (frame >= rows.size()) throw FormatError(path.string() + ": frame index out of range for " + clip);
      for (std::size_t k = 0; k < K; ++k) {
        p.scores.at(frame, k) = static_cast<float>(to_real((*row)[2 + k], path));
        if (seld) {
          p.azimuth.at(frame, k) = static_cast<float>(to_real((*row)[2 + K + k], path));
          p.elevation.at(frame, k) = static_cast<float>(to_real((*row)[2 + 2 * K + k], path));
        }
      }
    }
    out.emplace(clip, std::move(p));
  }
  return out;
}

json clip_metrics(const ExperimentConfig& config, const fs::path& dir, const LoadedDataset& ref,
                  const std::optional<fs::path>& taxonomy_path) {
  const fs::path path = dir / "scores.csv";
  const CsvTable t = read_csv(path);
  std::vector<std::string> expected{"clip_id"};
  for (const auto& n : ref.vocab.names()) expected.push_back(n);
  check_header(t, expected, path);
  std::map<std::string, const std::vector<std::string>*> by_clip;
  for (const auto& row : t.rows) by_clip[row[0]] = &row;

  const std::size_t K = ref.vocab.size();
  metrics::ClipScores c(ref.clips.size(), K);
  for (std::size_t i = 0; i < ref.clips.size(); ++i) {
    const io::ClipRecord& clip = ref.clips[i];
    const auto it = by_clip.find(clip.clip_id);
    if (it == by_clip.end()) throw DataError("no prediction for clip " + clip.clip_id);
    const auto tags = detail::clip_tags(clip.labels);
    for (std::size_t k = 0; k < K; ++k) {
      c.scores[i * K + k] = to_real((*it->second)[1 + k], path);
      c.targets[i * K + k] = tags[k];
    }
  }

  json m;
  if (config.task == TaskKind::clip_class) {
    std::vector<std::size_t> predicted, truth;
    for (std::size_t i = 0; i < c.n; ++i) {
      const auto row = c.scores.begin() + static_cast<std::ptrdiff_t>(i * K);
      predicted.push_back(static_cast<std::size_t>(std::max_element(row, row + static_cast<std::ptrdiff_t>(K)) - row));
      const auto trow = c.targets.begin() + static_cast<std::ptrdiff_t>(i * K);
      truth.push_back(static_cast<std::size_t>(std::max_element(trow, trow + static_cast<std::ptrdiff_t>(K)) - trow));
    }
    m["accuracy"] = value_or_null(metrics::accuracy_classwise(predicted, truth, K));
    return m;
  }
  m["lwlrap"] = value_or_null(metrics::lwlrap(c));
  m["map"] = value_or_null(metrics::average_precision(c).mean);
  m["micro_auprc"] = value_or_null(metrics::auprc(c, metrics::Averaging::micro));
  m["macro_auprc"] = value_or_null(metrics::auprc(c, metrics::Averaging::macro));
  m["micro_f1"] = value_or_null(metrics::micro_f1(c, config.threshold));
  if (taxonomy_path) {
    const metrics::Taxonomy tax = read_taxonomy(*taxonomy_path);
    m["coarse_micro_auprc"] = value_or_null(metrics::auprc(c, metrics::Averaging::micro, &tax));
    m["coarse_macro_auprc"] = value_or_null(metrics::auprc(c, metrics::Averaging::macro, &tax));
    m["coarse_micro_f1"] = value_or_null(metrics::micro_f1(c, config.threshold, &tax));
  }
  return m;
}

json frame_metrics(const ExperimentConfig& config, const fs::path& dir, const LoadedDataset& ref) {
  const bool seld = config.task == TaskKind::seld;
  const auto predictions = read_frame_scores(dir / "frame_scores.csv", ref.vocab, seld);
  const auto predicted_events = io::load_events(dir / "events.csv", ref.vocab);
  const std::size_t K = ref.vocab.size();

  metrics::SegmentCounts segments;
  metrics::LocalizationCounts localization;
  std::vector<metrics::TimedEvent> ref_events, est_events;
  metrics::ClipScores tagging(ref.clips.size(), K);

  for (std::size_t i = 0; i < ref.clips.size(); ++i) {
    const io::ClipRecord& clip = ref.clips[i];
    const auto it = predictions.find(clip.clip_id);
    if (it == predictions.end()) throw DataError("no frame prediction for clip " + clip.clip_id);
    const FramePredictions& p = it->second;
    const std::size_t T = p.scores.frames;

    const io::LabelBundle labels = detail::labels_at(clip, T, K);
    const auto tags = detail::clip_tags(labels);
    for (std::size_t k = 0; k < K; ++k) {
      float best = 0.0f;
      for (std::size_t t = 0; t < T; ++t) best = std::max(best, p.scores.at(t, k));
      tagging.scores[i * K + k] = best;
      tagging.targets[i * K + k] = tags[k];
    }
    if (labels.kind == io::LabelKind::weak) continue;

    metrics::ActivityMatrix est(T, K);
    for (std::size_t j = 0; j < est.data.size(); ++j) est.data[j] = p.scores.data[j] >= config.threshold;
    segments += metrics::sed_segment_metrics(labels.strong, est);
    for (const io::Event& e : clip.events) ref_events.push_back({clip.clip_id, e.label, e.onset, e.offset});
    if (const auto ev = predicted_events.find(clip.clip_id); ev != predicted_events.end())
      for (const io::Event& e : ev->second) est_events.push_back({clip.clip_id, e.label, e.onset, e.offset});
    if (seld) {
      if (labels.kind != io::LabelKind::seld)
        throw ConfigError("task seld needs direction labels, clip " + clip.clip_id + " has none");
      localization += metrics::localization_counts({labels.strong, labels.azimuth_deg, labels.elevation_deg},
                                                   {est, p.azimuth, p.elevation});
    }
  }

  json m;
  m["segment_f1"] = value_or_null(segments.f1());
  m["segment_er"] = value_or_null(segments.error_rate());
  if (seld) {
    m["doa_error"] = value_or_null(localization.doa_error());
    m["frame_recall"] = value_or_null(localization.frame_recall());
    const auto er = segments.error_rate();
    const auto doa = localization.doa_error();
    m["seld_score"] = er && doa ? value_or_null(metrics::seld_score(*er, segments.f1(), *doa,
                                                                    localization.frame_recall()))
                                : json(nullptr);
  } else {
    m["event_f1"] = value_or_null(metrics::sed_event_f1(ref_events, est_events));
    m["tagging_map"] = value_or_null(metrics::average_precision(tagging).mean);
  }
  return m;
}

}  // namespace

std::string cmd_evaluate(const ExperimentConfig& config, const fs::path& predictions_dir,
                         const Dataset& reference, const fs::path& report,
                         const std::optional<fs::path>& taxonomy) {
  config.validate();
  const LoadedDataset ref = load_dataset(reference);
  json doc;
  doc["task"] = to_string(config.task);
  doc["config_fingerprint"] = fingerprint(config);
  doc["seed"] = config.seed;
  doc["git_revision"] = LISTEN_GIT_REVISION;
  doc["clips"] = ref.clips.size();
  doc["metrics"] = models::is_clip_head(head_for(config.task))
                       ? clip_metrics(config, predictions_dir, ref, taxonomy)
                       : frame_metrics(config, predictions_dir, ref);
  const std::string text = doc.dump(2) + "\n";
  if (report.has_parent_path()) fs::create_directories(report.parent_path());
  std::ofstream out(report, std::ios::trunc | std::ios::binary);
  if (!out) throw DataError("cannot write " + report.string());
  out << text;
  return text;
}

}  // namespace listen::app
