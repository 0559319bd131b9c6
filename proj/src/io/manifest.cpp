// src/io/manifest.cpp

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

#include "listen/io/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "listen/errors.hpp"

namespace listen::io {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_seconds(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ManifestError(where + ": not a number: '" + text + "'");
  }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

Split parse_split(const std::string& text) {
  if (text == "train") return Split::train;
  if (text == "validate") return Split::validate;
  if (text == "evaluate") return Split::evaluate;
  throw ManifestError("unknown split '" + text + "'");
}

const char* to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::validate: return "validate";
    case Split::evaluate: return "evaluate";
  }
  return "train";
}

Vocabulary::Vocabulary(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second)
      throw VocabularyError("duplicate class name '" + names_[i] + "'");
  }
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::vector<std::string> names;
  for (const std::string& line : read_lines(path)) {
    const std::string name = trim(line);
    if (!name.empty()) names.push_back(name);
  }
  if (names.empty()) throw VocabularyError(path.string() + ": empty vocabulary");
  return Vocabulary(std::move(names));
}

std::size_t Vocabulary::index_of(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) throw VocabularyError("unknown label '" + name + "'");
  return it->second;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::unordered_map<std::string, std::vector<Event>> load_events(const std::filesystem::path& path,
                                                                const Vocabulary& vocab) {
  std::unordered_map<std::string, std::vector<Event>> out;
  const auto lines = read_lines(path);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto f = split_csv_line(lines[i]);
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    if (f.size() != 4 && f.size() != 6) throw ManifestError(where + ": expected 4 or 6 fields");
    Event e;
    e.onset = parse_seconds(f[1], where);
    e.offset = parse_seconds(f[2], where);
    if (!(e.onset < e.offset)) throw ManifestError(where + ": onset must precede offset");
    e.label = vocab.index_of(f[3]);
    if (f.size() == 6) {
      e.azimuth_deg = parse_seconds(f[4], where);
      e.elevation_deg = parse_seconds(f[5], where);
    }
    out[f[0]].push_back(e);
  }
  return out;
}

void write_events(const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, Event>>& events, const Vocabulary& vocab) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  const bool angles = std::any_of(events.begin(), events.end(),
                                  [](const auto& e) { return e.second.azimuth_deg.has_value(); });
  out << "clip_id,onset_s,offset_s,label" << (angles ? ",azimuth_deg,elevation_deg" : "") << "\n";
  out << std::setprecision(17);
  for (const auto& [clip, e] : events) {
    out << clip << ',' << e.onset << ',' << e.offset << ',' << vocab.name(e.label);
    if (angles) out << ',' << e.azimuth_deg.value_or(0.0) << ',' << e.elevation_deg.value_or(0.0);
    out << '\n';
  }
}

std::vector<ClipRecord> load_manifest(const std::filesystem::path& path, const Vocabulary& vocab,
                                      const ManifestOptions& options) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ManifestError(path.string() + ": empty manifest");
  const auto header = split_csv_line(lines.front());
  const std::vector<std::string> expected{"clip_id", "path", "split", "fold", "labels"};
  if (header != expected)
    throw ManifestError(path.string() + ": header must be clip_id,path,split,fold,labels");

  std::unordered_map<std::string, std::vector<Event>> events;
  if (options.events_path) events = load_events(*options.events_path, vocab);

  const std::filesystem::path base = path.parent_path();
  std::vector<ClipRecord> records;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 5) throw ManifestError(where + ": expected 5 fields");

    ClipRecord r;
    r.clip_id = f[0];
    if (r.clip_id.empty()) throw ManifestError(where + ": empty clip_id");
    if (!seen.insert(r.clip_id).second)
      throw ManifestError(where + ": duplicate clip_id '" + r.clip_id + "'");
    r.path = std::filesystem::path(f[1]).is_absolute() ? std::filesystem::path(f[1]) : base / f[1];
    r.split = parse_split(f[2]);
    if (!f[3].empty()) {
      const double fold = parse_seconds(f[3], where);
      if (fold != std::floor(fold) || fold < 1 || fold > 4)
        throw ManifestError(where + ": fold must be an integer in 1..4");
      r.fold = static_cast<int>(fold);
    }

    std::vector<std::uint8_t> weak(vocab.size(), 0);
    std::istringstream names(f[4]);
    std::string name;
    while (std::getline(names, name, ';')) {
      name = trim(name);
      if (!name.empty()) weak[vocab.index_of(name)] = 1;
    }

    if (auto it = events.find(r.clip_id); it != events.end()) {
      r.events = it->second;
      std::size_t frames = options.clip_frames;
      if (frames == 0) {
        double last = 0.0;
        for (const Event& e : r.events) last = std::max(last, e.offset);
        frames = static_cast<std::size_t>(std::ceil(last * kLabelFrameRate));
      }
      r.labels = rasterize_events(r.events, frames, vocab.size());
    } else {
      r.labels.kind = LabelKind::weak;
      r.labels.weak = std::move(weak);
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace listen::io
