// include/listen/io/manifest.hpp

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

#ifndef LISTEN_IO_MANIFEST_HPP_
#define LISTEN_IO_MANIFEST_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "listen/io/labels.hpp"

namespace listen::io {

enum class Split { train, validate, evaluate };

Split parse_split(const std::string& text);
const char* to_string(Split split);

// Ordered class names; line i of the vocabulary file is class i.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> names);

  static Vocabulary load(const std::filesystem::path& path);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t index) const { return names_.at(index); }
  const std::vector<std::string>& names() const { return names_; }
  // Throws VocabularyError for unknown names.
  std::size_t index_of(const std::string& name) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct ClipRecord {
  std::string clip_id;
  std::filesystem::path path;
  LabelBundle labels;
  Split split = Split::train;
  std::optional<int> fold;
  // Timed events from the sidecar; empty for weak-only clips.
  std::vector<Event> events;
};

struct ManifestOptions {
  // Strong-label sidecar (`clip_id,onset_s,offset_s,label[,azimuth_deg,elevation_deg]`).
  std::optional<std::filesystem::path> events_path;
  // Frame count used to rasterize strong labels. Zero means derive it from
  // the latest offset of each clip, ceil(offset * 64).
  std::size_t clip_frames = 0;
};

// Reads `clip_id,path,split,fold,labels`. Relative paths resolve against
// the manifest's directory. Clips with sidecar events get a strong (or
// seld) bundle; all other clips get a weak bundle from the `;`-separated
// labels column.
std::vector<ClipRecord> load_manifest(const std::filesystem::path& path, const Vocabulary& vocab,
                                      const ManifestOptions& options = {});

// Sidecar events keyed by clip id, in file order.
std::unordered_map<std::string, std::vector<Event>> load_events(const std::filesystem::path& path,
                                                                const Vocabulary& vocab);

void write_events(const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, Event>>& events, const Vocabulary& vocab);

// Splits a line on commas; surrounding whitespace of fields is trimmed.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace listen::io

#endif  // LISTEN_IO_MANIFEST_HPP_
