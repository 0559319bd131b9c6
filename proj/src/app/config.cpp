// src/app/config.cpp

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

#include "listen/app/config.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "listen/errors.hpp"

namespace listen::app {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  double out = 0.0;
  in >> out;
  if (!in || !(in >> std::ws).eof())
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  return out;
}

io::PadPolicy parse_pad(const std::string& text) {
  if (text == "repeat") return io::PadPolicy::repeat;
  if (text == "zero") return io::PadPolicy::zero;
  if (text == "none") return io::PadPolicy::none;
  throw ConfigError("unknown pad policy '" + text + "'");
}

const char* pad_name(io::PadPolicy pad) {
  switch (pad) {
    case io::PadPolicy::repeat: return "repeat";
    case io::PadPolicy::zero: return "zero";
    case io::PadPolicy::none: return "none";
  }
  return "?";
}

std::string real_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

LrSchedule parse_schedule(const std::string& text) {
  if (text == "constant") return LrSchedule::constant;
  if (text == "cosine") return LrSchedule::cosine;
  throw ConfigError("unknown lr_schedule '" + text + "'");
}

}  // namespace

double learning_rate(const ExperimentConfig& c, std::size_t step) {
  if (c.lr_schedule == LrSchedule::constant) return c.lr;
  const double progress = static_cast<double>(step - 1) / static_cast<double>(c.steps);
  return c.lr * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

TaskKind parse_task(const std::string& text) {
  if (text == "clip_class") return TaskKind::clip_class;
  if (text == "clip_tag") return TaskKind::clip_tag;
  if (text == "frame_sed") return TaskKind::frame_sed;
  if (text == "seld") return TaskKind::seld;
  throw ConfigError("unknown task '" + text + "'");
}

std::string to_string(TaskKind task) {
  switch (task) {
    case TaskKind::clip_class: return "clip_class";
    case TaskKind::clip_tag: return "clip_tag";
    case TaskKind::frame_sed: return "frame_sed";
    case TaskKind::seld: return "seld";
  }
  return "?";
}

models::Head head_for(TaskKind task) {
  switch (task) {
    case TaskKind::clip_class: return models::Head::clip_softmax;
    case TaskKind::clip_tag: return models::Head::clip_sigmoid;
    case TaskKind::frame_sed: return models::Head::frame_sigmoid;
    case TaskKind::seld: return models::Head::seld;
  }
  return models::Head::clip_softmax;
}

void ExperimentConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (steps < 1) throw ConfigError("steps must be at least 1");
  if (model.in_channels < 1) throw ConfigError("in_channels must be at least 1");
  if (model.base_width < 1) throw ConfigError("base_width must be at least 1");
  if (!(lr > 0.0)) throw ConfigError("lr must be positive");
  if (lambda < 0.0) throw ConfigError("lambda must be non-negative");
  if (segment_seconds < 0.0 || hop_seconds < 0.0)
    throw ConfigError("segment_seconds and hop_seconds must be non-negative");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  try {
    if (key == "task") c.task = parse_task(value);
    else if (key == "arch") c.model.arch = models::parse_arch(value);
    else if (key == "pool") c.model.pool = models::parse_pool(value);
    else if (key == "in_channels") c.model.in_channels = parse_count(key, value);
    else if (key == "base_width") c.model.base_width = parse_count(key, value);
    else if (key == "segment_seconds") c.segment_seconds = parse_real(key, value);
    else if (key == "hop_seconds") c.hop_seconds = parse_real(key, value);
    else if (key == "pad") c.pad = parse_pad(value);
    else if (key == "batch_size") c.batch_size = parse_count(key, value);
    else if (key == "steps") c.steps = parse_count(key, value);
    else if (key == "lr") c.lr = parse_real(key, value);
    else if (key == "lr_schedule") c.lr_schedule = parse_schedule(value);
    else if (key == "lambda") c.lambda = parse_real(key, value);
    else if (key == "seed") c.seed = parse_count(key, value);
    else if (key == "target_loss") c.target_loss = parse_real(key, value);
    else if (key == "threshold") c.threshold = parse_real(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    apply_setting(c, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  c.model.head = head_for(c.task);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "task=" << to_string(c.task) << '\n'
      << "arch=" << models::to_string(c.model.arch) << '\n'
      << "pool=" << models::to_string(c.model.pool) << '\n'
      << "in_channels=" << c.model.in_channels << '\n'
      << "base_width=" << c.model.base_width << '\n'
      << "segment_seconds=" << real_text(c.segment_seconds) << '\n'
      << "hop_seconds=" << real_text(c.hop_seconds) << '\n'
      << "pad=" << pad_name(c.pad) << '\n'
      << "batch_size=" << c.batch_size << '\n'
      << "steps=" << c.steps << '\n'
      << "lr=" << real_text(c.lr) << '\n'
      << "lr_schedule=" << (c.lr_schedule == LrSchedule::cosine ? "cosine" : "constant") << '\n'
      << "lambda=" << real_text(c.lambda) << '\n'
      << "seed=" << c.seed << '\n'
      << "target_loss=" << real_text(c.target_loss) << '\n'
      << "threshold=" << real_text(c.threshold) << '\n';
  return out.str();
}

std::string fingerprint(const ExperimentConfig& c) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canonical_text(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace listen::app
