// src/app/synth.cpp

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
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "listen/app/commands.hpp"
#include "listen/errors.hpp"
#include "listen/features/mel.hpp"
#include "listen/io/wav.hpp"

namespace listen::app {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform [0, 1) from the raw engine output, so datasets do not depend on
// the standard library's distribution algorithms.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform(rng) * static_cast<double>(n)));
}

struct Signature {
  enum Kind { sine, chirp, noise_band } kind;
  double freq;
  std::vector<double> band;  // noise band partials
  std::vector<double> phases;
};

Signature make_signature(std::size_t k, double freq, std::mt19937_64& rng) {
  Signature s{static_cast<Signature::Kind>(k % 3), freq, {}, {}};
  if (s.kind == Signature::noise_band) {
    for (int p = 0; p < 24; ++p) {
      s.band.push_back(freq * (0.97 + 0.06 * uniform(rng)));
      s.phases.push_back(kTwoPi * uniform(rng));
    }
  }
  return s;
}

// Adds `amp` times the class signature to samples [begin, end).
void render(const Signature& s, double amp, double phase, std::vector<float>& out, std::size_t begin,
            std::size_t end, double sr) {
  for (std::size_t n = begin; n < end; ++n) {
    const double t = static_cast<double>(n) / sr;
    double v = 0.0;
    switch (s.kind) {
      case Signature::sine:
        v = std::sin(kTwoPi * s.freq * t + phase);
        break;
      case Signature::chirp: {
        // Triangular sweep over +-4 % of the centre, one cycle per second;
        // `sweep` is the running integral of the triangle.
        const double u = t - std::floor(t);
        const double sweep = u < 0.5 ? 2.0 * u * u - u : 3.0 * u - 2.0 * u * u - 1.0;
        v = std::sin(kTwoPi * s.freq * (t + 0.04 * sweep) + phase);
        break;
      }
      case Signature::noise_band:
        for (std::size_t p = 0; p < s.band.size(); ++p) v += std::sin(kTwoPi * s.band[p] * t + s.phases[p] + phase);
        v /= std::sqrt(static_cast<double>(s.band.size()) / 2.0);
        break;
    }
    out[n] += static_cast<float>(amp * v);
  }
}

std::string clip_name(std::size_t i) {
  std::ostringstream s;
  s << "clip" << std::setw(4) << std::setfill('0') << i;
  return s.str();
}

}  // namespace

std::vector<double> synth_class_frequencies(std::size_t classes) {
  const double lo = features::hz_to_mel(500.0), hi = features::hz_to_mel(8000.0);
  std::vector<double> f(classes);
  for (std::size_t k = 0; k < classes; ++k) {
    const double frac = classes == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(classes - 1);
    f[k] = features::mel_to_hz(lo + frac * (hi - lo));
  }
  return f;
}

void cmd_synth(const SynthOptions& o, const fs::path& out_dir) {
  if (o.clips < 1 || o.classes < 1) throw ConfigError("synth needs at least one clip and one class");
  const bool frame_task = o.task == TaskKind::frame_sed || o.task == TaskKind::seld;
  if (frame_task && o.seconds < 1.0) throw ConfigError("frame tasks need clips of at least 1 s");
  if (o.seconds <= 0.0) throw ConfigError("clip length must be positive");

  std::mt19937_64 rng(o.seed);
  const double sr = kTargetSampleRate;
  const auto n_samples = static_cast<std::size_t>(std::llround(o.seconds * sr));
  const std::size_t channels = o.task == TaskKind::seld ? 4 : 1;
  const auto freqs = synth_class_frequencies(o.classes);
  std::vector<Signature> sigs;
  for (std::size_t k = 0; k < o.classes; ++k) sigs.push_back(make_signature(k, freqs[k], rng));

  std::vector<std::string> names;
  for (std::size_t k = 0; k < o.classes; ++k) names.push_back("class" + std::to_string(k));
  const io::Vocabulary vocab(names);

  fs::create_directories(out_dir / "wav");
  std::ofstream manifest(out_dir / "manifest.csv", std::ios::trunc);
  manifest << "clip_id,path,split,fold,labels\n";
  std::vector<std::pair<std::string, io::Event>> sidecar;
  const auto whole_seconds = static_cast<std::size_t>(std::floor(o.seconds));

  for (std::size_t i = 0; i < o.clips; ++i) {
    const std::string id = clip_name(i);
    std::vector<float> mono(n_samples, 0.0f);
    for (float& s : mono) s = static_cast<float>(0.002 * (2.0 * uniform(rng) - 1.0));

    std::vector<io::Event> events;
    if (o.task == TaskKind::clip_class) {
      events.push_back({i % o.classes, 0.0, o.seconds, {}, {}});
    } else if (o.task == TaskKind::clip_tag) {
      for (std::size_t k = 0; k < o.classes; ++k)
        if (uniform(rng) < 0.5) events.push_back({k, 0.0, o.seconds, {}, {}});
      if (events.empty()) events.push_back({i % o.classes, 0.0, o.seconds, {}, {}});
    } else {
      const std::size_t wanted = 1 + pick(rng, 3);
      for (std::size_t tries = 0; events.size() < wanted && tries < 32; ++tries) {
        const std::size_t k = pick(rng, o.classes);
        const auto start = static_cast<double>(pick(rng, whole_seconds));
        const double stop = std::min(o.seconds, start + static_cast<double>(1 + pick(rng, 3)));
        const bool clash = std::any_of(events.begin(), events.end(), [&](const io::Event& e) {
          return e.label == k && start <= e.offset && e.onset <= stop;
        });
        if (!clash) events.push_back({k, start, stop, {}, {}});
      }
      std::sort(events.begin(), events.end(), [](const io::Event& a, const io::Event& b) {
        return a.onset != b.onset ? a.onset < b.onset : a.label < b.label;
      });
    }

    std::vector<bool> present(o.classes, false);
    for (io::Event& e : events) {
      const double amp = 0.15 + 0.15 * uniform(rng);
      const auto begin = static_cast<std::size_t>(std::llround(e.onset * sr));
      const auto end = std::min(n_samples, static_cast<std::size_t>(std::llround(e.offset * sr)));
      render(sigs[e.label], amp, kTwoPi * uniform(rng), mono, begin, end, sr);
      present[e.label] = true;
      if (o.task == TaskKind::seld) {
        const double frac = (static_cast<double>(e.label) + 0.5) / static_cast<double>(o.classes);
        e.azimuth_deg = std::round(-180.0 + 360.0 * frac);
        e.elevation_deg = std::round(-60.0 + 120.0 * frac);
      }
      if (frame_task) sidecar.emplace_back(id, e);
    }

    io::Waveform w(channels, n_samples, kTargetSampleRate);
    for (std::size_t c = 0; c < channels; ++c) std::copy(mono.begin(), mono.end(), w.channel(c).begin());
    io::write_wav(out_dir / "wav" / (id + ".wav"), w);

    std::string labels;
    for (std::size_t k = 0; k < o.classes; ++k) {
      if (!present[k]) continue;
      if (!labels.empty()) labels += ';';
      labels += names[k];
    }
    manifest << id << ",wav/" << id << ".wav,train,," << labels << '\n';
  }

  std::ofstream vocab_file(out_dir / "vocab.txt", std::ios::trunc);
  for (const std::string& n : names) vocab_file << n << '\n';
  if (frame_task) io::write_events(out_dir / "events.csv", sidecar, vocab);
}

}  // namespace listen::app
