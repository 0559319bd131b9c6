// src/features/stft.cpp

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

#include "listen/features/stft.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>

#include "listen/errors.hpp"

namespace listen::features {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    in_ = fftw_alloc_real(n);
    out_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* input() { return in_; }
  void run() { fftw_execute(plan_); }
  double magnitude(std::size_t b) const { return std::hypot(out_[b][0], out_[b][1]); }

 private:
  std::size_t n_;
  double* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan plan_ = nullptr;
};

// Mirror index without repeating the edge sample, folded until in range.
std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  i %= period;
  if (i < 0) i += period;
  return static_cast<std::size_t>(i < static_cast<std::ptrdiff_t>(n) ? i : period - i);
}

}  // namespace

std::size_t StftConfig::frame_count(std::size_t n_samples) const {
  if (center) return n_samples / hop_size;
  if (n_samples < window_size) return 0;
  return 1 + (n_samples - window_size) / hop_size;
}

std::vector<double> hann_window(std::size_t size) {
  std::vector<double> w(size);
  for (std::size_t i = 0; i < size; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / size);
  return w;
}

Spectrogram stft_magnitude(const io::Waveform& w, const StftConfig& cfg) {
  if (cfg.window_size < 2 || cfg.hop_size == 0) throw ConfigError("invalid STFT configuration");
  if (w.sample_rate != cfg.sample_rate)
    throw InvalidInputError("stft: waveform rate " + std::to_string(w.sample_rate) +
                            " does not match configured " + std::to_string(cfg.sample_rate));
  const std::size_t n = w.length();
  Spectrogram s;
  s.channels = w.channels;
  s.frames = cfg.frame_count(n);
  s.bins = cfg.bins();
  s.data.assign(s.channels * s.frames * s.bins, 0.0);
  if (s.frames == 0) return s;

  const std::vector<double> window = hann_window(cfg.window_size);
  const auto pad = static_cast<std::ptrdiff_t>(cfg.center ? cfg.window_size / 2 : 0);
  RealFft fft(cfg.window_size);
  for (std::size_t c = 0; c < w.channels; ++c) {
    const auto x = w.channel(c);
    for (std::size_t t = 0; t < s.frames; ++t) {
      const std::ptrdiff_t origin = static_cast<std::ptrdiff_t>(t * cfg.hop_size) - pad;
      double* in = fft.input();
      for (std::size_t i = 0; i < cfg.window_size; ++i) {
        const std::ptrdiff_t at = origin + static_cast<std::ptrdiff_t>(i);
        const bool inside = at >= 0 && at < static_cast<std::ptrdiff_t>(n);
        if (inside) {
          in[i] = window[i] * x[static_cast<std::size_t>(at)];
        } else {
          in[i] = cfg.pad_mode == PadMode::zero ? 0.0 : window[i] * x[reflect(at, n)];
        }
      }
      fft.run();
      double* row = s.data.data() + (c * s.frames + t) * s.bins;
      for (std::size_t b = 0; b < s.bins; ++b) row[b] = fft.magnitude(b);
    }
  }
  return s;
}

}  // namespace listen::features
