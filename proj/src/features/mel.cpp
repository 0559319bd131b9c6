// src/features/mel.cpp

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

#include "listen/features/mel.hpp"

#include <algorithm>
#include <cmath>

#include "listen/errors.hpp"

namespace listen::features {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank mel_filterbank(const MelConfig& cfg, std::size_t stft_bins, std::uint32_t sample_rate) {
  if (cfg.n_mels < 1) throw ConfigError("mel filterbank needs at least one band");
  if (stft_bins < 2) throw ConfigError("mel filterbank needs at least two STFT bins");
  const double nyquist = sample_rate / 2.0;
  if (!(cfg.f_min >= 0.0 && cfg.f_min < cfg.f_max && cfg.f_max <= nyquist))
    throw ConfigError("mel band edges must satisfy 0 <= f_min < f_max <= sample_rate / 2");

  MelFilterbank fb;
  fb.n_mels = cfg.n_mels;
  fb.bins = stft_bins;
  fb.weights.assign(fb.n_mels * fb.bins, 0.0);
  fb.edges_hz.resize(fb.n_mels + 2);
  const double lo = hz_to_mel(cfg.f_min);
  const double hi = hz_to_mel(cfg.f_max);
  for (std::size_t i = 0; i < fb.edges_hz.size(); ++i)
    fb.edges_hz[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / (cfg.n_mels + 1));

  // Bin b sits at b * sr / n_fft with n_fft = 2 * (bins - 1).
  const double bin_hz = nyquist / static_cast<double>(stft_bins - 1);
  for (std::size_t m = 0; m < fb.n_mels; ++m) {
    const double left = fb.edges_hz[m], centre = fb.edges_hz[m + 1], right = fb.edges_hz[m + 2];
    const double scale = cfg.area_normalize ? 2.0 / (right - left) : 1.0;
    for (std::size_t b = 0; b < fb.bins; ++b) {
      const double f = bin_hz * static_cast<double>(b);
      const double rising = (f - left) / (centre - left);
      const double falling = (right - f) / (right - centre);
      fb.weights[m * fb.bins + b] = scale * std::max(0.0, std::min(rising, falling));
    }
  }
  return fb;
}

}  // namespace listen::features
