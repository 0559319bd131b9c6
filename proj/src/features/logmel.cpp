// src/features/logmel.cpp

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

#include "listen/features/logmel.hpp"

#include <algorithm>
#include <cmath>

#include "listen/errors.hpp"

namespace listen::features {

std::vector<double> mel_power(const Spectrogram& magnitude, const MelFilterbank& bank) {
  if (bank.bins != magnitude.bins) throw ShapeError("filterbank and spectrogram bin counts differ");
  const std::size_t rows = magnitude.channels * magnitude.frames;
  std::vector<double> out(rows * bank.n_mels, 0.0);
  std::vector<double> power(magnitude.bins);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* mag = magnitude.data.data() + r * magnitude.bins;
    for (std::size_t b = 0; b < magnitude.bins; ++b) power[b] = mag[b] * mag[b];
    for (std::size_t m = 0; m < bank.n_mels; ++m) {
      const double* wrow = bank.weights.data() + m * bank.bins;
      double acc = 0.0;
      for (std::size_t b = 0; b < bank.bins; ++b) acc += wrow[b] * power[b];
      out[r * bank.n_mels + m] = acc;
    }
  }
  return out;
}

LogMelSpectrogram logmel(const io::Waveform& w, const StftConfig& stft_cfg, const MelFilterbank& bank,
                         double log_floor) {
  if (!(log_floor > 0.0)) throw ConfigError("log floor must be positive");
  const Spectrogram mag = stft_magnitude(w, stft_cfg);
  const std::vector<double> power = mel_power(mag, bank);
  LogMelSpectrogram out;
  out.channels = mag.channels;
  out.frames = mag.frames;
  out.mels = bank.n_mels;
  out.frame_rate = static_cast<double>(stft_cfg.sample_rate) / static_cast<double>(stft_cfg.hop_size);
  out.data.resize(power.size());
  std::transform(power.begin(), power.end(), out.data.begin(), [&](double p) {
    return static_cast<float>(std::log10(std::max(p, log_floor)));
  });
  return out;
}

LogMelSpectrogram logmel(const io::Waveform& w, const StftConfig& stft_cfg, const MelConfig& mel_cfg) {
  const MelFilterbank bank = mel_filterbank(mel_cfg, stft_cfg.bins(), stft_cfg.sample_rate);
  return logmel(w, stft_cfg, bank, mel_cfg.log_floor);
}

}  // namespace listen::features
