// include/listen/features/logmel.hpp

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

#ifndef LISTEN_FEATURES_LOGMEL_HPP_
#define LISTEN_FEATURES_LOGMEL_HPP_

#include <cstddef>
#include <vector>

#include "listen/features/mel.hpp"
#include "listen/features/stft.hpp"
#include "listen/io/wav.hpp"

namespace listen::features {

// (channels x frames x mels) block of log10 mel power, C-order.
struct LogMelSpectrogram {
  std::size_t channels = 0;
  std::size_t frames = 0;
  std::size_t mels = 0;
  double frame_rate = 64.0;
  std::vector<float> data;

  float& at(std::size_t c, std::size_t t, std::size_t m) { return data[(c * frames + t) * mels + m]; }
  float at(std::size_t c, std::size_t t, std::size_t m) const {
    return data[(c * frames + t) * mels + m];
  }
};

// Applies a precomputed filterbank to |STFT|^2 and takes
// log10(max(power, floor)).
LogMelSpectrogram logmel(const io::Waveform& w, const StftConfig& stft_cfg, const MelFilterbank& bank,
                         double log_floor);

LogMelSpectrogram logmel(const io::Waveform& w, const StftConfig& stft_cfg = {},
                         const MelConfig& mel_cfg = {});

// Mel-band power (before the logarithm), same layout as LogMelSpectrogram.
std::vector<double> mel_power(const Spectrogram& magnitude, const MelFilterbank& bank);

}  // namespace listen::features

#endif  // LISTEN_FEATURES_LOGMEL_HPP_
