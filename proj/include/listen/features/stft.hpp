// include/listen/features/stft.hpp

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

#ifndef LISTEN_FEATURES_STFT_HPP_
#define LISTEN_FEATURES_STFT_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "listen/io/wav.hpp"

namespace listen::features {

enum class PadMode { zero, reflect };

// 1024-sample periodic Hann window, hop 500 at 32 kHz: 64 frames per second.
struct StftConfig {
  std::size_t window_size = 1024;
  std::size_t hop_size = 500;
  std::uint32_t sample_rate = 32000;
  // Pad window/2 samples on both sides and keep floor(n / hop) frames, so
  // a d-second clip yields exactly 64 * d frames. Without centering,
  // frames = 1 + floor((n - window) / hop).
  bool center = true;
  // Zero padding keeps the magnitude peak of a stationary tone at its own
  // bin in the edge frames; reflection folds the signal at the boundary.
  PadMode pad_mode = PadMode::zero;

  std::size_t bins() const { return window_size / 2 + 1; }
  std::size_t frame_count(std::size_t n_samples) const;
};

// Channel-major (channels x frames x bins) array.
struct Spectrogram {
  std::size_t channels = 0;
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> data;

  double at(std::size_t c, std::size_t t, std::size_t b) const {
    return data[(c * frames + t) * bins + b];
  }
};

// |DFT| of each windowed frame; bin b is frequency b * sample_rate / window.
Spectrogram stft_magnitude(const io::Waveform& w, const StftConfig& cfg = {});

std::vector<double> hann_window(std::size_t size);

}  // namespace listen::features

#endif  // LISTEN_FEATURES_STFT_HPP_
