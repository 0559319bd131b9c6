// include/listen/features/mel.hpp

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

#ifndef LISTEN_FEATURES_MEL_HPP_
#define LISTEN_FEATURES_MEL_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace listen::features {

struct MelConfig {
  std::size_t n_mels = 64;
  double f_min = 50.0;
  double f_max = 14000.0;
  double log_floor = 1e-10;
  // Scale each triangle by 2 / (upper edge - lower edge) so filters have
  // equal area.
  bool area_normalize = true;
};

// HTK mel scale: 2595 * log10(1 + f / 700).
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Row-major (n_mels x bins) matrix.
struct MelFilterbank {
  std::size_t n_mels = 0;
  std::size_t bins = 0;
  std::vector<double> weights;
  // n_mels + 2 edge frequencies; filter m peaks at edges[m + 1].
  std::vector<double> edges_hz;

  double at(std::size_t m, std::size_t b) const { return weights[m * bins + b]; }
  double center_hz(std::size_t m) const { return edges_hz[m + 1]; }
};

// Triangular filters with centres uniformly spaced in mel between f_min and
// f_max. Throws ConfigError for n_mels < 1 or a band outside [0, sr/2].
MelFilterbank mel_filterbank(const MelConfig& cfg, std::size_t stft_bins, std::uint32_t sample_rate);

}  // namespace listen::features

#endif  // LISTEN_FEATURES_MEL_HPP_
