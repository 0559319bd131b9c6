// include/listen/features/store.hpp

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

#ifndef LISTEN_FEATURES_STORE_HPP_
#define LISTEN_FEATURES_STORE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "listen/features/logmel.hpp"

namespace listen::features {

// On-disk layout: "LMEL", u32 version, u32 channels, u32 frames, u32 mels,
// then channels*frames*mels little-endian f32 values in C order.
inline constexpr std::uint32_t kFeatureStoreVersion = 1;

std::vector<std::uint8_t> encode_features(const LogMelSpectrogram& s);
// Throws MagicMismatchError or TruncatedError.
LogMelSpectrogram decode_features(std::span<const std::uint8_t> bytes);

void write_features(const std::filesystem::path& path, const LogMelSpectrogram& s);
LogMelSpectrogram read_features(const std::filesystem::path& path);

}  // namespace listen::features

#endif  // LISTEN_FEATURES_STORE_HPP_
