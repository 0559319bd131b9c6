// include/listen/nn/checkpoint.hpp

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

#ifndef LISTEN_NN_CHECKPOINT_HPP_
#define LISTEN_NN_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "listen/nn/tensor.hpp"

namespace listen::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedArray {
  std::string name;
  Shape shape;
  std::vector<float> values;
};

// "CKPT", u32 version, u32 entry count, then per entry: u32 name length,
// name bytes, u32 rank, rank x u32 dims, f32 payload. Optimizer moments
// ride along as ordinary entries ("adam.m/<param>", "adam.v/<param>",
// "adam.step").
std::vector<std::uint8_t> encode_checkpoint(std::span<const NamedArray> entries);
std::vector<NamedArray> decode_checkpoint(std::span<const std::uint8_t> bytes);

void write_checkpoint(const std::filesystem::path& path, std::span<const NamedArray> entries);
std::vector<NamedArray> read_checkpoint(const std::filesystem::path& path);

}  // namespace listen::nn

#endif  // LISTEN_NN_CHECKPOINT_HPP_
