// include/listen/io/wav.hpp

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

#ifndef LISTEN_IO_WAV_HPP_
#define LISTEN_IO_WAV_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace listen::io {

// Multi-channel PCM audio. Samples are stored channel-major, so channel c
// occupies samples[c * length() .. (c + 1) * length()).
struct Waveform {
  std::size_t channels = 1;
  std::uint32_t sample_rate = 0;
  std::vector<float> samples;

  Waveform() = default;
  Waveform(std::size_t n_channels, std::size_t n_samples, std::uint32_t rate)
      : channels(n_channels), sample_rate(rate), samples(n_channels * n_samples, 0.0f) {}

  std::size_t length() const { return channels == 0 ? 0 : samples.size() / channels; }
  double duration_seconds() const {
    return sample_rate == 0 ? 0.0 : static_cast<double>(length()) / sample_rate;
  }
  std::span<const float> channel(std::size_t c) const {
    return {samples.data() + c * length(), length()};
  }
  std::span<float> channel(std::size_t c) { return {samples.data() + c * length(), length()}; }
};

enum class SampleEncoding { pcm16, float32 };

// Parses a RIFF/WAVE byte image. Accepts 16-bit PCM and 32-bit IEEE float,
// including WAVE_FORMAT_EXTENSIBLE wrappers of either. int16 samples are
// divided by 32768.
Waveform decode_wav_bytes(std::span<const std::uint8_t> bytes);
Waveform decode_wav(const std::filesystem::path& path);

// Inverse of decode_wav. pcm16 rounds x * 32768 to nearest and saturates.
std::vector<std::uint8_t> encode_wav_bytes(const Waveform& w,
                                           SampleEncoding encoding = SampleEncoding::pcm16);
void write_wav(const std::filesystem::path& path, const Waveform& w,
               SampleEncoding encoding = SampleEncoding::pcm16);

// Channel average; a mono input is returned unchanged.
Waveform downmix_to_mono(const Waveform& w);

}  // namespace listen::io

#endif  // LISTEN_IO_WAV_HPP_
