// src/io/wav.cpp

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

#include "listen/io/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "listen/errors.hpp"

namespace listen::io {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

Waveform decode_wav_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE"))
    throw FormatError("not a RIFF/WAVE file");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    // A truncated final data chunk is tolerated by most writers' readers;
    // we clamp it but reject truncated fmt chunks.
    const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
    if (tag_is(bytes, pos, "fmt ")) {
      if (avail < 16) throw FormatError("fmt chunk too short");
      format = read_u16(bytes, body);
      channels = read_u16(bytes, body + 2);
      rate = read_u32(bytes, body + 4);
      bits = read_u16(bytes, body + 14);
      if (format == kFormatExtensible) {
        if (avail < 26) throw FormatError("extensible fmt chunk too short");
        format = read_u16(bytes, body + 24);
      }
      have_fmt = true;
    } else if (tag_is(bytes, pos, "data")) {
      data = bytes.subspan(body, avail);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw FormatError("missing fmt chunk");
  if (!have_data) throw FormatError("missing data chunk");
  if (channels == 0) throw FormatError("zero channels");
  if (rate == 0) throw FormatError("zero sample rate");

  std::size_t width = 0;
  if (format == kFormatPcm && bits == 16) {
    width = 2;
  } else if (format == kFormatFloat && bits == 32) {
    width = 4;
  } else {
    throw UnsupportedCodecError("unsupported WAVE encoding: format " + std::to_string(format) +
                                ", " + std::to_string(bits) + " bits");
  }

  const std::size_t n = data.size() / (width * channels);
  Waveform w(channels, n, rate);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t at = (i * channels + c) * width;
      float v;
      if (width == 2) {
        v = static_cast<float>(static_cast<std::int16_t>(read_u16(data, at))) / 32768.0f;
      } else {
        const std::uint32_t raw = read_u32(data, at);
        std::memcpy(&v, &raw, 4);
      }
      w.samples[c * n + i] = v;
    }
  }
  return w;
}

Waveform decode_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_wav_bytes(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav_bytes(const Waveform& w, SampleEncoding encoding) {
  const std::size_t n = w.length();
  const std::uint16_t width = encoding == SampleEncoding::pcm16 ? 2 : 4;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(n * w.channels * width);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, encoding == SampleEncoding::pcm16 ? kFormatPcm : kFormatFloat);
  put_u16(out, static_cast<std::uint16_t>(w.channels));
  put_u32(out, w.sample_rate);
  put_u32(out, w.sample_rate * static_cast<std::uint32_t>(w.channels) * width);
  put_u16(out, static_cast<std::uint16_t>(w.channels * width));
  put_u16(out, static_cast<std::uint16_t>(8 * width));
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < w.channels; ++c) {
      const float v = w.samples[c * n + i];
      if (encoding == SampleEncoding::pcm16) {
        const double scaled = std::nearbyint(static_cast<double>(v) * 32768.0);
        const auto q = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
        put_u16(out, static_cast<std::uint16_t>(q));
      } else {
        std::uint32_t raw;
        std::memcpy(&raw, &v, 4);
        put_u32(out, raw);
      }
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const Waveform& w, SampleEncoding encoding) {
  const auto bytes = encode_wav_bytes(w, encoding);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Waveform downmix_to_mono(const Waveform& w) {
  if (w.channels <= 1) return w;
  const std::size_t n = w.length();
  Waveform mono(1, n, w.sample_rate);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < w.channels; ++c) acc += w.samples[c * n + i];
    mono.samples[i] = static_cast<float>(acc / static_cast<double>(w.channels));
  }
  return mono;
}

}  // namespace listen::io
