// tests/test_features.cpp

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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "listen/errors.hpp"
#include "listen/features/logmel.hpp"
#include "listen/features/mel.hpp"
#include "listen/features/stft.hpp"
#include "listen/features/store.hpp"
#include "support/oracles.hpp"
#include "support/tempdir.hpp"

namespace {

using namespace listen;
using namespace listen::features;

io::Waveform tone(double freq, double seconds, double amp = 1.0, std::uint32_t rate = 32000) {
  const auto n = static_cast<std::size_t>(std::llround(seconds * rate));
  io::Waveform w(1, n, rate);
  for (std::size_t i = 0; i < n; ++i)
    w.samples[i] = static_cast<float>(amp * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / rate));
  return w;
}

TEST(Stft, FrameCounts) {
  StftConfig uncentered;
  uncentered.center = false;
  EXPECT_EQ(stft_magnitude(tone(100.0, 1.0), uncentered).frames, 62u);
  EXPECT_EQ(stft_magnitude(tone(100.0, 1.0)).frames, 64u);
  EXPECT_EQ(stft_magnitude(tone(100.0, 10.0)).frames, 640u);
  EXPECT_EQ(stft_magnitude(tone(100.0, 1.0)).bins, 513u);
  io::Waveform tiny(1, 700, 32000);
  EXPECT_EQ(stft_magnitude(tiny, uncentered).frames, 0u);
}

TEST(Stft, SixtyFourFramesPerWholeSecond) {
  for (int d = 1; d <= 5; ++d) EXPECT_EQ(StftConfig{}.frame_count(32000u * static_cast<unsigned>(d)), 64u * d);
}

TEST(Stft, OneKilohertzPeaksAtBin32) {
  StftConfig uncentered;
  uncentered.center = false;
  for (const StftConfig& cfg : {StftConfig{}, uncentered}) {
    const Spectrogram s = stft_magnitude(tone(1000.0, 1.0), cfg);
    for (std::size_t t = 0; t < s.frames; ++t) {
      std::vector<double> frame(s.bins);
      for (std::size_t b = 0; b < s.bins; ++b) frame[b] = s.at(0, t, b);
      EXPECT_EQ(oracle::argmax(frame), 32u) << "frame " << t;
    }
  }
}

TEST(Stft, SilenceGivesZeros) {
  const Spectrogram s = stft_magnitude(io::Waveform(2, 32000, 32000));
  for (double v : s.data) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(s.channels, 2u);
}

TEST(Stft, MatchesDirectDftOfWindowedFrames) {
  std::mt19937_64 rng(2);
  std::normal_distribution<float> g(0.0f, 0.3f);
  io::Waveform w(1, 6000, 32000);
  for (float& x : w.samples) x = g(rng);
  StftConfig cfg;
  cfg.center = false;
  const Spectrogram s = stft_magnitude(w, cfg);
  std::vector<double> window(1024);
  for (std::size_t i = 0; i < 1024; ++i)
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / 1024.0);
  for (std::size_t t = 0; t < s.frames; t += 3) {
    std::vector<double> frame(1024);
    for (std::size_t i = 0; i < 1024; ++i) frame[i] = w.samples[t * 500 + i] * window[i];
    const auto ref = oracle::dft_magnitude(frame);
    for (std::size_t b = 0; b < 513; ++b) EXPECT_NEAR(s.at(0, t, b), ref[b], 1e-9 * (1.0 + ref[b]));
  }
}

TEST(Stft, CenteredFrameIsZeroPadded) {
  std::mt19937_64 rng(4);
  std::normal_distribution<float> g(0.0f, 0.3f);
  io::Waveform w(1, 4000, 32000);
  for (float& x : w.samples) x = g(rng);
  const Spectrogram s = stft_magnitude(w);
  std::vector<double> frame(1024, 0.0);
  for (std::size_t i = 512; i < 1024; ++i) {
    const double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / 1024.0);
    frame[i] = w.samples[i - 512] * hann;
  }
  const auto ref = oracle::dft_magnitude(frame);
  for (std::size_t b = 0; b < 513; ++b) EXPECT_NEAR(s.at(0, 0, b), ref[b], 1e-9 * (1.0 + ref[b]));
}

TEST(Stft, CenteredFrameCanBeReflectPadded) {
  std::mt19937_64 rng(4);
  std::normal_distribution<float> g(0.0f, 0.3f);
  io::Waveform w(1, 4000, 32000);
  for (float& x : w.samples) x = g(rng);
  StftConfig cfg;
  cfg.pad_mode = PadMode::reflect;
  const Spectrogram s = stft_magnitude(w, cfg);
  // Frame 0 is centred on sample 0: x[512], ..., x[1], x[0], x[1], ..., x[511].
  std::vector<double> frame(1024);
  for (std::size_t i = 0; i < 1024; ++i) {
    const long idx = static_cast<long>(i) - 512;
    const double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / 1024.0);
    frame[i] = w.samples[static_cast<std::size_t>(std::labs(idx))] * hann;
  }
  const auto ref = oracle::dft_magnitude(frame);
  for (std::size_t b = 0; b < 513; ++b) EXPECT_NEAR(s.at(0, 0, b), ref[b], 1e-9 * (1.0 + ref[b]));
}

TEST(Stft, RateMismatchRejected) {
  EXPECT_THROW(stft_magnitude(tone(100.0, 0.1, 1.0, 16000)), InvalidInputError);
}

TEST(Stft, HannIsPeriodic) {
  const auto w = hann_window(1024);
  EXPECT_EQ(w[0], 0.0);
  EXPECT_NEAR(w[512], 1.0, 1e-15);
  for (std::size_t i = 1; i < 512; ++i) EXPECT_NEAR(w[i], w[1024 - i], 1e-15);
}

TEST(Mel, HtkScale) {
  EXPECT_NEAR(hz_to_mel(700.0), 2595.0 * std::log10(2.0), 1e-9);
  for (double f : {0.0, 50.0, 1000.0, 14000.0}) EXPECT_NEAR(mel_to_hz(hz_to_mel(f)), f, 1e-9);
}

TEST(Mel, FilterbankShape) {
  const MelFilterbank fb = mel_filterbank(MelConfig{}, 513, 32000);
  ASSERT_EQ(fb.n_mels, 64u);
  ASSERT_EQ(fb.bins, 513u);
  for (std::size_t m = 0; m < 64; ++m) {
    std::size_t peaks = 0;
    double row_sum = 0.0;
    for (std::size_t b = 0; b < 513; ++b) {
      const double v = fb.at(m, b);
      EXPECT_GE(v, 0.0);
      row_sum += v;
      const double left = b > 0 ? fb.at(m, b - 1) : 0.0;
      const double right = b + 1 < 513 ? fb.at(m, b + 1) : 0.0;
      if (v > 0.0 && v >= left && v > right) ++peaks;
    }
    EXPECT_EQ(peaks, 1u) << "filter " << m;
    EXPECT_GT(row_sum, 0.0) << "filter " << m;
    EXPECT_TRUE(std::isfinite(row_sum));
    if (m > 0) EXPECT_GT(fb.center_hz(m), fb.center_hz(m - 1));
  }
  EXPECT_NEAR(fb.edges_hz.front(), 50.0, 1e-9);
  EXPECT_NEAR(fb.edges_hz.back(), 14000.0, 1e-6);
}

TEST(Mel, CentresUniformInMel) {
  const MelFilterbank fb = mel_filterbank(MelConfig{}, 513, 32000);
  const double step = (hz_to_mel(14000.0) - hz_to_mel(50.0)) / 65.0;
  for (std::size_t i = 0; i < fb.edges_hz.size(); ++i)
    EXPECT_NEAR(hz_to_mel(fb.edges_hz[i]), hz_to_mel(50.0) + step * static_cast<double>(i), 1e-6);
}

TEST(Mel, AreaNormalisedRowSumsDiffer) {
  const MelFilterbank fb = mel_filterbank(MelConfig{}, 513, 32000);
  std::vector<double> sums(64, 0.0);
  for (std::size_t m = 0; m < 64; ++m)
    for (std::size_t b = 0; b < 513; ++b) sums[m] += fb.at(m, b);
  EXPECT_NE(*std::min_element(sums.begin(), sums.end()), *std::max_element(sums.begin(), sums.end()));
}

TEST(Mel, InvalidConfigs) {
  MelConfig none;
  none.n_mels = 0;
  EXPECT_THROW(mel_filterbank(none, 513, 32000), ConfigError);
  MelConfig high;
  high.f_max = 20000.0;
  EXPECT_THROW(mel_filterbank(high, 513, 32000), ConfigError);
  MelConfig inverted;
  inverted.f_min = 5000.0;
  inverted.f_max = 4000.0;
  EXPECT_THROW(mel_filterbank(inverted, 513, 32000), ConfigError);
}

TEST(Mel, ToneAtCentreRespondsMostInItsFilter) {
  const MelFilterbank fb = mel_filterbank(MelConfig{}, 513, 32000);
  // Filters narrower than the 31.25 Hz bin spacing cannot resolve a tone
  // through the STFT; those are checked against a line spectrum instead.
  for (std::size_t m = 0; m < 64; ++m) {
    const double fc = fb.center_hz(m);
    std::vector<double> line(513, 0.0);
    const double pos = fc / 31.25;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    line[lo] = 1.0 - (pos - static_cast<double>(lo));
    line[lo + 1] = pos - static_cast<double>(lo);
    std::vector<double> response(64, 0.0);
    for (std::size_t r = 0; r < 64; ++r)
      for (std::size_t b = 0; b < 513; ++b) response[r] += fb.at(r, b) * line[b];
    EXPECT_EQ(oracle::argmax(response), m) << "line spectrum, filter " << m;

    if (fb.edges_hz[m + 2] - fb.edges_hz[m] < 4 * 31.25) continue;
    const Spectrogram s = stft_magnitude(tone(fc, 0.1));
    const auto power = mel_power(s, fb);
    std::vector<double> frame(power.begin() + 3 * 64, power.begin() + 4 * 64);
    EXPECT_EQ(oracle::argmax(frame), m) << "tone, filter " << m;
  }
}

TEST(LogMel, TenSecondsIs640By64) {
  const LogMelSpectrogram s = logmel(tone(1000.0, 10.0, 0.5));
  EXPECT_EQ(s.channels, 1u);
  EXPECT_EQ(s.frames, 640u);
  EXPECT_EQ(s.mels, 64u);
  EXPECT_EQ(s.frame_rate, 64.0);
  for (float v : s.data) EXPECT_TRUE(std::isfinite(v));
}

TEST(LogMel, SilenceIsTheFloor) {
  const LogMelSpectrogram s = logmel(io::Waveform(1, 16000, 32000));
  for (float v : s.data) EXPECT_EQ(v, -10.0f);
}

TEST(LogMel, AmplitudeTimesTenAddsTwo) {
  std::mt19937_64 rng(6);
  std::normal_distribution<float> g(0.0f, 0.05f);
  io::Waveform w(1, 16000, 32000);
  for (float& x : w.samples) x = g(rng);
  io::Waveform loud = w;
  for (float& x : loud.samples) x *= 10.0f;
  const LogMelSpectrogram a = logmel(w), b = logmel(loud);
  for (std::size_t i = 0; i < a.data.size(); ++i)
    if (a.data[i] > -9.0f) EXPECT_NEAR(b.data[i] - a.data[i], 2.0f, 1e-4f);
}

TEST(LogMel, PowerScalesWithSquaredAmplitude) {
  const MelFilterbank fb = mel_filterbank(MelConfig{}, 513, 32000);
  auto total = [&](double amp) {
    const auto p = mel_power(stft_magnitude(tone(1234.0, 1.0, amp)), fb);
    double acc = 0.0;
    for (double v : p) acc += v;
    return acc;
  };
  const double ratio = total(1.0) / total(0.1);
  EXPECT_NEAR(ratio, 100.0, 1.0);
}

TEST(LogMel, ChannelsStayApart) {
  io::Waveform w(2, 8000, 32000);
  const auto a = tone(500.0, 0.25), b = tone(4000.0, 0.25);
  std::copy(a.samples.begin(), a.samples.end(), w.channel(0).begin());
  std::copy(b.samples.begin(), b.samples.end(), w.channel(1).begin());
  const LogMelSpectrogram s = logmel(w), sa = logmel(a), sb = logmel(b);
  ASSERT_EQ(s.channels, 2u);
  for (std::size_t t = 0; t < s.frames; ++t)
    for (std::size_t m = 0; m < 64; ++m) {
      EXPECT_EQ(s.at(0, t, m), sa.at(0, t, m));
      EXPECT_EQ(s.at(1, t, m), sb.at(0, t, m));
    }
}

TEST(Store, RoundTripIsBitIdentical) {
  testing_support::TempDir dir;
  std::mt19937_64 rng(1);
  LogMelSpectrogram s;
  s.channels = 2;
  s.frames = 37;
  s.mels = 64;
  s.data.resize(2 * 37 * 64);
  for (float& v : s.data) v = std::bit_cast<float>(static_cast<std::uint32_t>(rng() % 0x7f800000u));
  write_features(dir.path() / "x.lmel", s);
  const LogMelSpectrogram back = read_features(dir.path() / "x.lmel");
  EXPECT_EQ(back.channels, 2u);
  EXPECT_EQ(back.frames, 37u);
  EXPECT_EQ(back.mels, 64u);
  ASSERT_EQ(back.data.size(), s.data.size());
  EXPECT_EQ(std::memcmp(back.data.data(), s.data.data(), s.data.size() * 4), 0);
}

TEST(Store, LayoutIsDocumented) {
  LogMelSpectrogram s;
  s.channels = 1;
  s.frames = 1;
  s.mels = 2;
  s.data = {1.0f, -2.0f};
  const auto bytes = encode_features(s);
  ASSERT_EQ(bytes.size(), 4u + 16u + 8u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "LMEL");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[16], 2);
  float second;
  std::memcpy(&second, bytes.data() + 24, 4);
  EXPECT_EQ(second, -2.0f);
}

TEST(Store, CorruptionDetected) {
  LogMelSpectrogram s;
  s.channels = 1;
  s.frames = 3;
  s.mels = 4;
  s.data.assign(12, 0.5f);
  auto bytes = encode_features(s);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_features(bad_magic), MagicMismatchError);
  bytes.resize(bytes.size() - 3);
  EXPECT_THROW(decode_features(bytes), TruncatedError);
  EXPECT_THROW(decode_features(std::vector<std::uint8_t>{'L', 'M'}), TruncatedError);
}

}  // namespace
