// include/listen/io/resample.hpp

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

#ifndef LISTEN_IO_RESAMPLE_HPP_
#define LISTEN_IO_RESAMPLE_HPP_

#include <cstdint>

#include "listen/io/wav.hpp"

namespace listen::io {

// Band-limited rational-ratio resampler (Kaiser-windowed sinc, polyphase).
// Output length is floor(length * target_rate / sample_rate). Returns an
// exact copy when the rates already match.
Waveform resample(const Waveform& w, std::uint32_t target_rate);

}  // namespace listen::io

#endif  // LISTEN_IO_RESAMPLE_HPP_
