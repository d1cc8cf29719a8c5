// Copyright 2026 The gciforge authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>

#include "gciforge/types.hpp"

namespace gciforge {

struct WavContents {
  Waveform speech;                // channel 0
  std::optional<Waveform> egg;    // channel 1 when present
};

// RIFF WAVE reader: PCM 16-bit or IEEE float 32-bit, mono or 2-channel,
// any sample rate. Channel convention: ch0 = speech, ch1 = EGG.
// Integer PCM is scaled to [-1, 1) by 2^(bits-1).
// Throws std::runtime_error on unreadable files, unsupported encodings,
// or zero-length audio.
WavContents read_wav(const std::string& path);

// 16-bit PCM writer, mono or 2-channel (egg == nullptr for mono).
// Samples are clamped to [-1, 1) and rounded. Written atomically.
void write_wav(const std::string& path, const Signal& speech,
               const Signal* egg, int sample_rate_hz);

}  // namespace gciforge
