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

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace gciforge {

// One-dimensional sample sequence; array semantics so element-wise
// expressions compose naturally.
using Signal = Eigen::ArrayXd;

// All pipeline processing happens on this rate.
inline constexpr int kPipelineRateHz = 16000;

enum class ChannelRole { Speech, Egg };

struct Waveform {
  Signal samples;
  int sample_rate_hz = 0;
  ChannelRole role = ChannelRole::Speech;
};

enum class MarkSource { EggReference, Detector, Synthetic };

std::string to_string(MarkSource s);
MarkSource mark_source_from_string(const std::string& s);

// Glottal closure instants for one recording: strictly increasing sample
// indices on the 16 kHz timeline.
struct GciMarks {
  std::vector<int> positions;
  MarkSource source = MarkSource::Detector;

  int size() const { return static_cast<int>(positions.size()); }
  bool empty() const { return positions.empty(); }
};

// Mark file format: header line "# rate=16000 source=<...>", then one
// sample index per line, sorted ascending.
void write_marks(const std::string& path, const GciMarks& marks,
                 int rate_hz = kPipelineRateHz);
GciMarks read_marks(const std::string& path, int* rate_hz = nullptr);

}  // namespace gciforge
