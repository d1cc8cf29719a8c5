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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gciforge/representations.hpp"
#include "gciforge/types.hpp"

namespace gciforge {

// Aligned 16-sample frames across the four representations with binary
// labels. frames[r] row f is samples [16f, 16f+16) of representation r;
// label[f] == 1 iff a reference mark falls in that interval.
struct FrameDataset {
  static constexpr int kFrameLen = 16;

  std::array<Eigen::MatrixXd, kNumRepresentations> frames;
  Eigen::ArrayXi labels;
  std::vector<int> recording_index;       // per frame
  std::vector<std::string> recording_ids;

  int n_frames() const { return static_cast<int>(labels.size()); }
  void append(const FrameDataset& other);
};

// Non-overlapping chunking; the trailing partial frame is discarded.
FrameDataset frame_and_label(const RepresentationSet& reps, const GciMarks& marks,
                             const std::string& recording_id = "");

struct CorpusSplit {
  std::vector<std::string> train, val, test;
};

// File-level split: deterministic shuffle by seed, then counts
// round(n * fraction) for train and val, remainder test.
CorpusSplit split_corpus(const std::vector<std::string>& ids,
                         double train_fraction, double val_fraction,
                         std::uint64_t seed);

void write_split(const std::string& path, const CorpusSplit& split);
CorpusSplit read_split(const std::string& path);

// Corpus manifest: one tab-separated record per recording.
struct ManifestEntry {
  std::string id;
  std::string wav_path;
  std::string marks_path;
  std::string disorder_label;
  std::uint64_t seed = 0;
};

void write_manifest(const std::string& path,
                    const std::vector<ManifestEntry>& entries);
// Relative paths in the manifest are resolved against its directory.
std::vector<ManifestEntry> read_manifest(const std::string& path);

}  // namespace gciforge
