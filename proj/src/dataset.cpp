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

#include "gciforge/dataset.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gciforge/io_util.hpp"
#include "gciforge/rng.hpp"

namespace gciforge {

void FrameDataset::append(const FrameDataset& other) {
  const int offset = static_cast<int>(recording_ids.size());
  recording_ids.insert(recording_ids.end(), other.recording_ids.begin(),
                       other.recording_ids.end());
  for (int idx : other.recording_index) recording_index.push_back(idx + offset);

  const int old_n = n_frames();
  const int new_n = old_n + other.n_frames();
  for (int r = 0; r < kNumRepresentations; ++r) {
    Eigen::MatrixXd merged(new_n, kFrameLen);
    if (old_n > 0) merged.topRows(old_n) = frames[r];
    merged.bottomRows(other.n_frames()) = other.frames[r];
    frames[r] = std::move(merged);
  }
  Eigen::ArrayXi merged_labels(new_n);
  if (old_n > 0) merged_labels.head(old_n) = labels;
  merged_labels.tail(other.n_frames()) = other.labels;
  labels = std::move(merged_labels);
}

FrameDataset frame_and_label(const RepresentationSet& reps, const GciMarks& marks,
                             const std::string& recording_id) {
  const Eigen::Index len = reps.length();
  for (int m : marks.positions) {
    if (m < 0 || m >= len) {
      throw std::invalid_argument("frame_and_label: mark outside signal");
    }
  }
  const int n = static_cast<int>(len / FrameDataset::kFrameLen);

  FrameDataset ds;
  ds.recording_ids.push_back(recording_id);
  ds.recording_index.assign(n, 0);
  ds.labels = Eigen::ArrayXi::Zero(n);
  for (int m : marks.positions) {
    const int f = m / FrameDataset::kFrameLen;
    if (f < n) ds.labels[f] = 1;
  }
  for (int r = 0; r < kNumRepresentations; ++r) {
    const Signal& s = reps.by_index(r);
    ds.frames[r].resize(n, FrameDataset::kFrameLen);
    for (int f = 0; f < n; ++f) {
      ds.frames[r].row(f) =
          s.segment(static_cast<Eigen::Index>(f) * FrameDataset::kFrameLen,
                    FrameDataset::kFrameLen)
              .matrix()
              .transpose();
    }
  }
  return ds;
}

CorpusSplit split_corpus(const std::vector<std::string>& ids,
                         double train_fraction, double val_fraction,
                         std::uint64_t seed) {
  if (ids.size() < 3) {
    throw std::invalid_argument("split_corpus: need at least 3 recordings");
  }
  if (!(train_fraction > 0.0 && val_fraction > 0.0 &&
        train_fraction + val_fraction < 1.0)) {
    throw std::invalid_argument("split_corpus: fractions must be in (0,1) and sum < 1");
  }

  std::vector<std::string> shuffled = ids;
  Rng rng(seed);
  rng.shuffle(shuffled);

  const int n = static_cast<int>(shuffled.size());
  int n_train = static_cast<int>(std::llround(n * train_fraction));
  int n_val = static_cast<int>(std::llround(n * val_fraction));
  n_train = std::max(1, std::min(n_train, n - 2));
  n_val = std::max(1, std::min(n_val, n - n_train - 1));

  CorpusSplit split;
  split.train.assign(shuffled.begin(), shuffled.begin() + n_train);
  split.val.assign(shuffled.begin() + n_train, shuffled.begin() + n_train + n_val);
  split.test.assign(shuffled.begin() + n_train + n_val, shuffled.end());
  return split;
}

void write_split(const std::string& path, const CorpusSplit& split) {
  std::ostringstream out;
  for (const auto& id : split.train) out << "train\t" << id << "\n";
  for (const auto& id : split.val) out << "val\t" << id << "\n";
  for (const auto& id : split.test) out << "test\t" << id << "\n";
  write_file_atomic(path, out.str());
}

CorpusSplit read_split(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open split file: " + path);
  CorpusSplit split;
  std::string role, id;
  while (in >> role >> id) {
    if (role == "train") split.train.push_back(id);
    else if (role == "val") split.val.push_back(id);
    else if (role == "test") split.test.push_back(id);
    else throw std::runtime_error("bad split role '" + role + "' in " + path);
  }
  return split;
}

void write_manifest(const std::string& path,
                    const std::vector<ManifestEntry>& entries) {
  std::ostringstream out;
  for (const auto& e : entries) {
    out << e.id << "\t" << e.wav_path << "\t" << e.marks_path << "\t"
        << e.disorder_label << "\t" << e.seed << "\n";
  }
  write_file_atomic(path, out.str());
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  auto resolve = [&base](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).string();
  };

  std::vector<ManifestEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    ManifestEntry e;
    std::string seed_text;
    if (!std::getline(row, e.id, '\t') || !std::getline(row, e.wav_path, '\t') ||
        !std::getline(row, e.marks_path, '\t') ||
        !std::getline(row, e.disorder_label, '\t') ||
        !std::getline(row, seed_text)) {
      throw std::runtime_error("malformed manifest row: " + line);
    }
    e.wav_path = resolve(e.wav_path);
    e.marks_path = resolve(e.marks_path);
    e.seed = std::stoull(seed_text);
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw std::runtime_error("empty manifest: " + path);
  return entries;
}

}  // namespace gciforge
