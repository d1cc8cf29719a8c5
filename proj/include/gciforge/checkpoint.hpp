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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gciforge/nn/network.hpp"

namespace gciforge {

// Serialized topology + parameters + normalization statistics of a trained
// model. File layout: magic "GCN1", u32 little-endian descriptor length,
// text descriptor (sections, layer list, block names/shapes, metadata),
// then the parameter arrays as little-endian 64-bit floats in descriptor
// order. Round trips are bit-exact.
struct Checkpoint {
  struct Block {
    std::string name;
    std::vector<int> shape;
    Eigen::ArrayXd values;
  };

  std::string arch;            // "single_column" | "joint"
  std::string representation;  // input view(s) the model consumes
  std::uint64_t seed = 0;
  int epochs_trained = 0;
  double best_val_bce = 0.0;
  std::vector<std::pair<std::string, std::vector<std::string>>> sections;
  std::vector<Block> blocks;

  const Block& find_block(const std::string& name) const;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// Snapshot of a network's parameters and running statistics, block names
// prefixed "<section>.<layer>.<param>".
std::vector<Checkpoint::Block> snapshot_blocks(nn::Sequential& net,
                                               const std::string& section);

// Writes blocks back into a freshly built network; names, shapes, and
// order must match exactly.
void restore_blocks(nn::Sequential& net, const std::string& section,
                    const std::vector<Checkpoint::Block>& blocks,
                    std::size_t& cursor);

}  // namespace gciforge
