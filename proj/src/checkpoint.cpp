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

#include "gciforge/checkpoint.hpp"

#include <cstring>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "gciforge/io_util.hpp"

namespace gciforge {

namespace {

constexpr char kMagic[4] = {'G', 'C', 'N', '1'};

std::string hexfloat(double v) {
  std::ostringstream s;
  s << std::hexfloat << v;
  return s.str();
}

void append_f64_le(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

double read_f64_le(const std::string& in, std::size_t at) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  }
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

const Checkpoint::Block& Checkpoint::find_block(const std::string& name) const {
  for (const Block& b : blocks) {
    if (b.name == name) return b;
  }
  throw std::runtime_error("checkpoint: no block named " + name);
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ostringstream d;
  d << "gciforge-checkpoint v1\n";
  d << "arch " << ckpt.arch << "\n";
  d << "representation " << ckpt.representation << "\n";
  d << "seed " << ckpt.seed << "\n";
  d << "epochs_trained " << ckpt.epochs_trained << "\n";
  d << "best_val_bce " << hexfloat(ckpt.best_val_bce) << "\n";
  d << "sections " << ckpt.sections.size() << "\n";
  for (const auto& [name, layers] : ckpt.sections) {
    d << "section " << name << " " << layers.size() << "\n";
    for (const auto& layer : layers) d << layer << "\n";
  }
  d << "blocks " << ckpt.blocks.size() << "\n";
  for (const auto& b : ckpt.blocks) {
    d << "block " << b.name << " " << b.shape.size();
    for (int dim : b.shape) d << " " << dim;
    d << "\n";
  }
  d << "end\n";
  const std::string descriptor = d.str();

  std::string out;
  out.append(kMagic, 4);
  const std::uint32_t len = static_cast<std::uint32_t>(descriptor.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((len >> (8 * i)) & 0xff));
  out += descriptor;
  for (const auto& b : ckpt.blocks) {
    for (Eigen::Index i = 0; i < b.values.size(); ++i) append_f64_le(out, b.values[i]);
  }
  write_file_atomic(path, out);
}

Checkpoint load_checkpoint(const std::string& path) {
  const std::string in = read_file(path);
  if (in.size() < 8 || std::memcmp(in.data(), kMagic, 4) != 0) {
    throw std::runtime_error("checkpoint: bad magic in " + path);
  }
  std::uint32_t dlen = 0;
  for (int i = 0; i < 4; ++i) {
    dlen |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[4 + i])) << (8 * i);
  }
  if (in.size() < 8 + dlen) throw std::runtime_error("checkpoint: truncated descriptor in " + path);

  std::istringstream d(in.substr(8, dlen));
  std::string line;
  auto next_line = [&]() {
    if (!std::getline(d, line)) throw std::runtime_error("checkpoint: descriptor ended early");
    return line;
  };

  if (next_line() != "gciforge-checkpoint v1") {
    throw std::runtime_error("checkpoint: unknown format version in " + path);
  }

  Checkpoint ckpt;
  auto expect_kv = [&](const char* key) {
    next_line();
    std::istringstream row(line);
    std::string k;
    row >> k;
    if (k != key) throw std::runtime_error(std::string("checkpoint: expected ") + key);
    std::string rest;
    std::getline(row, rest);
    return rest.empty() ? rest : rest.substr(1);
  };

  ckpt.arch = expect_kv("arch");
  ckpt.representation = expect_kv("representation");
  ckpt.seed = std::stoull(expect_kv("seed"));
  ckpt.epochs_trained = std::stoi(expect_kv("epochs_trained"));
  ckpt.best_val_bce = std::strtod(expect_kv("best_val_bce").c_str(), nullptr);

  const int n_sections = std::stoi(expect_kv("sections"));
  for (int s = 0; s < n_sections; ++s) {
    next_line();
    std::istringstream row(line);
    std::string tag, name;
    int n_layers = 0;
    row >> tag >> name >> n_layers;
    if (tag != "section") throw std::runtime_error("checkpoint: expected section line");
    std::vector<std::string> layers;
    layers.reserve(n_layers);
    for (int i = 0; i < n_layers; ++i) layers.push_back(next_line());
    ckpt.sections.emplace_back(name, std::move(layers));
  }

  const int n_blocks = std::stoi(expect_kv("blocks"));
  for (int i = 0; i < n_blocks; ++i) {
    next_line();
    std::istringstream row(line);
    std::string tag;
    Checkpoint::Block b;
    int ndims = 0;
    row >> tag >> b.name >> ndims;
    if (tag != "block") throw std::runtime_error("checkpoint: expected block line");
    b.shape.resize(ndims);
    for (int k = 0; k < ndims; ++k) row >> b.shape[k];
    if (!row) throw std::runtime_error("checkpoint: malformed block line");
    ckpt.blocks.push_back(std::move(b));
  }
  if (next_line() != "end") throw std::runtime_error("checkpoint: missing end marker");

  std::size_t at = 8 + dlen;
  for (auto& b : ckpt.blocks) {
    Eigen::Index count = 1;
    for (int dim : b.shape) count *= dim;
    if (at + static_cast<std::size_t>(count) * 8 > in.size()) {
      throw std::runtime_error("checkpoint: truncated parameter arrays in " + path);
    }
    b.values.resize(count);
    for (Eigen::Index k = 0; k < count; ++k) {
      b.values[k] = read_f64_le(in, at);
      at += 8;
    }
  }
  if (at != in.size()) {
    throw std::runtime_error("checkpoint: trailing bytes in " + path);
  }
  return ckpt;
}

std::vector<Checkpoint::Block> snapshot_blocks(nn::Sequential& net,
                                               const std::string& section) {
  std::vector<Checkpoint::Block> out;
  const std::size_t n = net.n_layers();
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& p : net.layer(i).params()) {
      out.push_back({section + "." + std::to_string(i) + "." + p.name, p.shape, *p.value});
    }
    for (auto& s : net.layer(i).state()) {
      out.push_back({section + "." + std::to_string(i) + "." + s.name, s.shape, *s.value});
    }
  }
  return out;
}

void restore_blocks(nn::Sequential& net, const std::string& section,
                    const std::vector<Checkpoint::Block>& blocks,
                    std::size_t& cursor) {
  const std::size_t n = net.n_layers();
  for (std::size_t i = 0; i < n; ++i) {
    auto take = [&](nn::ParamBlockT<double>& p) {
      const std::string expected = section + "." + std::to_string(i) + "." + p.name;
      if (cursor >= blocks.size()) {
        throw std::runtime_error("checkpoint: missing block " + expected);
      }
      const Checkpoint::Block& b = blocks[cursor++];
      if (b.name != expected || b.values.size() != p.value->size()) {
        throw std::runtime_error("checkpoint: descriptor mismatch at " + expected +
                                 " (found " + b.name + ")");
      }
      *p.value = b.values;
    };
    for (auto& p : net.layer(i).params()) take(p);
    for (auto& s : net.layer(i).state()) take(s);
  }
}

}  // namespace gciforge
