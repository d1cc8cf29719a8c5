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

#include "gciforge/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "gciforge/io_util.hpp"

namespace gciforge {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;

std::uint16_t read_u16(const std::string& b, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    (static_cast<unsigned char>(b[at + 1]) << 8));
}

std::uint32_t read_u32(const std::string& b, std::size_t at) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 16) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3])) << 24);
}

void append_u16(std::string& b, std::uint16_t v) {
  b.push_back(static_cast<char>(v & 0xff));
  b.push_back(static_cast<char>((v >> 8) & 0xff));
}

void append_u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

WavContents read_wav(const std::string& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 44 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0) {
    throw std::runtime_error("not a RIFF WAVE file: " + path);
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t data_at = 0, data_len = 0;
  bool have_fmt = false;

  // Walk chunks; sizes are word-aligned.
  std::size_t at = 12;
  while (at + 8 <= bytes.size()) {
    const std::string id = bytes.substr(at, 4);
    const std::uint32_t len = read_u32(bytes, at + 4);
    const std::size_t body = at + 8;
    if (body + len > bytes.size()) break;
    if (id == "fmt ") {
      if (len < 16) throw std::runtime_error("malformed fmt chunk: " + path);
      format = read_u16(bytes, body);
      channels = read_u16(bytes, body + 2);
      rate = read_u32(bytes, body + 4);
      bits = read_u16(bytes, body + 14);
      have_fmt = true;
    } else if (id == "data") {
      data_at = body;
      data_len = len;
    }
    at = body + len + (len & 1);
  }

  if (!have_fmt || data_at == 0) {
    throw std::runtime_error("missing fmt/data chunk: " + path);
  }
  if (channels < 1 || channels > 2) {
    throw std::runtime_error("unsupported channel count: " + path);
  }
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatIeeeFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw std::runtime_error("unsupported encoding (want PCM16 or float32): " + path);
  }
  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t n_frames = data_len / (bytes_per_sample * channels);
  if (n_frames == 0) throw std::runtime_error("zero-length audio: " + path);

  std::vector<Signal> chan(channels);
  for (auto& c : chan) c.resize(static_cast<Eigen::Index>(n_frames));

  for (std::size_t i = 0; i < n_frames; ++i) {
    for (std::uint16_t c = 0; c < channels; ++c) {
      const std::size_t p = data_at + (i * channels + c) * bytes_per_sample;
      if (pcm16) {
        const std::int16_t raw =
            static_cast<std::int16_t>(read_u16(bytes, p));
        chan[c][static_cast<Eigen::Index>(i)] = raw / 32768.0;
      } else {
        float v;
        std::uint32_t u = read_u32(bytes, p);
        std::memcpy(&v, &u, 4);
        chan[c][static_cast<Eigen::Index>(i)] = static_cast<double>(v);
      }
    }
  }

  WavContents out;
  out.speech = Waveform{std::move(chan[0]), static_cast<int>(rate),
                        ChannelRole::Speech};
  if (channels == 2) {
    out.egg = Waveform{std::move(chan[1]), static_cast<int>(rate),
                       ChannelRole::Egg};
  }
  return out;
}

void write_wav(const std::string& path, const Signal& speech,
               const Signal* egg, int sample_rate_hz) {
  if (egg && egg->size() != speech.size()) {
    throw std::invalid_argument("write_wav: channel length mismatch");
  }
  if (speech.size() == 0) throw std::invalid_argument("write_wav: empty signal");
  const std::uint16_t channels = egg ? 2 : 1;
  const std::uint32_t n = static_cast<std::uint32_t>(speech.size());
  const std::uint32_t data_len = n * channels * 2;

  std::string b;
  b.reserve(44 + data_len);
  b += "RIFF";
  append_u32(b, 36 + data_len);
  b += "WAVE";
  b += "fmt ";
  append_u32(b, 16);
  append_u16(b, kFormatPcm);
  append_u16(b, channels);
  append_u32(b, static_cast<std::uint32_t>(sample_rate_hz));
  append_u32(b, static_cast<std::uint32_t>(sample_rate_hz) * channels * 2);
  append_u16(b, static_cast<std::uint16_t>(channels * 2));
  append_u16(b, 16);
  b += "data";
  append_u32(b, data_len);

  auto quantize = [](double v) -> std::int16_t {
    const double scaled = std::round(v * 32768.0);
    return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
  };
  for (std::uint32_t i = 0; i < n; ++i) {
    append_u16(b, static_cast<std::uint16_t>(quantize(speech[i])));
    if (egg) append_u16(b, static_cast<std::uint16_t>(quantize((*egg)[i])));
  }
  write_file_atomic(path, b);
}

}  // namespace gciforge
