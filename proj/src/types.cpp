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

#include "gciforge/types.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gciforge/io_util.hpp"

namespace gciforge {

std::string to_string(MarkSource s) {
  switch (s) {
    case MarkSource::EggReference: return "EggReference";
    case MarkSource::Detector: return "Detector";
    case MarkSource::Synthetic: return "Synthetic";
  }
  return "Detector";
}

MarkSource mark_source_from_string(const std::string& s) {
  if (s == "EggReference") return MarkSource::EggReference;
  if (s == "Detector") return MarkSource::Detector;
  if (s == "Synthetic") return MarkSource::Synthetic;
  throw std::runtime_error("unknown mark source: " + s);
}

void write_marks(const std::string& path, const GciMarks& marks, int rate_hz) {
  std::ostringstream out;
  out << "# rate=" << rate_hz << " source=" << to_string(marks.source) << "\n";
  for (int p : marks.positions) out << p << "\n";
  write_file_atomic(path, out.str());
}

GciMarks read_marks(const std::string& path, int* rate_hz) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mark file: " + path);
  GciMarks marks;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string token;
      while (hs >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "rate" && rate_hz) *rate_hz = std::stoi(value);
        if (key == "source") marks.source = mark_source_from_string(value);
      }
      have_header = true;
      continue;
    }
    marks.positions.push_back(std::stoi(line));
  }
  if (!have_header) {
    throw std::runtime_error("mark file missing header line: " + path);
  }
  for (std::size_t i = 1; i < marks.positions.size(); ++i) {
    if (marks.positions[i] <= marks.positions[i - 1]) {
      throw std::runtime_error("mark file not strictly increasing: " + path);
    }
  }
  return marks;
}

}  // namespace gciforge
