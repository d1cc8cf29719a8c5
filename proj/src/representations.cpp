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

#include "gciforge/representations.hpp"

#include <stdexcept>

#include "gciforge/iir.hpp"
#include "gciforge/lpc.hpp"
#include "gciforge/signal_ops.hpp"

namespace gciforge {

std::string to_string(Representation r) {
  switch (r) {
    case Representation::LpfS: return "LPF_S";
    case Representation::LpfLpr: return "LPF_LPR";
    case Representation::PcLpfS: return "PC_LPF_S";
    case Representation::PcLpfLpr: return "PC_LPF_LPR";
  }
  return "LPF_S";
}

Representation representation_from_string(const std::string& name) {
  if (name == "LPF_S") return Representation::LpfS;
  if (name == "LPF_LPR") return Representation::LpfLpr;
  if (name == "PC_LPF_S") return Representation::PcLpfS;
  if (name == "PC_LPF_LPR") return Representation::PcLpfLpr;
  throw std::invalid_argument("unknown representation: " + name);
}

const Signal& RepresentationSet::by_index(int i) const {
  switch (i) {
    case 0: return lpf_s;
    case 1: return lpf_lpr;
    case 2: return pc_lpf_s;
    case 3: return pc_lpf_lpr;
  }
  throw std::out_of_range("RepresentationSet index");
}

RepresentationSet make_representations(const Waveform& speech) {
  if (speech.sample_rate_hz != kPipelineRateHz) {
    throw std::invalid_argument("make_representations: expected prepared 16 kHz speech");
  }
  const IirFilter lp = design_butterworth_lowpass(6, 1000.0, kPipelineRateHz);

  RepresentationSet reps;
  reps.lpf_s = peak_normalize(filtfilt(lp, speech.samples));
  reps.lpf_lpr = peak_normalize(filtfilt(lp, lp_residual(speech.samples)));
  reps.pc_lpf_s = positive_clip(reps.lpf_s);
  reps.pc_lpf_lpr = positive_clip(reps.lpf_lpr);
  return reps;
}

}  // namespace gciforge
