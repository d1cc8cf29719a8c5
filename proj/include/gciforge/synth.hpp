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
#include <vector>

#include "gciforge/dataset.hpp"
#include "gciforge/types.hpp"

namespace gciforge {

// Knobs of the sustained-vowel generator. Disorder labels map to
// perturbation ranges (jitter/shimmer/closure smearing/aspiration); these
// are verification knobs, not clinical models.
struct VoicePreset {
  std::string label = "healthy";  // healthy, N, P, L, T, C, PV
  double f0_hz = 120.0;
  double jitter_pct = 0.5;        // bounded (uniform) cycle-length perturbation
  double shimmer_pct = 2.0;       // bounded cycle-amplitude perturbation
  double closure_smear_ms = 0.0;  // Gaussian widening of the closure spike
  double aspiration_snr_db = 40.0;
  char vowel = 'a';               // a, e, o
  int mic_delay_samples = 10;
};

struct GlottalSource {
  Signal source;   // glottal flow derivative
  GciMarks marks;  // per-cycle derivative minima (pre-smear timeline)
};

// Rosenberg-pulse train with jittered periods and shimmered amplitudes.
// The closure instant of every cycle lands exactly on an integer sample,
// which is where the sampled flow derivative attains its cycle minimum.
GlottalSource gen_glottal_source(const VoicePreset& preset, double duration_s,
                                 std::uint64_t seed);

// Three-formant resonator cascade, peak-normalized.
Signal gen_vocal_tract(const Eigen::Ref<const Signal>& source, char vowel);

// Impedance-style EGG: sharp fall at each closure, slow recovery during
// the open phase. Closing-edge sharpness degrades with closure_smear_ms.
Signal gen_egg(const GciMarks& truth, const VoicePreset& preset,
               Eigen::Index length);

struct SynthRecording {
  Waveform speech;  // mic-delayed
  Waveform egg;     // undelayed
  GciMarks truth;   // on the recorded-speech timeline (source marks + delay)
  VoicePreset preset;
  std::uint64_t seed = 0;
};

SynthRecording gen_recording(const VoicePreset& preset, double duration_s,
                             std::uint64_t seed);

// Draws a concrete preset for a disorder label; f0 and severity knobs come
// from per-label ranges.
VoicePreset preset_for_label(const std::string& label, char vowel,
                             class Rng& rng);

inline const std::vector<std::string>& preset_labels() {
  static const std::vector<std::string> labels = {"healthy", "N", "P", "L",
                                                  "T", "C", "PV"};
  return labels;
}

// Writes n recordings (2-channel WAVs, truth mark files) plus the corpus
// manifest under out_dir. mix lists the labels to cycle through; empty
// means all labels. Deterministic for a given root seed.
std::vector<ManifestEntry> gen_corpus(int n_recordings,
                                      const std::vector<std::string>& mix,
                                      std::uint64_t root_seed,
                                      const std::string& out_dir,
                                      double duration_s = 0.8);

}  // namespace gciforge
