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

#include "gciforge/synth.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "gciforge/rng.hpp"
#include "gciforge/signal_ops.hpp"
#include "gciforge/wav_io.hpp"

namespace gciforge {

namespace {

constexpr double kFs = kPipelineRateHz;
constexpr double kOpenFraction = 0.40;  // rising phase of the glottal pulse
// Width of the excitation spike at closure. The spike is symmetric, so its
// minimum stays on the closure sample through every zero-phase stage of
// the pipeline.
constexpr double kExcitationSigma = 1.2;

// Gaussian smoothing, unit-area kernel truncated at 4 sigma, zero-phase.
Signal gaussian_smooth(const Signal& x, double sigma_samples) {
  const int half = static_cast<int>(std::ceil(4.0 * sigma_samples));
  if (half < 1) return x;
  Eigen::ArrayXd kernel(2 * half + 1);
  for (int i = -half; i <= half; ++i) {
    kernel[i + half] = std::exp(-0.5 * (i / sigma_samples) * (i / sigma_samples));
  }
  kernel /= kernel.sum();

  const Eigen::Index n = x.size();
  Signal y = Signal::Zero(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    double acc = 0.0;
    const Eigen::Index lo = std::max<Eigen::Index>(0, t - half);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, t + half);
    for (Eigen::Index k = lo; k <= hi; ++k) acc += x[k] * kernel[k - t + half];
    y[t] = acc;
  }
  return y;
}

}  // namespace

GlottalSource gen_glottal_source(const VoicePreset& preset, double duration_s,
                                 std::uint64_t seed) {
  if (duration_s < 0.2) {
    throw std::invalid_argument("gen_glottal_source: duration must be >= 0.2 s");
  }
  if (preset.f0_hz < 60.0 || preset.f0_hz > 400.0) {
    throw std::invalid_argument("gen_glottal_source: f0 must lie in [60, 400] Hz");
  }

  const Eigen::Index n = static_cast<Eigen::Index>(std::lround(duration_s * kFs));
  const double nominal_period = kFs / preset.f0_hz;

  Rng rng(seed);
  Signal source = Signal::Zero(n);
  GciMarks marks;
  marks.source = MarkSource::Synthetic;

  // Closure instants first, then one pulse per closure: a gentle opening
  // hump (flow rising) and an abrupt-closure excitation spike whose area
  // balances the hump, so the flow returns to baseline every cycle. The
  // sampled derivative minimum of each cycle is exactly its closure sample.
  const int spike_half = static_cast<int>(std::ceil(5.0 * kExcitationSigma));
  int closure = static_cast<int>(std::lround(nominal_period));
  while (closure < n) {
    const double period =
        nominal_period * (1.0 + preset.jitter_pct / 100.0 * rng.uniform(-1.0, 1.0));
    const double amplitude =
        std::max(0.1, 1.0 + preset.shimmer_pct / 100.0 * rng.uniform(-1.0, 1.0));

    const int rise = std::max(4, static_cast<int>(std::lround(kOpenFraction * period)));
    const double hump_peak = M_PI / (2.0 * rise);  // unit flow peak
    for (int t = std::max(0, closure - rise); t < closure && t < n; ++t) {
      const int u = t - (closure - rise);
      source[t] += amplitude * hump_peak * std::sin(M_PI * u / static_cast<double>(rise));
    }
    const double spike_depth = 1.0 / (kExcitationSigma * std::sqrt(2.0 * M_PI));
    for (int t = std::max(0, closure - spike_half);
         t <= std::min<int>(n - 1, closure + spike_half); ++t) {
      const double u = t - closure;
      source[t] -= amplitude * spike_depth *
                   std::exp(-0.5 * u * u / (kExcitationSigma * kExcitationSigma));
    }
    marks.positions.push_back(closure);

    closure += std::max(32, static_cast<int>(std::lround(period)));
  }

  if (preset.closure_smear_ms > 0.0) {
    // closure_smear_ms is the FWHM of the smoothing kernel.
    const double sigma = preset.closure_smear_ms * kFs / 1000.0 / 2.355;
    source = gaussian_smooth(source, sigma);
  }
  if (std::isfinite(preset.aspiration_snr_db)) {
    const double power = source.square().mean();
    if (power > 0.0) {
      const double noise_std =
          std::sqrt(power / std::pow(10.0, preset.aspiration_snr_db / 10.0));
      for (Eigen::Index t = 0; t < n; ++t) source[t] += noise_std * rng.normal();
    }
  }
  return GlottalSource{std::move(source), std::move(marks)};
}

Signal gen_vocal_tract(const Eigen::Ref<const Signal>& source, char vowel) {
  struct Formants {
    double f[3];
  };
  Formants fmt;
  switch (vowel) {
    case 'a': fmt = {{730.0, 1090.0, 2440.0}}; break;
    case 'e': fmt = {{530.0, 1840.0, 2480.0}}; break;
    case 'o': fmt = {{570.0, 840.0, 2410.0}}; break;
    default:
      throw std::invalid_argument("gen_vocal_tract: vowel must be one of a, e, o");
  }
  constexpr double bandwidth[3] = {60.0, 110.0, 170.0};

  // Each resonator runs forward and backward (zero phase), so the tract
  // response to an excitation spike is symmetric about the spike and the
  // waveform extremum stays on the closure sample. A causal cascade would
  // push the dominant excursion one F1 ring-up later and detach the
  // acoustic landmarks from the reference marks.
  Signal y = source;
  for (int i = 0; i < 3; ++i) {
    const double r = std::exp(-M_PI * bandwidth[i] / kFs);
    const double theta = 2.0 * M_PI * fmt.f[i] / kFs;
    const double a1 = -2.0 * r * std::cos(theta);
    const double a2 = r * r;
    auto resonate = [&](Signal s) {
      double y1 = 0.0, y2 = 0.0;
      for (Eigen::Index t = 0; t < s.size(); ++t) {
        const double v = s[t] - a1 * y1 - a2 * y2;
        y2 = y1;
        y1 = v;
        s[t] = v;
      }
      return s;
    };
    y = resonate(std::move(y));
    y.reverseInPlace();
    y = resonate(std::move(y));
    y.reverseInPlace();
  }
  return peak_normalize(y);
}

Signal gen_egg(const GciMarks& truth, const VoicePreset& preset,
               Eigen::Index length) {
  for (int m : truth.positions) {
    if (m < 0 || m >= length) {
      throw std::invalid_argument("gen_egg: mark outside requested length");
    }
  }
  Signal egg = Signal::Zero(length);
  if (truth.empty()) return egg;

  const double nominal_period = kFs / preset.f0_hz;
  // Logistic fall of width ~4a at the closure, exponential recovery with a
  // time constant well below one period so cycles stay separable. Smearing
  // (FWHM) softens the closing edge.
  const double a =
      std::max(0.5, (0.2 + preset.closure_smear_ms / 2.355) * kFs / 1000.0 / 4.0);

  const int n_marks = truth.size();
  for (int c = 0; c < n_marks; ++c) {
    const int m = truth.positions[c];
    const double period = c + 1 < n_marks
                              ? truth.positions[c + 1] - truth.positions[c]
                              : nominal_period;
    const double tau = 0.35 * period;
    const Eigen::Index lo = std::max<Eigen::Index>(0, m - static_cast<int>(8 * a));
    const Eigen::Index hi =
        std::min<Eigen::Index>(length - 1, m + static_cast<Eigen::Index>(std::lround(period)));
    for (Eigen::Index t = lo; t <= hi; ++t) {
      const double rise = 1.0 / (1.0 + std::exp(-(t - m) / a));
      const double decay = t > m ? std::exp(-(t - m) / tau) : 1.0;
      egg[t] -= rise * decay;
    }
  }
  return egg;
}

SynthRecording gen_recording(const VoicePreset& preset, double duration_s,
                             std::uint64_t seed) {
  GlottalSource glottal = gen_glottal_source(preset, duration_s, seed);
  const Eigen::Index n = glottal.source.size();

  Signal speech = gen_vocal_tract(glottal.source, preset.vowel) * 0.9;
  Signal egg = peak_normalize(gen_egg(glottal.marks, preset, n), 0.9);

  // The microphone hears the excitation mic_delay_samples later than the
  // EGG electrodes see the closure.
  const int delay = preset.mic_delay_samples;
  if (delay < 0 || delay >= n) {
    throw std::invalid_argument("gen_recording: mic delay out of range");
  }
  Signal delayed = Signal::Zero(n);
  delayed.tail(n - delay) = speech.head(n - delay);

  SynthRecording rec;
  rec.speech = Waveform{std::move(delayed), kPipelineRateHz, ChannelRole::Speech};
  rec.egg = Waveform{std::move(egg), kPipelineRateHz, ChannelRole::Egg};
  rec.truth.source = MarkSource::Synthetic;
  for (int m : glottal.marks.positions) {
    if (m + delay < n) rec.truth.positions.push_back(m + delay);
  }
  rec.preset = preset;
  rec.seed = seed;
  return rec;
}

VoicePreset preset_for_label(const std::string& label, char vowel, Rng& rng) {
  struct Range {
    double jitter_lo, jitter_hi;
    double shimmer_lo, shimmer_hi;
    double smear_lo, smear_hi;
    double snr_lo, snr_hi;
    double f0_lo, f0_hi;
  };
  // Severity knobs per label; paralysis-like voices get the heaviest
  // smearing and noise, healthy stays clean.
  Range r;
  if (label == "healthy")      r = {0.3, 0.8, 1.0, 3.0, 0.0, 0.0, 38.0, 48.0, 100.0, 220.0};
  else if (label == "N")       r = {1.0, 2.0, 3.0, 6.0, 0.3, 0.6, 28.0, 34.0, 100.0, 220.0};
  else if (label == "P")       r = {1.5, 2.5, 4.0, 8.0, 0.4, 0.8, 26.0, 32.0, 95.0, 200.0};
  else if (label == "L")       r = {1.0, 2.0, 3.0, 6.0, 0.5, 1.0, 24.0, 30.0, 95.0, 200.0};
  else if (label == "T")       r = {1.0, 2.0, 2.0, 5.0, 0.6, 1.2, 26.0, 32.0, 90.0, 190.0};
  else if (label == "C")       r = {2.0, 4.0, 5.0, 10.0, 0.8, 1.5, 20.0, 26.0, 90.0, 180.0};
  else if (label == "PV")      r = {2.0, 3.0, 4.0, 8.0, 1.0, 1.5, 18.0, 24.0, 90.0, 180.0};
  else throw std::invalid_argument("unknown preset label: " + label);

  VoicePreset preset;
  preset.label = label;
  preset.vowel = vowel;
  preset.f0_hz = rng.uniform(r.f0_lo, r.f0_hi);
  preset.jitter_pct = rng.uniform(r.jitter_lo, r.jitter_hi);
  preset.shimmer_pct = rng.uniform(r.shimmer_lo, r.shimmer_hi);
  preset.closure_smear_ms = rng.uniform(r.smear_lo, r.smear_hi);
  preset.aspiration_snr_db = rng.uniform(r.snr_lo, r.snr_hi);
  preset.mic_delay_samples = 10;
  return preset;
}

std::vector<ManifestEntry> gen_corpus(int n_recordings,
                                      const std::vector<std::string>& mix,
                                      std::uint64_t root_seed,
                                      const std::string& out_dir,
                                      double duration_s) {
  if (n_recordings < 3) {
    throw std::invalid_argument("gen_corpus: need at least 3 recordings");
  }
  const std::vector<std::string>& labels = mix.empty() ? preset_labels() : mix;
  static constexpr char kVowels[3] = {'a', 'e', 'o'};

  namespace fs = std::filesystem;
  const fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root / "wav", ec);
  fs::create_directories(root / "truth", ec);
  if (!fs::is_directory(root / "wav") || !fs::is_directory(root / "truth")) {
    throw std::runtime_error("gen_corpus: cannot create output directory " + out_dir);
  }

  const Rng corpus_rng(root_seed);
  std::vector<ManifestEntry> entries;
  entries.reserve(n_recordings);
  for (int i = 0; i < n_recordings; ++i) {
    const Rng rec_rng = corpus_rng.split(static_cast<std::uint64_t>(i));
    Rng preset_rng = rec_rng.split(1);
    const std::uint64_t rec_seed = rec_rng.split(2).seed();

    const std::string& label = labels[i % labels.size()];
    const char vowel = kVowels[i % 3];
    const VoicePreset preset = preset_for_label(label, vowel, preset_rng);
    const SynthRecording rec = gen_recording(preset, duration_s, rec_seed);

    char id[32];
    std::snprintf(id, sizeof id, "rec%04d", i);
    const std::string wav_rel = "wav/" + std::string(id) + ".wav";
    const std::string marks_rel = "truth/" + std::string(id) + ".marks";
    write_wav((root / wav_rel).string(), rec.speech.samples, &rec.egg.samples,
              kPipelineRateHz);
    write_marks((root / marks_rel).string(), rec.truth);

    entries.push_back(ManifestEntry{id, wav_rel, marks_rel, label, rec_seed});
  }
  write_manifest((root / "manifest.tsv").string(), entries);
  return entries;
}

}  // namespace gciforge
