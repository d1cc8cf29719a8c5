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

#include "gciforge/iir.hpp"

#include <cmath>
#include <stdexcept>

namespace gciforge {

IirFilter design_butterworth_lowpass(int order, double cutoff_hz,
                                     int sample_rate_hz) {
  if (order <= 0 || order % 2 != 0) {
    throw std::invalid_argument("butterworth: order must be a positive even number");
  }
  if (!(cutoff_hz > 0.0) || cutoff_hz >= sample_rate_hz / 2.0) {
    throw std::invalid_argument("butterworth: cutoff must lie in (0, Nyquist)");
  }

  // Prewarped analog cutoff so the digital -3 dB point lands exactly on
  // cutoff_hz after the bilinear transform.
  const double fs = static_cast<double>(sample_rate_hz);
  const double warped = 2.0 * fs * std::tan(M_PI * cutoff_hz / fs);

  IirFilter filter;
  filter.sections.reserve(static_cast<std::size_t>(order / 2));
  for (int k = 0; k < order / 2; ++k) {
    // Conjugate analog pole pair of the Butterworth circle, upper half.
    const double theta = M_PI_2 + M_PI * (2 * k + 1) / (2.0 * order);
    const std::complex<double> pole_s =
        warped * std::complex<double>(std::cos(theta), std::sin(theta));

    // Bilinear transform: z = (2fs + s) / (2fs - s).
    const std::complex<double> pole_z =
        (2.0 * fs + pole_s) / (2.0 * fs - pole_s);

    Biquad s;
    s.a1 = -2.0 * pole_z.real();
    s.a2 = std::norm(pole_z);
    // Double zero at z = -1 (the two analog zeros at infinity); gain set
    // for unit DC response per section.
    const double b = (1.0 + s.a1 + s.a2) / 4.0;
    s.b0 = b;
    s.b1 = 2.0 * b;
    s.b2 = b;
    filter.sections.push_back(s);
  }
  return filter;
}

std::complex<double> filter_response(const IirFilter& f, double w) {
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  std::complex<double> h{1.0, 0.0};
  for (const Biquad& s : f.sections) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return h;
}

double filter_gain_db(const IirFilter& f, double freq_hz, int sample_rate_hz) {
  const double w = 2.0 * M_PI * freq_hz / sample_rate_hz;
  return 20.0 * std::log10(std::abs(filter_response(f, w)));
}

double dc_gain(const IirFilter& f) { return filter_response(f, 0.0).real(); }

bool is_stable(const IirFilter& f) {
  for (const Biquad& s : f.sections) {
    // Roots of z^2 + a1 z + a2; both must be inside the unit circle.
    const std::complex<double> disc =
        std::sqrt(std::complex<double>(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
    const std::complex<double> r0 = (-s.a1 + disc) / 2.0;
    const std::complex<double> r1 = (-s.a1 - disc) / 2.0;
    if (std::abs(r0) >= 1.0 || std::abs(r1) >= 1.0) return false;
  }
  return true;
}

namespace {

// Per-section step steady state for direct form II transposed, input 1.
// Used to start each filtfilt pass without an edge transient.
struct SectionState {
  double z1, z2;
};

SectionState step_steady_state(const Biquad& s) {
  const double g = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
  SectionState st;
  st.z2 = s.b2 - s.a2 * g;
  st.z1 = s.b1 - s.a1 * g + st.z2;
  return st;
}

Signal sosfilt_with_state(const IirFilter& f, const Signal& x, double x0_scale) {
  Signal y = x;
  double carry_gain = 1.0;
  for (const Biquad& s : f.sections) {
    SectionState st = step_steady_state(s);
    st.z1 *= x0_scale * carry_gain;
    st.z2 *= x0_scale * carry_gain;
    double z1 = st.z1, z2 = st.z2;
    for (Eigen::Index n = 0; n < y.size(); ++n) {
      const double in = y[n];
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      y[n] = out;
    }
    carry_gain *= (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
  }
  return y;
}

}  // namespace

Signal sosfilt(const IirFilter& f, const Eigen::Ref<const Signal>& x) {
  Signal y = x;
  for (const Biquad& s : f.sections) {
    double z1 = 0.0, z2 = 0.0;
    for (Eigen::Index n = 0; n < y.size(); ++n) {
      const double in = y[n];
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      y[n] = out;
    }
  }
  return y;
}

Signal filtfilt(const IirFilter& f, const Eigen::Ref<const Signal>& x) {
  const Eigen::Index pad = 3 * f.order();
  if (x.size() <= 2 * pad) {
    throw std::invalid_argument("filtfilt: signal shorter than padding requirement");
  }
  const Eigen::Index n = x.size();

  // Odd reflection about the end samples.
  Signal ext(n + 2 * pad);
  for (Eigen::Index i = 0; i < pad; ++i) {
    ext[i] = 2.0 * x[0] - x[pad - i];
  }
  ext.segment(pad, n) = x;
  for (Eigen::Index i = 0; i < pad; ++i) {
    ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];
  }

  Signal y = sosfilt_with_state(f, ext, ext[0]);
  y.reverseInPlace();
  y = sosfilt_with_state(f, y, y[0]);
  y.reverseInPlace();
  return y.segment(pad, n);
}

}  // namespace gciforge
