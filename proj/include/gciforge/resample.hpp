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

#include "gciforge/types.hpp"

namespace gciforge {

// Windowed-sinc rate conversion (Kaiser window, beta 8.6, 64 taps per
// output phase). When decimating, the kernel is stretched so the cutoff
// sits at the output Nyquist. Output length is ceil(len * out / in).
Signal resample(const Eigen::Ref<const Signal>& x, int in_rate_hz,
                int out_rate_hz);

}  // namespace gciforge
