// Copyright 2026 The civb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acoustic reconstruction from an electrodogram (tone vocoder).

#ifndef CIVB_RESYNTH_H_
#define CIVB_RESYNTH_H_

#include <cstddef>
#include <vector>

#include "civb/audio_buffer.h"
#include "civb/ci_encode.h"

namespace civb {

struct ResynthConfig {
  double smoothing_cutoff_hz = 200.0;
  // One-pole sections; keeps the hold-and-smooth step response monotone.
  int smoothing_sections = 2;
  double peak_level = 0.9;
};

// Zero-order hold of the pulse amplitudes (zero before the first onset),
// then the smoothing lowpass. Length is gram.num_samples.
std::vector<double> PulsesToEnvelope(const Electrodogram& gram,
                                     std::size_t channel,
                                     const ResynthConfig& cfg = {});

// Sum over channels of envelope x cos(2 pi cf n / rate), peak-normalized to
// cfg.peak_level unless the result is silent.
AudioBuffer Synthesize(const Electrodogram& gram, const ResynthConfig& cfg = {});

}  // namespace civb

#endif  // CIVB_RESYNTH_H_
