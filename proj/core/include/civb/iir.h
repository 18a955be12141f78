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

// Second-order IIR sections shared by the filterbank, envelope and
// reconstruction stages.

#ifndef CIVB_IIR_H_
#define CIVB_IIR_H_

#include <span>
#include <vector>

namespace civb {

// Direct form II transposed biquad, a0 normalized to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  // Complex gain magnitude at normalized angular frequency `omega`.
  double MagnitudeAt(double omega) const;
};

// Impulse-invariant resonator with pole radius exp(-pi bw / fs) at angle
// 2 pi cf / fs, scaled to unit gain at cf. A single section has a -3 dB
// bandwidth of roughly `bw_hz`.
Biquad GammatoneSection(double cf_hz, double bw_hz, double rate_hz);

// Bilinear-transform Butterworth lowpass (Q = 1/sqrt 2) with prewarping.
Biquad ButterworthLowpassSection(double cutoff_hz, double rate_hz);

// Runs `x` through `count` copies of `section`, each with fresh state.
std::vector<double> ApplyCascade(const Biquad& section, int count,
                                 std::span<const double> x);

// Cascade of one-pole smoothers y += alpha (x - y). Step response is
// monotone, DC gain 1.
std::vector<double> OnePoleCascade(std::span<const double> x, double cutoff_hz,
                                   int count, double rate_hz);

}  // namespace civb

#endif  // CIVB_IIR_H_
