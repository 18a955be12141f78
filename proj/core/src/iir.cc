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

#include "civb/iir.h"

#include <cmath>
#include <complex>
#include <numbers>

namespace civb {

double Biquad::MagnitudeAt(double omega) const {
  const std::complex<double> z1 = std::polar(1.0, -omega);
  const std::complex<double> z2 = z1 * z1;
  return std::abs((b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2));
}

Biquad GammatoneSection(double cf_hz, double bw_hz, double rate_hz) {
  const double r = std::exp(-std::numbers::pi * bw_hz / rate_hz);
  const double theta = 2.0 * std::numbers::pi * cf_hz / rate_hz;
  Biquad s;
  // Impulse response r^n cos(theta n).
  s.b0 = 1.0;
  s.b1 = -r * std::cos(theta);
  s.b2 = 0.0;
  s.a1 = -2.0 * r * std::cos(theta);
  s.a2 = r * r;
  const double gain = 1.0 / s.MagnitudeAt(theta);
  s.b0 *= gain;
  s.b1 *= gain;
  return s;
}

Biquad ButterworthLowpassSection(double cutoff_hz, double rate_hz) {
  const double k = std::tan(std::numbers::pi * cutoff_hz / rate_hz);
  const double q = std::numbers::sqrt2 / 2.0;
  const double norm = 1.0 / (1.0 + k / q + k * k);
  Biquad s;
  s.b0 = k * k * norm;
  s.b1 = 2.0 * s.b0;
  s.b2 = s.b0;
  s.a1 = 2.0 * (k * k - 1.0) * norm;
  s.a2 = (1.0 - k / q + k * k) * norm;
  return s;
}

std::vector<double> ApplyCascade(const Biquad& section, int count,
                                 std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  for (int stage = 0; stage < count; ++stage) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (double& v : y) {
      const double in = v;
      const double out = section.b0 * in + s1;
      s1 = section.b1 * in - section.a1 * out + s2;
      s2 = section.b2 * in - section.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> OnePoleCascade(std::span<const double> x, double cutoff_hz,
                                   int count, double rate_hz) {
  const double alpha =
      1.0 - std::exp(-2.0 * std::numbers::pi * cutoff_hz / rate_hz);
  std::vector<double> y(x.begin(), x.end());
  for (int stage = 0; stage < count; ++stage) {
    double state = 0.0;
    for (double& v : y) {
      state += alpha * (v - state);
      v = state;
    }
  }
  return y;
}

}  // namespace civb
