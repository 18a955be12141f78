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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "civb/error.h"
#include "civb/signal_io.h"

namespace civb {
namespace {

constexpr int kTapsAtLowerRate = 64;
constexpr double kCutoffFraction = 0.5;
constexpr double kKaiserBeta = 8.0;
// Rational ratios with at most this many phases get a precomputed table.
constexpr std::int64_t kMaxTablePhases = 4096;

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

class Kernel {
 public:
  Kernel(double source_rate, double target_rate) {
    const double lower = std::min(source_rate, target_rate);
    // Cutoff and half-width expressed in source-sample units.
    cutoff_ = kCutoffFraction * lower / source_rate;
    half_width_ = 0.5 * kTapsAtLowerRate * source_rate / lower;
    inv_i0_beta_ = 1.0 / std::cyl_bessel_i(0.0, kKaiserBeta);
  }

  double half_width() const { return half_width_; }

  // Continuous impulse response at offset `tau` source samples.
  double operator()(double tau) const {
    const double u = tau / half_width_;
    if (u <= -1.0 || u >= 1.0) return 0.0;
    const double window =
        std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - u * u)) *
        inv_i0_beta_;
    return 2.0 * cutoff_ * Sinc(2.0 * cutoff_ * tau) * window;
  }

 private:
  double cutoff_;
  double half_width_;
  double inv_i0_beta_;
};

}  // namespace

AudioBuffer Resample(const AudioBuffer& buffer, double target_rate_hz) {
  if (!(target_rate_hz > 0.0) || !std::isfinite(target_rate_hz)) {
    Fail(ErrorCode::kInvalidArgument,
         "target rate must be positive, got " + std::to_string(target_rate_hz));
  }
  const double source_rate = buffer.sample_rate_hz();
  if (target_rate_hz == source_rate) {
    return buffer;
  }

  const auto in = buffer.samples();
  const std::int64_t n_in = static_cast<std::int64_t>(in.size());
  const std::int64_t n_out = static_cast<std::int64_t>(
      std::llround(static_cast<double>(n_in) * target_rate_hz / source_rate));
  const double step = source_rate / target_rate_hz;

  const Kernel kernel(source_rate, target_rate_hz);
  const std::int64_t reach =
      static_cast<std::int64_t>(std::ceil(kernel.half_width()));
  const std::int64_t span = 2 * reach + 1;

  // Integer rates with a manageable ratio reuse one tap set per phase.
  std::int64_t up = 0;
  std::int64_t down = 0;
  std::vector<double> table;
  if (source_rate == std::round(source_rate) &&
      target_rate_hz == std::round(target_rate_hz)) {
    const auto src = static_cast<std::int64_t>(source_rate);
    const auto dst = static_cast<std::int64_t>(target_rate_hz);
    const std::int64_t g = std::gcd(src, dst);
    if (dst / g <= kMaxTablePhases) {
      up = dst / g;
      down = src / g;
      table.resize(static_cast<std::size_t>(up * span));
      for (std::int64_t p = 0; p < up; ++p) {
        const double frac = static_cast<double>(p) / static_cast<double>(up);
        for (std::int64_t j = 0; j < span; ++j) {
          table[static_cast<std::size_t>(p * span + j)] =
              kernel(frac - static_cast<double>(j - reach));
        }
      }
    }
  }

  std::vector<double> out(static_cast<std::size_t>(n_out));
  for (std::int64_t m = 0; m < n_out; ++m) {
    std::int64_t base;
    const double* taps = nullptr;
    std::vector<double> scratch;
    if (up > 0) {
      const std::int64_t num = m * down;
      base = num / up;
      taps = &table[static_cast<std::size_t>((num % up) * span)];
    } else {
      const double t = static_cast<double>(m) * step;
      base = static_cast<std::int64_t>(std::floor(t));
      const double frac = t - static_cast<double>(base);
      scratch.resize(static_cast<std::size_t>(span));
      for (std::int64_t j = 0; j < span; ++j) {
        scratch[static_cast<std::size_t>(j)] =
            kernel(frac - static_cast<double>(j - reach));
      }
      taps = scratch.data();
    }
    double acc = 0.0;
    for (std::int64_t j = 0; j < span; ++j) {
      const std::int64_t k = base + j - reach;
      if (k < 0 || k >= n_in) continue;
      acc += in[static_cast<std::size_t>(k)] * taps[j];
    }
    out[static_cast<std::size_t>(m)] = acc;
  }
  return AudioBuffer(std::move(out), target_rate_hz);
}

}  // namespace civb
