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
#include <random>
#include <string>
#include <vector>

#include "civb/error.h"
#include "civb/signal_io.h"

namespace civb {
namespace {

constexpr double kBabbleRms = 0.1;
// All-pole long-term speech spectrum: one resonance near the first-formant
// region, rolling off at 12 dB/octave above it.
constexpr double kSpectrumPeakHz = 500.0;
constexpr double kSpectrumBandwidthHz = 600.0;
constexpr int kWarmupSamples = 2048;

// Box-Muller on top of mt19937_64.
class GaussianSource {
 public:
  explicit GaussianSource(std::seed_seq& seq) : engine_(seq) {}

  double Next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = Uniform();
    const double u2 = Uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  // Uniform in (0, 1].
  double Uniform() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::vector<double> SpeechShapedStream(std::uint64_t seed, int talker,
                                       std::size_t n, double rate_hz) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xFFFFFFFFu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(talker)};
  GaussianSource gauss(seq);

  const double r = std::exp(-std::numbers::pi * kSpectrumBandwidthHz / rate_hz);
  const double theta = 2.0 * std::numbers::pi * kSpectrumPeakHz / rate_hz;
  const double a1 = -2.0 * r * std::cos(theta);
  const double a2 = r * r;

  double y1 = 0.0;
  double y2 = 0.0;
  auto step = [&] {
    const double y = gauss.Next() - a1 * y1 - a2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  };
  for (int i = 0; i < kWarmupSamples; ++i) step();

  std::vector<double> out(n);
  for (auto& v : out) v = step();
  return out;
}

std::vector<double> Babble(const NoiseSpec& spec, std::size_t n,
                           double rate_hz) {
  std::vector<double> sum(n, 0.0);
  for (int t = 0; t < spec.num_talkers; ++t) {
    const auto stream = SpeechShapedStream(spec.seed, t, n, rate_hz);
    for (std::size_t i = 0; i < n; ++i) sum[i] += stream[i];
  }
  const double rms = Rms(sum);
  if (rms > 0.0) {
    const double scale = kBabbleRms / rms;
    for (auto& v : sum) v *= scale;
  }
  return sum;
}

}  // namespace

void NoiseSpec::Validate() const {
  switch (kind) {
    case Kind::kSyntheticBabble:
      if (num_talkers < 1) {
        Fail(ErrorCode::kInvalidArgument,
             "synthetic babble needs num_talkers >= 1, got " +
                 std::to_string(num_talkers));
      }
      break;
    case Kind::kFile:
      if (!path || path->empty()) {
        Fail(ErrorCode::kInvalidArgument, "file noise needs a path");
      }
      break;
  }
}

AudioBuffer SynthesizeBabble(const NoiseSpec& spec, double duration_s,
                             double rate_hz) {
  if (spec.kind != NoiseSpec::Kind::kSyntheticBabble) {
    Fail(ErrorCode::kInvalidArgument,
         "SynthesizeBabble called with a file noise spec");
  }
  spec.Validate();
  if (!(duration_s > 0.0) || !(rate_hz > 0.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "babble duration and rate must be positive");
  }
  const auto n = static_cast<std::size_t>(std::llround(duration_s * rate_hz));
  return AudioBuffer(Babble(spec, n, rate_hz), rate_hz);
}

AudioBuffer MakeNoise(const NoiseSpec& spec, std::size_t min_samples,
                      double rate_hz) {
  spec.Validate();
  if (spec.kind == NoiseSpec::Kind::kSyntheticBabble) {
    return AudioBuffer(Babble(spec, min_samples, rate_hz), rate_hz);
  }
  AudioBuffer noise = Resample(LoadWav(*spec.path), rate_hz);
  if (noise.size() < min_samples) {
    Fail(ErrorCode::kInvalidArgument,
         "noise file '" + spec.path->string() + "' has " +
             std::to_string(noise.size()) + " samples at " +
             std::to_string(rate_hz) + " Hz, need " +
             std::to_string(min_samples));
  }
  return noise;
}

double NoiseGainForSnr(const AudioBuffer& clean, const AudioBuffer& noise,
                       double snr_db) {
  if (clean.sample_rate_hz() != noise.sample_rate_hz()) {
    Fail(ErrorCode::kInvalidArgument,
         "sample rate mismatch: clean " +
             std::to_string(clean.sample_rate_hz()) + " Hz, noise " +
             std::to_string(noise.sample_rate_hz()) + " Hz");
  }
  if (noise.size() < clean.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "noise (" + std::to_string(noise.size()) +
             " samples) is shorter than clean (" +
             std::to_string(clean.size()) + ")");
  }
  if (!std::isfinite(snr_db)) {
    Fail(ErrorCode::kInvalidArgument, "snr_db must be finite");
  }
  const double p_clean = MeanPower(clean.samples());
  const double p_noise = MeanPower(noise.samples().first(clean.size()));
  if (p_clean == 0.0) Fail(ErrorCode::kDegenerateInput, "clean signal has zero power");
  if (p_noise == 0.0) Fail(ErrorCode::kDegenerateInput, "noise has zero power");
  return std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0)));
}

AudioBuffer MixAtSnr(const AudioBuffer& clean, const AudioBuffer& noise,
                     double snr_db) {
  const double g = NoiseGainForSnr(clean, noise, snr_db);
  const auto c = clean.samples();
  const auto n = noise.samples();
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i] + g * n[i];
  return AudioBuffer(std::move(out), clean.sample_rate_hz());
}

}  // namespace civb
