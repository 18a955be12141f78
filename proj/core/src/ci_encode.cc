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

#include "civb/ci_encode.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "civb/drnl.h"
#include "civb/error.h"

namespace civb {
namespace {

// FFTW's planner is not reentrant.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

class FftwPlan {
 public:
  FftwPlan(int n, fftw_complex* in, fftw_complex* out, int sign) {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan_ = fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE);
  }
  ~FftwPlan() {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan_);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;

  void Execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

std::int64_t Onset(std::int64_t frame, std::size_t channel,
                   std::size_t num_channels, double period, bool interleaved) {
  if (!interleaved) {
    return static_cast<std::int64_t>(std::floor(static_cast<double>(frame) * period));
  }
  const double slot = static_cast<double>(frame) * static_cast<double>(num_channels) +
                      static_cast<double>(channel);
  return static_cast<std::int64_t>(
      std::floor(slot * period / static_cast<double>(num_channels)));
}

}  // namespace

EncoderConfig EncoderConfig::ForRate(double rate_hz, int num_channels) {
  EncoderConfig cfg;
  const double fastest =
      rate_hz / (2.0 * cfg.pulse_phase_samples * std::max(1, num_channels));
  cfg.pulses_per_second = std::min(cfg.pulses_per_second, fastest);
  return cfg;
}

void EncoderConfig::Validate(double rate_hz) const {
  if (!(envelope_cutoff_hz > 0.0) || envelope_cutoff_hz >= 0.5 * rate_hz) {
    Fail(ErrorCode::kInvalidArgument,
         "envelope_cutoff_hz must lie in (0, Nyquist), got " +
             std::to_string(envelope_cutoff_hz));
  }
  if (envelope_lp_order < 1) {
    Fail(ErrorCode::kInvalidArgument, "envelope_lp_order must be >= 1");
  }
  if (pulse_phase_samples < 1) {
    Fail(ErrorCode::kInvalidArgument, "pulse_phase_samples must be >= 1");
  }
  if (!(pulses_per_second > 0.0) ||
      pulses_per_second > rate_hz / (2.0 * pulse_phase_samples)) {
    Fail(ErrorCode::kInvalidArgument,
         "pulse rate " + std::to_string(pulses_per_second) +
             " pps is infeasible at " + std::to_string(rate_hz) + " Hz with " +
             std::to_string(pulse_phase_samples) + "-sample phases");
  }
}

void EncoderConfig::ValidateFor(double rate_hz, std::size_t num_channels) const {
  Validate(rate_hz);
  if (interleaved && num_channels > 0 &&
      FramePeriod(rate_hz) / static_cast<double>(num_channels) <
          2.0 * pulse_phase_samples) {
    Fail(ErrorCode::kInvalidArgument,
         "pulse rate " + std::to_string(pulses_per_second) + " pps with " +
             std::to_string(num_channels) +
             " interleaved channels leaves less than one pulse width per slot "
             "at " + std::to_string(rate_hz) + " Hz");
  }
}

std::size_t Electrodogram::TotalPulses() const {
  std::size_t total = 0;
  for (const auto& ch : channels) total += ch.pulses.size();
  return total;
}

std::vector<double> Electrodogram::RenderChannel(std::size_t channel) const {
  if (channel >= channels.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "channel " + std::to_string(channel) + " out of range");
  }
  std::vector<double> wave(static_cast<std::size_t>(num_samples), 0.0);
  for (const Pulse& p : channels[channel].pulses) {
    for (int i = 0; i < phase_samples; ++i) {
      wave[static_cast<std::size_t>(p.onset_sample + i)] = p.amplitude;
      wave[static_cast<std::size_t>(p.onset_sample + phase_samples + i)] =
          -p.amplitude;
    }
  }
  return wave;
}

double PulseCharge(const Pulse& pulse, int phase_samples) {
  double positive = 0.0;
  double negative = 0.0;
  for (int i = 0; i < phase_samples; ++i) {
    positive += pulse.amplitude;
    negative += -pulse.amplitude;
  }
  return positive + negative;
}

std::vector<std::complex<double>> AnalyticSignal(std::span<const double> x) {
  if (x.size() < 2) {
    Fail(ErrorCode::kInvalidArgument,
         "analytic signal needs at least 2 samples, got " +
             std::to_string(x.size()));
  }
  const int n = static_cast<int>(x.size());
  std::vector<std::complex<double>> buf(x.begin(), x.end());
  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  {
    FftwPlan forward(n, data, data, FFTW_FORWARD);
    forward.Execute();
  }
  const int half = n / 2;
  // Bins 1 .. ceil(n/2)-1 are strictly positive frequencies.
  for (int k = 1; k < (n + 1) / 2; ++k) buf[static_cast<std::size_t>(k)] *= 2.0;
  for (int k = half + 1; k < n; ++k) buf[static_cast<std::size_t>(k)] = 0.0;
  {
    FftwPlan inverse(n, data, data, FFTW_BACKWARD);
    inverse.Execute();
  }
  const double scale = 1.0 / n;
  for (auto& v : buf) v *= scale;
  return buf;
}

std::vector<double> SsbDownshift(std::span<const double> x, double carrier_hz,
                                 double rate_hz) {
  if (!(carrier_hz > 0.0) || carrier_hz >= 0.5 * rate_hz) {
    Fail(ErrorCode::kInvalidArgument,
         "SSB carrier " + std::to_string(carrier_hz) +
             " Hz must lie in (0, Nyquist)");
  }
  const auto z = AnalyticSignal(x);
  const double w = 2.0 * std::numbers::pi * carrier_hz / rate_hz;
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double phase = w * static_cast<double>(i);
    // Re(z e^{-j phase}).
    y[i] = z[i].real() * std::cos(phase) + z[i].imag() * std::sin(phase);
  }
  return y;
}

std::vector<double> EnvelopeDetect(std::span<const double> x,
                                   const EncoderConfig& cfg, double rate_hz) {
  cfg.Validate(rate_hz);
  std::vector<double> rectified(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) rectified[i] = std::max(x[i], 0.0);
  auto env = LowpassFilter(rectified, cfg.envelope_cutoff_hz,
                           (cfg.envelope_lp_order + 1) / 2, rate_hz);
  for (double& v : env) v = std::max(v, 0.0);
  return env;
}

Electrodogram PulseEncode(const std::vector<std::vector<double>>& envelopes,
                          const EncoderConfig& cfg, std::span<const double> cfs,
                          double rate_hz) {
  cfg.ValidateFor(rate_hz, envelopes.size());
  if (cfs.size() != envelopes.size()) {
    Fail(ErrorCode::kInvalidArgument,
         std::to_string(envelopes.size()) + " envelopes but " +
             std::to_string(cfs.size()) + " channel frequencies");
  }
  const std::size_t len = envelopes.empty() ? 0 : envelopes.front().size();
  for (const auto& env : envelopes) {
    if (env.size() != len) {
      Fail(ErrorCode::kInvalidArgument, "envelopes differ in length");
    }
    if (std::any_of(env.begin(), env.end(), [](double v) { return !(v >= 0.0) || !std::isfinite(v); })) {
      Fail(ErrorCode::kInvalidArgument,
           "envelopes must be nonnegative and finite");
    }
  }

  Electrodogram gram;
  gram.rate_hz = rate_hz;
  gram.num_samples = static_cast<std::int64_t>(len);
  gram.phase_samples = cfg.pulse_phase_samples;
  const double period = cfg.FramePeriod(rate_hz);
  const std::size_t n_ch = envelopes.size();

  for (std::size_t k = 0; k < n_ch; ++k) {
    ElectrodeChannel ch;
    ch.cf_hz = cfs[k];
    for (std::int64_t m = 0;; ++m) {
      const std::int64_t onset = Onset(m, k, n_ch, period, cfg.interleaved);
      if (onset + gram.PulseWidth() > gram.num_samples) break;
      ch.pulses.push_back(
          {onset, envelopes[k][static_cast<std::size_t>(onset)]});
    }
    gram.channels.push_back(std::move(ch));
  }
  return gram;
}

}  // namespace civb
