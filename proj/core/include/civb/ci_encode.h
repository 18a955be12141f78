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

// Implant-side encoding: single-sideband translation of each filterbank
// channel to baseband, envelope detection, and charge-balanced biphasic
// pulse generation.

#ifndef CIVB_CI_ENCODE_H_
#define CIVB_CI_ENCODE_H_

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace civb {

struct EncoderConfig {
  double envelope_cutoff_hz = 200.0;
  // Filter order of the envelope smoother; realized as ceil(order / 2)
  // Butterworth sections.
  int envelope_lp_order = 4;
  double pulses_per_second = 900.0;
  int pulse_phase_samples = 1;
  bool interleaved = true;

  // 900 pps, lowered to the fastest rate at which `num_channels`
  // interleaved pulses still fit in one frame.
  static EncoderConfig ForRate(double rate_hz, int num_channels);

  // Samples between successive pulses on one channel.
  double FramePeriod(double rate_hz) const { return rate_hz / pulses_per_second; }

  void Validate(double rate_hz) const;
  // Also checks that interleaved pulses for `num_channels` cannot overlap.
  void ValidateFor(double rate_hz, std::size_t num_channels) const;
};

struct Pulse {
  std::int64_t onset_sample = 0;
  double amplitude = 0.0;
};

struct ElectrodeChannel {
  double cf_hz = 0.0;
  std::vector<Pulse> pulses;
};

// Pulses are symmetric biphasic: `phase_samples` samples at +amplitude
// followed by `phase_samples` at -amplitude.
struct Electrodogram {
  std::vector<ElectrodeChannel> channels;
  double rate_hz = 0.0;
  std::int64_t num_samples = 0;
  int phase_samples = 1;

  std::int64_t PulseWidth() const { return 2 * phase_samples; }
  std::size_t TotalPulses() const;

  // Sample-level current waveform of one electrode.
  std::vector<double> RenderChannel(std::size_t channel) const;
};

// Sum of the rendered samples of one pulse: positive phase total plus
// negative phase total.
double PulseCharge(const Pulse& pulse, int phase_samples);

// x + j H(x), built in the frequency domain (negative bins zeroed, positive
// bins doubled, DC and Nyquist kept).
std::vector<std::complex<double>> AnalyticSignal(std::span<const double> x);

// Re(analytic(x)[n] exp(-j 2 pi carrier n / rate)).
std::vector<double> SsbDownshift(std::span<const double> x, double carrier_hz,
                                 double rate_hz);

// Half-wave rectification, Butterworth smoothing, clamp at zero.
std::vector<double> EnvelopeDetect(std::span<const double> x,
                                   const EncoderConfig& cfg, double rate_hz);

// Samples each envelope at the pulse rate. In interleaved mode channel k's
// onsets are offset by k / N of a frame.
Electrodogram PulseEncode(const std::vector<std::vector<double>>& envelopes,
                          const EncoderConfig& cfg, std::span<const double> cfs,
                          double rate_hz);

}  // namespace civb

#endif  // CIVB_CI_ENCODE_H_
