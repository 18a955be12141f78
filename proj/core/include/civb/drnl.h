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

// Dual-resonance non-linear (DRNL) filterbank.
//
// Each channel runs the input through two parallel paths and sums them:
//
//   linear:     gain -> gammatone^Lg -> lowpass^Ll
//   nonlinear:  gammatone^Ng -> broken stick -> gammatone^Ng -> lowpass^Nl
//
// The broken-stick element is linear (slope `a`) for small inputs and
// compressive (b |x|^c) above the crossover |x| = (b/a)^(1/(1-c)).

#ifndef CIVB_DRNL_H_
#define CIVB_DRNL_H_

#include <optional>
#include <span>
#include <vector>

#include "civb/audio_buffer.h"

namespace civb {

struct DrnlChannelParams {
  double center_frequency_hz = 1000.0;

  double linear_gain = 500.0;
  int linear_gt_cascade = 2;
  int linear_lp_cascade = 4;
  double linear_cf_hz = 1000.0;
  double linear_bw_hz = 300.0;

  int nonlinear_gt_cascade = 3;
  int nonlinear_lp_cascade = 3;
  double nonlinear_cf_hz = 1000.0;
  double nonlinear_bw_hz = 250.0;

  double a = 1.0e4;
  double b = 0.1;
  double c = 0.25;

  // Throws kInvalidArgument when a frequency is out of range at `rate_hz`
  // or a/b/c are outside their domains.
  void Validate(double rate_hz) const;
};

// Values copied into every channel by MakeFilterbank. Bandwidths and path
// frequencies scale with the channel CF.
struct DrnlDefaults {
  double linear_gain = 500.0;
  int linear_gt_cascade = 2;
  int linear_lp_cascade = 4;
  double linear_bw_factor = 0.3;
  int nonlinear_gt_cascade = 3;
  int nonlinear_lp_cascade = 3;
  double nonlinear_bw_factor = 0.25;
  double a = 1.0e4;
  double b = 0.1;
  double c = 0.25;
};

enum class ChannelSpacing { kGreenwood, kLog };

struct FilterbankLayout {
  int num_channels = 16;
  double min_cf_hz = 250.0;
  // Unset means 0.4 x the operating rate.
  std::optional<double> max_cf_hz;
  ChannelSpacing spacing = ChannelSpacing::kGreenwood;

  double MaxCfAt(double rate_hz) const {
    return max_cf_hz.value_or(0.4 * rate_hz);
  }
};

struct Filterbank {
  double rate_hz = 0.0;
  std::vector<DrnlChannelParams> channels;

  std::vector<double> CenterFrequencies() const;
};

// Greenwood place-frequency map f(x) = 165.4 (10^(2.1 x) - 0.88) and its
// inverse.
double GreenwoodFrequency(double place);
double GreenwoodPlace(double frequency_hz);

// Cascade of `order` identical resonator sections, unity gain at cf.
// Requires cf + bw/2 below Nyquist.
std::vector<double> GammatoneFilter(std::span<const double> signal,
                                    double cf_hz, double bw_hz, int order,
                                    double rate_hz);

// `order` cascaded second-order Butterworth sections at `cutoff_hz`.
std::vector<double> LowpassFilter(std::span<const double> signal,
                                  double cutoff_hz, int order, double rate_hz);

// sign(x) min(a|x|, b|x|^c), elementwise.
std::vector<double> BrokenStick(std::span<const double> x, double a, double b,
                                double c);

std::vector<double> DrnlChannel(std::span<const double> signal,
                                const DrnlChannelParams& params,
                                double rate_hz);

Filterbank MakeFilterbank(const FilterbankLayout& layout, double rate_hz,
                          const DrnlDefaults& defaults = {});

// One output vector per channel, each the length of `signal`. Channels are
// processed independently; `threads` > 1 fans them out.
std::vector<std::vector<double>> Analyze(const AudioBuffer& signal,
                                         const Filterbank& bank,
                                         int threads = 1);

}  // namespace civb

#endif  // CIVB_DRNL_H_
