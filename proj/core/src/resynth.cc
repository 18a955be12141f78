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

#include "civb/resynth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "civb/error.h"
#include "civb/iir.h"

namespace civb {

std::vector<double> PulsesToEnvelope(const Electrodogram& gram,
                                     std::size_t channel,
                                     const ResynthConfig& cfg) {
  if (channel >= gram.channels.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "channel " + std::to_string(channel) + " out of range (" +
             std::to_string(gram.channels.size()) + " channels)");
  }
  if (!(cfg.smoothing_cutoff_hz > 0.0) ||
      cfg.smoothing_cutoff_hz >= 0.5 * gram.rate_hz) {
    Fail(ErrorCode::kInvalidArgument, "smoothing cutoff must lie in (0, Nyquist)");
  }
  std::vector<double> hold(static_cast<std::size_t>(gram.num_samples), 0.0);
  const auto& pulses = gram.channels[channel].pulses;
  for (std::size_t i = 0; i < pulses.size(); ++i) {
    const auto begin = static_cast<std::size_t>(pulses[i].onset_sample);
    const auto end = i + 1 < pulses.size()
                         ? static_cast<std::size_t>(pulses[i + 1].onset_sample)
                         : hold.size();
    std::fill(hold.begin() + static_cast<long>(begin),
              hold.begin() + static_cast<long>(end), pulses[i].amplitude);
  }
  return OnePoleCascade(hold, cfg.smoothing_cutoff_hz, cfg.smoothing_sections,
                        gram.rate_hz);
}

AudioBuffer Synthesize(const Electrodogram& gram, const ResynthConfig& cfg) {
  if (gram.channels.empty()) {
    Fail(ErrorCode::kInvalidArgument, "cannot synthesize an empty electrodogram");
  }
  std::vector<double> out(static_cast<std::size_t>(gram.num_samples), 0.0);
  for (std::size_t k = 0; k < gram.channels.size(); ++k) {
    const auto env = PulsesToEnvelope(gram, k, cfg);
    const double w =
        2.0 * std::numbers::pi * gram.channels[k].cf_hz / gram.rate_hz;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += env[i] * std::cos(w * static_cast<double>(i));
    }
  }
  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    const double scale = cfg.peak_level / peak;
    for (double& v : out) v *= scale;
  }
  return AudioBuffer(std::move(out), gram.rate_hz);
}

}  // namespace civb
