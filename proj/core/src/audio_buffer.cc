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

#include "civb/audio_buffer.h"

#include <cmath>
#include <string>
#include <utility>

#include "civb/error.h"

namespace civb {

AudioBuffer::AudioBuffer(std::vector<double> samples, double sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    Fail(ErrorCode::kInvalidArgument,
         "sample_rate_hz must be positive, got " +
             std::to_string(sample_rate_hz_));
  }
  RequireFinite(samples_, "audio samples");
}

void RequireFinite(std::span<const double> values, std::string_view what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      Fail(ErrorCode::kNumeric, std::string(what) +
                                    " contains a non-finite value at index " +
                                    std::to_string(i));
    }
  }
}

double MeanPower(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += v * v;
  return acc / static_cast<double>(values.size());
}

double Rms(std::span<const double> values) {
  return std::sqrt(MeanPower(values));
}

}  // namespace civb
