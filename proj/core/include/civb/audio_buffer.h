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

#ifndef CIVB_AUDIO_BUFFER_H_
#define CIVB_AUDIO_BUFFER_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace civb {

// A mono waveform plus its sampling rate. Construction validates that the
// rate is positive and every sample is finite; after that the buffer is
// treated as an immutable value.
class AudioBuffer {
 public:
  AudioBuffer(std::vector<double> samples, double sample_rate_hz);

  std::span<const double> samples() const noexcept { return samples_; }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }

  // Moves the sample vector out, leaving this buffer empty.
  std::vector<double> release() && { return std::move(samples_); }

 private:
  std::vector<double> samples_;
  double sample_rate_hz_;
};

// Throws Error(kNumeric) naming `what` if any value is NaN or infinite.
void RequireFinite(std::span<const double> values, std::string_view what);

double MeanPower(std::span<const double> values);
double Rms(std::span<const double> values);

}  // namespace civb

#endif  // CIVB_AUDIO_BUFFER_H_
