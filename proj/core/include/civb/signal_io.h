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

// Waveform file I/O, sample-rate conversion and noise generation.

#ifndef CIVB_SIGNAL_IO_H_
#define CIVB_SIGNAL_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>

#include "civb/audio_buffer.h"

namespace civb {

// Reads a RIFF/WAVE file holding 16-bit PCM or 32-bit IEEE float samples
// (WAVE_FORMAT_EXTENSIBLE is accepted for both). Multichannel input is
// averaged to mono; 16-bit samples are scaled by 1/32768.
AudioBuffer LoadWav(const std::filesystem::path& path);

// Writes 16-bit PCM mono. Samples are clamped to [-1, 1] and quantized as
// round(x * 32768), saturating at 32767.
void SaveWav(const AudioBuffer& buffer, const std::filesystem::path& path);

// Kaiser-windowed sinc interpolation. The kernel spans 64 taps at the lower
// of the two rates and cuts off at 0.45 x that rate. Output length is
// round(n * target / source). Same-rate input is returned unchanged.
AudioBuffer Resample(const AudioBuffer& buffer, double target_rate_hz);

struct NoiseSpec {
  enum class Kind { kSyntheticBabble, kFile };

  Kind kind = Kind::kSyntheticBabble;
  int num_talkers = 8;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> path;

  void Validate() const;
};

// Sum of `num_talkers` independent speech-shaped noise streams, scaled to
// RMS 0.1. Each stream is Gaussian white noise through a fixed all-pole
// long-term speech spectrum. Bit-identical for a given seed.
AudioBuffer SynthesizeBabble(const NoiseSpec& spec, double duration_s,
                             double rate_hz);

// Loads the noise for `spec` at `rate_hz`, long enough to cover
// `min_samples`. File noise is resampled when needed and must not be
// shorter than required (it is never looped).
AudioBuffer MakeNoise(const NoiseSpec& spec, std::size_t min_samples,
                      double rate_hz);

// The gain g such that 10 log10(P_clean / P(g * noise)) == snr_db, with both
// powers measured over the first clean.size() samples.
double NoiseGainForSnr(const AudioBuffer& clean, const AudioBuffer& noise,
                       double snr_db);

// clean + g * noise (noise truncated to the clean length).
AudioBuffer MixAtSnr(const AudioBuffer& clean, const AudioBuffer& noise,
                     double snr_db);

}  // namespace civb

#endif  // CIVB_SIGNAL_IO_H_
