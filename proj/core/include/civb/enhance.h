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

// Speech enhancement front end: autoregressive (voice-generation model)
// Kalman filtering followed by preemphasis.

#ifndef CIVB_ENHANCE_H_
#define CIVB_ENHANCE_H_

#include <optional>
#include <span>
#include <vector>

#include "civb/audio_buffer.h"

namespace civb {

struct KalmanConfig {
  int ar_order = 10;
  double frame_ms = 20.0;
  int iterations = 2;
  double noise_estimate_ms = 100.0;
  std::optional<double> noise_variance_override;

  // AR order 10 up to 15 kHz, 16 above.
  static KalmanConfig ForRate(double rate_hz);

  int FrameSamples(double rate_hz) const;
  void Validate(double rate_hz) const;
};

struct LpcResult {
  // Predictor x[n] ~ sum_i coefficients[i] * x[n - 1 - i].
  std::vector<double> coefficients;
  double residual_variance = 0.0;
};

// Sample variance of the first noise_estimate_ms of `noisy` (assumed to be
// speech-free), or the override when one is configured.
double EstimateNoiseVariance(const AudioBuffer& noisy, const KalmanConfig& cfg);

// Autocorrelation method + Levinson-Durbin. A predictor whose polynomial has
// roots on or outside the unit circle is stabilized by reflecting those
// roots to 1/conj(z). Throws kDegenerateInput on an all-zero frame.
LpcResult LpcCoefficients(std::span<const double> frame, int order);

// True when 1 - sum a_i z^-(i+1) has all roots strictly inside the unit
// circle (step-down recursion, |k| < 1 at every stage).
bool IsStablePredictor(std::span<const double> coefficients);

// Reflects unstable roots of the predictor polynomial inside the unit
// circle and returns the rebuilt coefficients.
std::vector<double> StabilizePredictor(std::span<const double> coefficients);

// Per-frame covariance health, filled only when requested.
struct KalmanDiagnostics {
  double max_asymmetry = 0.0;
  double min_eigenvalue = 0.0;
  int frames = 0;
  int silent_frames = 0;
};

// Frame-wise AR Kalman filter. State = the last `ar_order` clean samples in
// companion form; the measurement is the current noisy sample. The first
// iteration fits the AR model to the noisy frame, later ones to the
// previous iteration's output. Output has the input's length and rate.
AudioBuffer KalmanEnhance(const AudioBuffer& noisy, const KalmanConfig& cfg,
                          KalmanDiagnostics* diagnostics = nullptr);

// y[0] = x[0], y[n] = x[n] - alpha x[n-1].
AudioBuffer Preemphasize(const AudioBuffer& signal, double alpha);

}  // namespace civb

#endif  // CIVB_ENHANCE_H_
