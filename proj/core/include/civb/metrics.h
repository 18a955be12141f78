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

// Waveform similarity between an input and its reconstruction.

#ifndef CIVB_METRICS_H_
#define CIVB_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace civb {

enum class Condition { kQuiet, kBabble5dB, kBabble10dB };
enum class Method { kProposed, kDrnlBaseline };

std::string_view ConditionName(Condition c);  // quiet, babble_5dB, babble_10dB
std::string_view MethodName(Method m);        // proposed, drnl_baseline
std::optional<Condition> ParseCondition(std::string_view text);
std::optional<Method> ParseMethod(std::string_view text);
// Mixing SNR of a babble condition; nullopt for quiet.
std::optional<double> ConditionSnrDb(Condition c);

struct MetricsRow {
  Condition condition = Condition::kQuiet;
  double sample_rate_hz = 0.0;
  Method method = Method::kProposed;
  double r = 0.0;
  std::int64_t alignment_lag_samples = 0;
};

// Pearson correlation coefficient, two-pass (means first). Throws on length
// mismatch, fewer than two samples, or a zero-variance input.
double PearsonR(std::span<const double> x, std::span<const double> y);

struct Alignment {
  std::vector<double> reference;
  std::vector<double> test;
  // test[n + lag] lines up with reference[n].
  std::int64_t lag = 0;
  double r = 0.0;
};

// Searches lags in [-max_lag, max_lag] for the highest Pearson correlation
// over the overlapping support and returns both signals cut to it.
Alignment Align(std::span<const double> reference, std::span<const double> test,
                std::int64_t max_lag_samples);

// 100 (proposed - baseline) / baseline.
double ImprovementPercent(double proposed_r, double baseline_r);

}  // namespace civb

#endif  // CIVB_METRICS_H_
