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

#include "civb/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "civb/error.h"

namespace civb {
namespace {

struct Moments {
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
};

Moments CenteredMoments(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  Moments m;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    m.sxy += dx * dy;
    m.sxx += dx * dx;
    m.syy += dy * dy;
  }
  return m;
}

}  // namespace

std::string_view ConditionName(Condition c) {
  switch (c) {
    case Condition::kQuiet: return "quiet";
    case Condition::kBabble5dB: return "babble_5dB";
    case Condition::kBabble10dB: return "babble_10dB";
  }
  return "?";
}

std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kProposed: return "proposed";
    case Method::kDrnlBaseline: return "drnl_baseline";
  }
  return "?";
}

std::optional<Condition> ParseCondition(std::string_view text) {
  if (text == "quiet") return Condition::kQuiet;
  if (text == "5" || text == "babble_5dB") return Condition::kBabble5dB;
  if (text == "10" || text == "babble_10dB") return Condition::kBabble10dB;
  return std::nullopt;
}

std::optional<Method> ParseMethod(std::string_view text) {
  if (text == "proposed") return Method::kProposed;
  if (text == "drnl_baseline" || text == "baseline" || text == "drnl") {
    return Method::kDrnlBaseline;
  }
  return std::nullopt;
}

std::optional<double> ConditionSnrDb(Condition c) {
  switch (c) {
    case Condition::kQuiet: return std::nullopt;
    case Condition::kBabble5dB: return 5.0;
    case Condition::kBabble10dB: return 10.0;
  }
  return std::nullopt;
}

double PearsonR(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "correlation length mismatch: " + std::to_string(x.size()) + " vs " +
             std::to_string(y.size()));
  }
  if (x.size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "correlation needs at least 2 samples");
  }
  const Moments m = CenteredMoments(x, y);
  if (m.sxx == 0.0) Fail(ErrorCode::kDegenerateInput, "zero-variance reference");
  if (m.syy == 0.0) Fail(ErrorCode::kDegenerateInput, "zero-variance test signal");
  return m.sxy / std::sqrt(m.sxx * m.syy);
}

Alignment Align(std::span<const double> reference, std::span<const double> test,
                std::int64_t max_lag_samples) {
  const auto n_ref = static_cast<std::int64_t>(reference.size());
  const auto n_test = static_cast<std::int64_t>(test.size());
  if (max_lag_samples < 0 || max_lag_samples >= std::min(n_ref, n_test)) {
    Fail(ErrorCode::kInvalidArgument,
         "max lag " + std::to_string(max_lag_samples) +
             " must lie in [0, min length)");
  }
  auto all_zero = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double s) { return s == 0.0; });
  };
  if (all_zero(reference)) {
    Fail(ErrorCode::kDegenerateInput, "zero-variance reference (all zero)");
  }
  if (all_zero(test)) {
    Fail(ErrorCode::kDegenerateInput, "alignment test signal is all zero");
  }

  // Overlap for lag L: reference[n], test[n + L].
  auto overlap = [&](std::int64_t lag) {
    const std::int64_t ref_begin = std::max<std::int64_t>(0, -lag);
    const std::int64_t ref_end = std::min(n_ref, n_test - lag);
    return std::pair{ref_begin, std::max(ref_begin, ref_end)};
  };

  bool found = false;
  std::int64_t best_lag = 0;
  double best_r = 0.0;
  for (std::int64_t lag = -max_lag_samples; lag <= max_lag_samples; ++lag) {
    const auto [b, e] = overlap(lag);
    if (e - b < 2) continue;
    const auto ref = reference.subspan(static_cast<std::size_t>(b),
                                       static_cast<std::size_t>(e - b));
    const auto tst = test.subspan(static_cast<std::size_t>(b + lag),
                                  static_cast<std::size_t>(e - b));
    const Moments m = CenteredMoments(ref, tst);
    if (m.sxx == 0.0 || m.syy == 0.0) continue;
    const double r = m.sxy / std::sqrt(m.sxx * m.syy);
    // Ties resolve to the smallest |lag|, then the negative one.
    if (!found || r > best_r ||
        (r == best_r && std::abs(lag) < std::abs(best_lag))) {
      found = true;
      best_r = r;
      best_lag = lag;
    }
  }
  if (!found) {
    Fail(ErrorCode::kDegenerateInput, "no lag gives a non-degenerate overlap");
  }

  const auto [b, e] = overlap(best_lag);
  Alignment out;
  out.lag = best_lag;
  out.r = best_r;
  out.reference.assign(reference.begin() + b, reference.begin() + e);
  out.test.assign(test.begin() + b + best_lag, test.begin() + e + best_lag);
  return out;
}

double ImprovementPercent(double proposed_r, double baseline_r) {
  if (baseline_r == 0.0) {
    Fail(ErrorCode::kInvalidArgument, "improvement over a zero baseline");
  }
  return 100.0 * (proposed_r - baseline_r) / baseline_r;
}

}  // namespace civb
