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

#include "civb/drnl.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "civb/error.h"
#include "civb/iir.h"

namespace civb {
namespace {

constexpr double kGreenwoodA = 165.4;
constexpr double kGreenwoodK = 0.88;
constexpr double kGreenwoodSlope = 2.1;

void RequirePositive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    Fail(ErrorCode::kInvalidArgument,
         std::string(what) + " must be positive, got " + std::to_string(v));
  }
}

void RequireCascade(int n, const char* what) {
  if (n < 1) {
    Fail(ErrorCode::kInvalidArgument,
         std::string(what) + " must be >= 1, got " + std::to_string(n));
  }
}

}  // namespace

void DrnlChannelParams::Validate(double rate_hz) const {
  RequirePositive(rate_hz, "rate_hz");
  const double nyquist = 0.5 * rate_hz;
  RequirePositive(center_frequency_hz, "center_frequency_hz");
  RequirePositive(linear_gain, "linear_gain");
  RequirePositive(linear_cf_hz, "linear_cf_hz");
  RequirePositive(linear_bw_hz, "linear_bw_hz");
  RequirePositive(nonlinear_cf_hz, "nonlinear_cf_hz");
  RequirePositive(nonlinear_bw_hz, "nonlinear_bw_hz");
  RequireCascade(linear_gt_cascade, "linear_gt_cascade");
  RequireCascade(linear_lp_cascade, "linear_lp_cascade");
  RequireCascade(nonlinear_gt_cascade, "nonlinear_gt_cascade");
  RequireCascade(nonlinear_lp_cascade, "nonlinear_lp_cascade");
  for (double f : {center_frequency_hz, linear_cf_hz, nonlinear_cf_hz}) {
    if (f >= nyquist) {
      Fail(ErrorCode::kInvalidArgument,
           "DRNL frequency " + std::to_string(f) + " Hz is not below Nyquist " +
               std::to_string(nyquist) + " Hz");
    }
  }
  RequirePositive(a, "a");
  RequirePositive(b, "b");
  if (!(c > 0.0 && c <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "compression exponent c must lie in (0, 1], got " + std::to_string(c));
  }
}

std::vector<double> Filterbank::CenterFrequencies() const {
  std::vector<double> cfs;
  cfs.reserve(channels.size());
  for (const auto& ch : channels) cfs.push_back(ch.center_frequency_hz);
  return cfs;
}

double GreenwoodFrequency(double place) {
  return kGreenwoodA * (std::pow(10.0, kGreenwoodSlope * place) - kGreenwoodK);
}

double GreenwoodPlace(double frequency_hz) {
  return std::log10(frequency_hz / kGreenwoodA + kGreenwoodK) / kGreenwoodSlope;
}

std::vector<double> GammatoneFilter(std::span<const double> signal,
                                    double cf_hz, double bw_hz, int order,
                                    double rate_hz) {
  RequirePositive(rate_hz, "rate_hz");
  RequirePositive(cf_hz, "gammatone cf");
  RequirePositive(bw_hz, "gammatone bandwidth");
  RequireCascade(order, "gammatone order");
  if (cf_hz + 0.5 * bw_hz >= 0.5 * rate_hz) {
    Fail(ErrorCode::kInvalidArgument,
         "gammatone band edge cf + bw/2 = " +
             std::to_string(cf_hz + 0.5 * bw_hz) +
             " Hz is not below Nyquist " + std::to_string(0.5 * rate_hz) +
             " Hz");
  }
  return ApplyCascade(GammatoneSection(cf_hz, bw_hz, rate_hz), order, signal);
}

std::vector<double> LowpassFilter(std::span<const double> signal,
                                  double cutoff_hz, int order, double rate_hz) {
  RequirePositive(rate_hz, "rate_hz");
  RequirePositive(cutoff_hz, "lowpass cutoff");
  RequireCascade(order, "lowpass order");
  if (cutoff_hz >= 0.5 * rate_hz) {
    Fail(ErrorCode::kInvalidArgument,
         "lowpass cutoff " + std::to_string(cutoff_hz) +
             " Hz is not below Nyquist " + std::to_string(0.5 * rate_hz) +
             " Hz");
  }
  return ApplyCascade(ButterworthLowpassSection(cutoff_hz, rate_hz), order,
                      signal);
}

std::vector<double> BrokenStick(std::span<const double> x, double a, double b,
                                double c) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double mag = std::abs(x[i]);
    const double out = std::min(a * mag, b * std::pow(mag, c));
    y[i] = std::copysign(out, x[i]);
    if (x[i] == 0.0) y[i] = 0.0;
  }
  return y;
}

std::vector<double> DrnlChannel(std::span<const double> signal,
                                const DrnlChannelParams& params,
                                double rate_hz) {
  params.Validate(rate_hz);

  std::vector<double> linear(signal.begin(), signal.end());
  for (double& v : linear) v *= params.linear_gain;
  linear = GammatoneFilter(linear, params.linear_cf_hz, params.linear_bw_hz,
                           params.linear_gt_cascade, rate_hz);
  linear = LowpassFilter(linear, params.linear_cf_hz, params.linear_lp_cascade,
                         rate_hz);

  auto nonlinear =
      GammatoneFilter(signal, params.nonlinear_cf_hz, params.nonlinear_bw_hz,
                      params.nonlinear_gt_cascade, rate_hz);
  nonlinear = BrokenStick(nonlinear, params.a, params.b, params.c);
  nonlinear =
      GammatoneFilter(nonlinear, params.nonlinear_cf_hz, params.nonlinear_bw_hz,
                      params.nonlinear_gt_cascade, rate_hz);
  nonlinear = LowpassFilter(nonlinear, params.nonlinear_cf_hz,
                            params.nonlinear_lp_cascade, rate_hz);

  for (std::size_t i = 0; i < linear.size(); ++i) linear[i] += nonlinear[i];
  return linear;
}

Filterbank MakeFilterbank(const FilterbankLayout& layout, double rate_hz,
                          const DrnlDefaults& defaults) {
  RequirePositive(rate_hz, "rate_hz");
  const double nyquist = 0.5 * rate_hz;
  const double lo = layout.min_cf_hz;
  const double hi = layout.MaxCfAt(rate_hz);
  if (layout.num_channels < 1) {
    Fail(ErrorCode::kInvalidArgument,
         "num_channels must be >= 1, got " +
             std::to_string(layout.num_channels));
  }
  RequirePositive(lo, "min_cf_hz");
  if (!(lo < hi) || !(hi < nyquist)) {
    Fail(ErrorCode::kInvalidArgument,
         "filterbank layout needs min_cf < max_cf < Nyquist, got " +
             std::to_string(lo) + " / " + std::to_string(hi) + " / " +
             std::to_string(nyquist) + " Hz");
  }
  const int n = layout.num_channels;
  std::vector<double> cfs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    if (layout.spacing == ChannelSpacing::kGreenwood) {
      const double x0 = GreenwoodPlace(lo);
      const double x1 = GreenwoodPlace(hi);
      cfs[static_cast<std::size_t>(i)] = GreenwoodFrequency(x0 + t * (x1 - x0));
    } else {
      cfs[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, t);
    }
  }
  // Endpoints are exact.
  cfs.front() = lo;
  if (n > 1) cfs.back() = hi;

  Filterbank bank;
  bank.rate_hz = rate_hz;
  for (double cf : cfs) {
    DrnlChannelParams p;
    p.center_frequency_hz = cf;
    p.linear_gain = defaults.linear_gain;
    p.linear_gt_cascade = defaults.linear_gt_cascade;
    p.linear_lp_cascade = defaults.linear_lp_cascade;
    p.linear_cf_hz = cf;
    p.linear_bw_hz = defaults.linear_bw_factor * cf;
    p.nonlinear_gt_cascade = defaults.nonlinear_gt_cascade;
    p.nonlinear_lp_cascade = defaults.nonlinear_lp_cascade;
    p.nonlinear_cf_hz = cf;
    p.nonlinear_bw_hz = defaults.nonlinear_bw_factor * cf;
    p.a = defaults.a;
    p.b = defaults.b;
    p.c = defaults.c;
    p.Validate(rate_hz);
    bank.channels.push_back(p);
  }
  return bank;
}

std::vector<std::vector<double>> Analyze(const AudioBuffer& signal,
                                         const Filterbank& bank, int threads) {
  if (signal.sample_rate_hz() != bank.rate_hz) {
    Fail(ErrorCode::kInvalidArgument,
         "filterbank built for " + std::to_string(bank.rate_hz) +
             " Hz applied to a " + std::to_string(signal.sample_rate_hz()) +
             " Hz signal");
  }
  const auto x = signal.samples();
  std::vector<std::vector<double>> out(bank.channels.size());
  if (threads <= 1) {
    for (std::size_t k = 0; k < bank.channels.size(); ++k) {
      out[k] = DrnlChannel(x, bank.channels[k], bank.rate_hz);
    }
    return out;
  }
  std::vector<std::future<std::vector<double>>> jobs;
  jobs.reserve(bank.channels.size());
  for (const auto& ch : bank.channels) {
    jobs.push_back(std::async(std::launch::async, [&, ch] {
      return DrnlChannel(x, ch, bank.rate_hz);
    }));
  }
  for (std::size_t k = 0; k < jobs.size(); ++k) out[k] = jobs[k].get();
  return out;
}

}  // namespace civb
