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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "civb/enhance.h"
#include "civb/error.h"

namespace civb {
namespace {

class ArKalmanFilter {
 public:
  explicit ArKalmanFilter(int order)
      : state_(Eigen::VectorXd::Zero(order)),
        cov_(Eigen::MatrixXd::Zero(order, order)),
        predicted_(Eigen::MatrixXd::Zero(order, order)) {}

  // One predict/update step with transition coefficients `a`, excitation
  // variance `q`, measurement variance `r`. Returns the filtered estimate
  // of the current sample.
  double Step(const Eigen::VectorXd& a, double q, double r, double y) {
    const Eigen::Index p = state_.size();

    // Companion-form prediction, O(p^2).
    const double head = a.dot(state_);
    for (Eigen::Index i = p - 1; i > 0; --i) state_(i) = state_(i - 1);
    state_(0) = head;

    const Eigen::RowVectorXd a_cov = a.transpose() * cov_;
    predicted_.bottomRightCorner(p - 1, p - 1) =
        cov_.topLeftCorner(p - 1, p - 1);
    predicted_(0, 0) = a_cov.dot(a) + q;
    for (Eigen::Index j = 1; j < p; ++j) {
      predicted_(0, j) = a_cov(j - 1);
      predicted_(j, 0) = a_cov(j - 1);
    }

    const double innovation_var = predicted_(0, 0) + r;
    if (!(innovation_var > 0.0)) {
      // No uncertainty anywhere: the measurement is the state.
      state_(0) = y;
      cov_ = predicted_;
      return y;
    }
    const Eigen::VectorXd gain = predicted_.col(0) / innovation_var;
    state_ += gain * (y - state_(0));
    cov_ = predicted_ - gain * predicted_.row(0);
    // Re-symmetrize.
    cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
    if (r == 0.0) state_(0) = y;
    return state_(0);
  }

  // Replaces the state with known samples (silent-frame bypass).
  void Observe(double y) {
    const Eigen::Index p = state_.size();
    for (Eigen::Index i = p - 1; i > 0; --i) state_(i) = state_(i - 1);
    state_(0) = y;
  }

  const Eigen::MatrixXd& covariance() const { return cov_; }

 private:
  Eigen::VectorXd state_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd predicted_;
};

void RecordCovariance(const Eigen::MatrixXd& cov, KalmanDiagnostics& diag,
                      bool first) {
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      cov, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (first) {
    diag.max_asymmetry = asym;
    diag.min_eigenvalue = min_eig;
  } else {
    diag.max_asymmetry = std::max(diag.max_asymmetry, asym);
    diag.min_eigenvalue = std::min(diag.min_eigenvalue, min_eig);
  }
}

}  // namespace

KalmanConfig KalmanConfig::ForRate(double rate_hz) {
  KalmanConfig cfg;
  cfg.ar_order = rate_hz > 15000.0 ? 16 : 10;
  return cfg;
}

int KalmanConfig::FrameSamples(double rate_hz) const {
  return static_cast<int>(std::lround(frame_ms * rate_hz / 1000.0));
}

void KalmanConfig::Validate(double rate_hz) const {
  if (ar_order < 1) {
    Fail(ErrorCode::kInvalidArgument,
         "ar_order must be >= 1, got " + std::to_string(ar_order));
  }
  if (iterations < 1) {
    Fail(ErrorCode::kInvalidArgument,
         "iterations must be >= 1, got " + std::to_string(iterations));
  }
  if (!(frame_ms > 0.0) || !(noise_estimate_ms > 0.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "frame_ms and noise_estimate_ms must be positive");
  }
  if (ar_order >= FrameSamples(rate_hz)) {
    Fail(ErrorCode::kInvalidArgument,
         "ar_order " + std::to_string(ar_order) +
             " must be below the frame length of " +
             std::to_string(FrameSamples(rate_hz)) + " samples");
  }
  if (noise_variance_override &&
      !(*noise_variance_override >= 0.0 &&
        std::isfinite(*noise_variance_override))) {
    Fail(ErrorCode::kInvalidArgument,
         "noise_variance_override must be a nonnegative number");
  }
}

double EstimateNoiseVariance(const AudioBuffer& noisy, const KalmanConfig& cfg) {
  if (cfg.noise_variance_override) return *cfg.noise_variance_override;
  const auto n = static_cast<std::size_t>(
      std::lround(cfg.noise_estimate_ms * noisy.sample_rate_hz() / 1000.0));
  if (n < 2 || noisy.size() < n) {
    Fail(ErrorCode::kInvalidArgument,
         "noise estimate needs " + std::to_string(n) + " samples, buffer has " +
             std::to_string(noisy.size()));
  }
  const auto lead = noisy.samples().first(n);
  double mean = 0.0;
  for (double v : lead) mean += v;
  mean /= static_cast<double>(n);
  double acc = 0.0;
  for (double v : lead) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(n);
}

AudioBuffer KalmanEnhance(const AudioBuffer& noisy, const KalmanConfig& cfg,
                          KalmanDiagnostics* diagnostics) {
  const double rate = noisy.sample_rate_hz();
  cfg.Validate(rate);
  const double r = EstimateNoiseVariance(noisy, cfg);
  const auto y = noisy.samples();
  const std::size_t n = y.size();
  const auto frame_len = static_cast<std::size_t>(cfg.FrameSamples(rate));
  const auto order = static_cast<std::size_t>(cfg.ar_order);

  if (diagnostics) *diagnostics = KalmanDiagnostics{};
  std::vector<double> analysis(y.begin(), y.end());
  std::vector<double> output(n);

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    ArKalmanFilter filter(cfg.ar_order);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(cfg.ar_order);
    double q = 0.0;
    bool have_model = false;

    for (std::size_t start = 0; start < n; start += frame_len) {
      const std::size_t stop = std::min(n, start + frame_len);
      const std::span<const double> frame(analysis.data() + start,
                                          stop - start);
      const bool silent = std::all_of(frame.begin(), frame.end(),
                                      [](double v) { return v == 0.0; });
      const bool last_iter = iter + 1 == cfg.iterations;
      if (silent) {
        for (std::size_t i = start; i < stop; ++i) {
          filter.Observe(y[i]);
          output[i] = y[i];
        }
        if (diagnostics && last_iter) ++diagnostics->silent_frames;
        continue;
      }
      if (frame.size() > order) {
        const LpcResult lpc = LpcCoefficients(frame, cfg.ar_order);
        a = Eigen::Map<const Eigen::VectorXd>(lpc.coefficients.data(),
                                              cfg.ar_order);
        q = lpc.residual_variance;
        // The first pass fits the noisy signal, whose prediction error
        // carries the white measurement noise as well.
        if (iter == 0) q = std::max(q - r, 0.1 * q);
        have_model = true;
      }
      for (std::size_t i = start; i < stop; ++i) {
        if (have_model) {
          output[i] = filter.Step(a, q, r, y[i]);
        } else {
          filter.Observe(y[i]);
          output[i] = y[i];
        }
      }
      if (diagnostics && last_iter) {
        RecordCovariance(filter.covariance(), *diagnostics,
                         diagnostics->frames == 0);
        ++diagnostics->frames;
      }
    }
    analysis = output;
  }

  RequireFinite(output, "Kalman output");
  return AudioBuffer(std::move(output), rate);
}

AudioBuffer Preemphasize(const AudioBuffer& signal, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "preemphasis alpha must lie in [0, 1), got " + std::to_string(alpha));
  }
  const auto x = signal.samples();
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = i == 0 ? x[0] : x[i] - alpha * x[i - 1];
  }
  return AudioBuffer(std::move(y), signal.sample_rate_hz());
}

}  // namespace civb
