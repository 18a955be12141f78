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
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "civb/enhance.h"
#include "civb/error.h"

namespace civb {
namespace {

// Coefficients of A(z) = 1 + sum alpha_i z^-i for the predictor `a`.
std::vector<double> ToErrorFilter(std::span<const double> a) {
  std::vector<double> alpha(a.size() + 1);
  alpha[0] = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) alpha[i + 1] = -a[i];
  return alpha;
}

}  // namespace

bool IsStablePredictor(std::span<const double> coefficients) {
  std::vector<double> alpha = ToErrorFilter(coefficients);
  for (std::size_t m = coefficients.size(); m >= 1; --m) {
    const double k = alpha[m];
    if (!(std::abs(k) < 1.0)) return false;
    const double denom = 1.0 - k * k;
    std::vector<double> next(m);
    next[0] = 1.0;
    for (std::size_t i = 1; i < m; ++i) {
      next[i] = (alpha[i] - k * alpha[m - i]) / denom;
    }
    alpha = std::move(next);
  }
  return true;
}

std::vector<double> StabilizePredictor(std::span<const double> coefficients) {
  const auto p = static_cast<Eigen::Index>(coefficients.size());
  if (p == 0) return {};
  // Companion matrix of z^p - a_1 z^(p-1) - ... - a_p.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    companion(0, i) = coefficients[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  const Eigen::VectorXcd roots = solver.eigenvalues();

  constexpr double kMaxRadius = 1.0 - 1e-6;
  std::vector<std::complex<double>> poly{1.0};
  for (Eigen::Index i = 0; i < p; ++i) {
    std::complex<double> z = roots(i);
    const double mag = std::abs(z);
    if (mag >= 1.0) z = 1.0 / std::conj(z);
    if (std::abs(z) > kMaxRadius) z *= kMaxRadius / std::abs(z);
    // poly *= (1 - z w), w = z^-1.
    std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j] += poly[j];
      next[j + 1] -= z * poly[j];
    }
    poly = std::move(next);
  }
  std::vector<double> out(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -poly[i + 1].real();
  return out;
}

LpcResult LpcCoefficients(std::span<const double> frame, int order) {
  if (order < 1) {
    Fail(ErrorCode::kInvalidArgument,
         "LPC order must be >= 1, got " + std::to_string(order));
  }
  const auto p = static_cast<std::size_t>(order);
  if (frame.size() <= p) {
    Fail(ErrorCode::kInvalidArgument,
         "LPC frame of " + std::to_string(frame.size()) +
             " samples is too short for order " + std::to_string(order));
  }
  if (std::all_of(frame.begin(), frame.end(), [](double v) { return v == 0.0; })) {
    Fail(ErrorCode::kDegenerateInput, "LPC on an all-zero frame");
  }

  const double n = static_cast<double>(frame.size());
  std::vector<double> r(p + 1, 0.0);
  for (std::size_t lag = 0; lag <= p; ++lag) {
    double acc = 0.0;
    for (std::size_t i = lag; i < frame.size(); ++i) {
      acc += frame[i] * frame[i - lag];
    }
    r[lag] = acc / n;
  }

  // Levinson-Durbin on A(z) = 1 + sum alpha_i z^-i.
  std::vector<double> alpha(p + 1, 0.0);
  alpha[0] = 1.0;
  double error = r[0];
  for (std::size_t m = 1; m <= p; ++m) {
    if (error <= 0.0) break;
    double acc = r[m];
    for (std::size_t i = 1; i < m; ++i) acc += alpha[i] * r[m - i];
    const double k = -acc / error;
    std::vector<double> prev(alpha.begin(), alpha.begin() + static_cast<long>(m));
    for (std::size_t i = 1; i < m; ++i) alpha[i] = prev[i] + k * prev[m - i];
    alpha[m] = k;
    error *= 1.0 - k * k;
  }

  LpcResult result;
  result.coefficients.resize(p);
  for (std::size_t i = 0; i < p; ++i) result.coefficients[i] = -alpha[i + 1];
  result.residual_variance = std::clamp(error, 0.0, r[0]);
  if (!IsStablePredictor(result.coefficients)) {
    result.coefficients = StabilizePredictor(result.coefficients);
  }
  return result;
}

}  // namespace civb
