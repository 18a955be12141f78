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

#include <cmath>
#include <vector>

#include "civb/audio_buffer.h"
#include "civb/enhance.h"
#include "civb/error.h"
#include "gtest/gtest.h"
#include "test_signals.h"

namespace civb {
namespace {

using ::civb::testing::ArProcess;
using ::civb::testing::SnrDb;
using ::civb::testing::SpeechLikeAr10;
using ::civb::testing::WhiteNoise;

double Variance(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= x.size();
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / x.size();
}

// Clean AR(10) component and its noisy observation at `snr_db`.
struct NoisyAr {
  std::vector<double> clean;
  std::vector<double> noisy;
  double noise_variance;
};

NoisyAr MakeNoisyAr(double snr_db, std::uint64_t seed, std::size_t n = 20000) {
  NoisyAr out;
  const auto a = SpeechLikeAr10();
  out.clean = ArProcess(a, n, seed);
  const double ps = Variance(out.clean);
  out.noise_variance = ps / std::pow(10.0, snr_db / 10.0);
  const auto w = WhiteNoise(n, std::sqrt(out.noise_variance), seed + 1000);
  out.noisy.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.noisy[i] = out.clean[i] + w[i];
  return out;
}

TEST(NoiseEstimateTest, Override) {
  KalmanConfig cfg;
  cfg.noise_variance_override = 0.01;
  const AudioBuffer x(WhiteNoise(2000, 3.0, 1), 10000.0);
  EXPECT_EQ(EstimateNoiseVariance(x, cfg), 0.01);
}

TEST(NoiseEstimateTest, SilentLeadIn) {
  std::vector<double> x(2000, 0.0);
  for (std::size_t i = 1000; i < x.size(); ++i) x[i] = 1.0;
  EXPECT_EQ(EstimateNoiseVariance(AudioBuffer(x, 10000.0), KalmanConfig{}), 0.0);
}

TEST(NoiseEstimateTest, WhiteLeadIn) {
  const auto x = WhiteNoise(1000, 1.0, 77);
  const double est = EstimateNoiseVariance(AudioBuffer(x, 10000.0), KalmanConfig{});
  // Direct sample variance over the 100 ms lead-in.
  EXPECT_NEAR(est, Variance(x), 1e-9);
  EXPECT_NEAR(est, 1.0, 0.1);
}

TEST(LpcTest, RecoversAr1) {
  const std::vector<double> a{0.9};
  const auto x = ArProcess(a, 50000, 4);
  const LpcResult lpc = LpcCoefficients(x, 1);
  ASSERT_EQ(lpc.coefficients.size(), 1u);
  EXPECT_NEAR(lpc.coefficients[0], 0.9, 0.02);
  EXPECT_NEAR(lpc.residual_variance, 1.0, 0.05);
}

TEST(LpcTest, MatchesYuleWalkerOnAr2) {
  // Oracle: solve the 2x2 Yule-Walker system from the same biased
  // autocorrelation estimate.
  const std::vector<double> a{1.2, -0.5};
  const auto x = ArProcess(a, 40000, 8);
  double r0 = 0, r1 = 0, r2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    r0 += x[i] * x[i];
    if (i >= 1) r1 += x[i] * x[i - 1];
    if (i >= 2) r2 += x[i] * x[i - 2];
  }
  const double det = r0 * r0 - r1 * r1;
  const double a1 = (r1 * r0 - r1 * r2) / det;
  const double a2 = (r0 * r2 - r1 * r1) / det;
  const LpcResult lpc = LpcCoefficients(x, 2);
  EXPECT_NEAR(lpc.coefficients[0], a1, 1e-9);
  EXPECT_NEAR(lpc.coefficients[1], a2, 1e-9);
  EXPECT_NEAR(lpc.coefficients[0], 1.2, 0.03);
  EXPECT_NEAR(lpc.coefficients[1], -0.5, 0.03);
}

TEST(LpcTest, WhiteNoiseHasNoStructure) {
  const auto x = WhiteNoise(50000, 1.0, 12);
  const LpcResult lpc = LpcCoefficients(x, 10);
  for (double c : lpc.coefficients) EXPECT_LE(std::abs(c), 0.1);
}

TEST(LpcTest, ResidualNeverExceedsVariance) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto x = WhiteNoise(200, 1.0, seed);
    if (seed % 3 == 0) x = ArProcess(SpeechLikeAr10(), 200, seed);
    double energy = 0.0;
    for (double v : x) energy += v * v;
    const LpcResult lpc = LpcCoefficients(x, 10);
    EXPECT_GE(lpc.residual_variance, 0.0);
    EXPECT_LE(lpc.residual_variance, energy / x.size() * (1.0 + 1e-12));
    EXPECT_TRUE(IsStablePredictor(lpc.coefficients));
  }
}

TEST(LpcTest, Errors) {
  const std::vector<double> x(100, 0.0);
  EXPECT_THROW(LpcCoefficients(x, 0), Error);
  EXPECT_THROW(LpcCoefficients(std::vector<double>(5, 1.0), 10), Error);
}

TEST(LpcTest, StabilizeReflectsOutsideRoots) {
  // 1 - 2.5 z^-1 + z^-2 has roots 2 and 0.5.
  const std::vector<double> unstable{2.5, -1.0};
  EXPECT_FALSE(IsStablePredictor(unstable));
  const auto fixed = StabilizePredictor(unstable);
  EXPECT_TRUE(IsStablePredictor(fixed));
  // Roots 0.5 and 0.5: A(z) = 1 - z^-1 + 0.25 z^-2.
  EXPECT_NEAR(fixed[0], 1.0, 1e-9);
  EXPECT_NEAR(fixed[1], -0.25, 1e-9);
}

TEST(KalmanTest, ZeroNoisePassesThrough) {
  const auto x = ArProcess(SpeechLikeAr10(), 5000, 3);
  KalmanConfig cfg;
  cfg.noise_variance_override = 0.0;
  const AudioBuffer out = KalmanEnhance(AudioBuffer(x, 10000.0), cfg);
  ASSERT_EQ(out.size(), x.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(out.samples()[i] - x[i]));
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(KalmanTest, WhiteNoiseIsAttenuated) {
  const auto x = WhiteNoise(10000, 0.5, 21);
  KalmanConfig cfg;
  cfg.noise_variance_override = 0.25;
  const AudioBuffer out = KalmanEnhance(AudioBuffer(x, 10000.0), cfg);
  EXPECT_LT(Variance(out.samples()), Variance(x));
}

TEST(KalmanTest, ImprovesSnrOnNoisyAr10) {
  const NoisyAr s = MakeNoisyAr(5.0, 31);
  KalmanConfig cfg;
  cfg.noise_variance_override = s.noise_variance;
  KalmanDiagnostics diag;
  const AudioBuffer out = KalmanEnhance(AudioBuffer(s.noisy, 10000.0), cfg, &diag);
  const double before = SnrDb(s.clean, s.noisy);
  const double after = SnrDb(s.clean, out.samples());
  EXPECT_NEAR(before, 5.0, 0.2);
  EXPECT_GE(after - before, 2.0) << "before " << before << " after " << after;
}

TEST(KalmanTest, EstimatedNoiseFromLeadIn) {
  // 100 ms of noise alone, then AR speech plus the same noise.
  NoisyAr s = MakeNoisyAr(5.0, 41);
  const auto lead = WhiteNoise(1000, std::sqrt(s.noise_variance), 4242);
  std::vector<double> clean(1000, 0.0), noisy(lead);
  clean.insert(clean.end(), s.clean.begin(), s.clean.end());
  noisy.insert(noisy.end(), s.noisy.begin(), s.noisy.end());
  const AudioBuffer out = KalmanEnhance(AudioBuffer(noisy, 10000.0), KalmanConfig{});
  EXPECT_GE(SnrDb(clean, out.samples()) - SnrDb(clean, noisy), 2.0);
}

TEST(KalmanTest, NeverWorsensSnrAcrossLevels) {
  for (double snr : {0.0, 5.0, 10.0}) {
    const NoisyAr s = MakeNoisyAr(snr, 50 + static_cast<int>(snr));
    KalmanConfig cfg;
    cfg.noise_variance_override = s.noise_variance;
    const AudioBuffer out = KalmanEnhance(AudioBuffer(s.noisy, 10000.0), cfg);
    EXPECT_GE(SnrDb(s.clean, out.samples()), SnrDb(s.clean, s.noisy)) << snr;
  }
}

TEST(KalmanTest, CovarianceStaysSymmetricPsd) {
  const NoisyAr s = MakeNoisyAr(5.0, 61, 8000);
  KalmanConfig cfg;
  cfg.noise_variance_override = s.noise_variance;
  KalmanDiagnostics diag;
  KalmanEnhance(AudioBuffer(s.noisy, 10000.0), cfg, &diag);
  EXPECT_EQ(diag.frames, 40);
  EXPECT_LE(diag.max_asymmetry, 1e-12);
  EXPECT_GE(diag.min_eigenvalue, -1e-9);
}

TEST(KalmanTest, SilentFramesBypass) {
  std::vector<double> x(1000, 0.0);
  const auto tail = ArProcess(SpeechLikeAr10(), 400, 2);
  std::copy(tail.begin(), tail.end(), x.begin() + 600);
  KalmanConfig cfg;
  cfg.noise_variance_override = 0.1;
  KalmanDiagnostics diag;
  const AudioBuffer out = KalmanEnhance(AudioBuffer(x, 10000.0), cfg, &diag);
  EXPECT_EQ(diag.silent_frames, 3);
  for (std::size_t i = 0; i < 600; ++i) EXPECT_EQ(out.samples()[i], 0.0);
}

TEST(KalmanTest, Deterministic) {
  const NoisyAr s = MakeNoisyAr(5.0, 71, 4000);
  const AudioBuffer in(s.noisy, 10000.0);
  const AudioBuffer a = KalmanEnhance(in, KalmanConfig{});
  const AudioBuffer b = KalmanEnhance(in, KalmanConfig{});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a.samples()[i], b.samples()[i]);
}

TEST(KalmanConfigTest, RateDefaultsAndValidation) {
  EXPECT_EQ(KalmanConfig::ForRate(10000.0).ar_order, 10);
  EXPECT_EQ(KalmanConfig::ForRate(20000.0).ar_order, 16);
  EXPECT_EQ(KalmanConfig{}.FrameSamples(10000.0), 200);
  KalmanConfig bad;
  bad.ar_order = 0;
  EXPECT_THROW(bad.Validate(10000.0), Error);
  KalmanConfig tiny;
  tiny.frame_ms = 0.5;  // 5 samples < order 10
  EXPECT_THROW(tiny.Validate(10000.0), Error);
  KalmanConfig neg;
  neg.noise_variance_override = -1.0;
  EXPECT_THROW(neg.Validate(10000.0), Error);
  EXPECT_THROW(KalmanEnhance(AudioBuffer(std::vector<double>(100, 0.0), 10000.0), bad),
               Error);
}

TEST(PreemphasisTest, Examples) {
  const AudioBuffer x({1.0, 0.0, 0.0}, 10000.0);
  const AudioBuffer y = Preemphasize(x, 0.97);
  EXPECT_EQ(y.samples()[0], 1.0);
  EXPECT_DOUBLE_EQ(y.samples()[1], -0.97);
  EXPECT_EQ(y.samples()[2], 0.0);

  const AudioBuffer c(std::vector<double>(10, 0.5), 10000.0);
  const AudioBuffer yc = Preemphasize(c, 0.97);
  EXPECT_EQ(yc.samples()[0], 0.5);
  for (std::size_t i = 1; i < 10; ++i) EXPECT_NEAR(yc.samples()[i], 0.03 * 0.5, 1e-15);

  const auto r = WhiteNoise(50, 1.0, 1);
  const AudioBuffer id = Preemphasize(AudioBuffer(r, 10000.0), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_EQ(id.samples()[i], r[i]);
}

TEST(PreemphasisTest, InvertedByDeemphasis) {
  const auto x = WhiteNoise(2000, 1.0, 2);
  const AudioBuffer y = Preemphasize(AudioBuffer(x, 10000.0), 0.97);
  std::vector<double> back(x.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    back[i] = y.samples()[i] + 0.97 * prev;
    prev = back[i];
  }
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back[i], x[i], 1e-9);
}

TEST(PreemphasisTest, RejectsAlphaOutOfRange) {
  const AudioBuffer x({1.0}, 10000.0);
  EXPECT_THROW(Preemphasize(x, -0.1), Error);
  EXPECT_THROW(Preemphasize(x, 1.5), Error);
}

}  // namespace
}  // namespace civb
