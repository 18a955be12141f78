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
#include <random>
#include <vector>

#include "civb/error.h"
#include "civb/metrics.h"
#include "gtest/gtest.h"
#include "test_signals.h"

namespace civb {
namespace {

using ::civb::testing::ReferencePearson;
using ::civb::testing::WhiteNoise;

TEST(PearsonTest, Examples) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_NEAR(PearsonR(x, std::vector<double>{1, 2, 3}), 1.0, 1e-15);
  EXPECT_NEAR(PearsonR(x, std::vector<double>{3, 2, 1}), -1.0, 1e-15);
  EXPECT_NEAR(PearsonR(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 4, 5, 4}),
              3.5 / std::sqrt(5.0 * 4.75), 1e-15);
}

TEST(PearsonTest, Errors) {
  const std::vector<double> x{1, 2, 3};
  try {
    PearsonR(std::vector<double>{2, 2, 2}, x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput);
    EXPECT_NE(std::string(e.what()).find("zero-variance reference"), std::string::npos);
  }
  EXPECT_THROW(PearsonR(x, std::vector<double>{5, 5, 5}), Error);
  EXPECT_THROW(PearsonR(x, std::vector<double>{1, 2}), Error);
  EXPECT_THROW(PearsonR(std::vector<double>{1}, std::vector<double>{1}), Error);
}

TEST(PearsonTest, MatchesReferenceOnRandomPairs) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> len(2, 2000);
  std::uniform_real_distribution<double> mix(-1.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = static_cast<std::size_t>(len(rng));
    auto x = WhiteNoise(n, 1.0, rng());
    auto y = WhiteNoise(n, 1.0, rng());
    const double m = mix(rng);
    for (std::size_t i = 0; i < n; ++i) y[i] = m * x[i] + y[i] + 100.0;
    const double r = PearsonR(x, y);
    EXPECT_NEAR(r, ReferencePearson(x, y), 1e-12);
    EXPECT_LE(std::abs(r), 1.0 + 1e-12);
  }
}

TEST(PearsonTest, AffineInvariance) {
  const auto x = WhiteNoise(500, 1.0, 1);
  auto y = WhiteNoise(500, 1.0, 2);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.4 * x[i];
  const double r = PearsonR(x, y);
  for (double a : {3.0, 0.01, -2.0}) {
    std::vector<double> z(y);
    for (double& v : z) v = a * v + 7.0;
    EXPECT_NEAR(PearsonR(x, z), std::copysign(1.0, a) * r, 1e-12);
  }
}

TEST(AlignTest, IdentityAndDelay) {
  const auto x = WhiteNoise(2000, 1.0, 3);
  const Alignment same = Align(x, x, 50);
  EXPECT_EQ(same.lag, 0);
  EXPECT_NEAR(same.r, 1.0, 1e-12);

  std::vector<double> delayed(x.size(), 0.0);
  for (std::size_t i = 7; i < x.size(); ++i) delayed[i] = x[i - 7];
  const Alignment a = Align(x, delayed, 50);
  EXPECT_EQ(a.lag, 7);
  EXPECT_NEAR(a.r, 1.0, 1e-12);
  EXPECT_EQ(a.reference.size(), a.test.size());
  EXPECT_NEAR(PearsonR(a.reference, a.test), a.r, 1e-15);

  std::vector<double> advanced(x.size(), 0.0);
  for (std::size_t i = 0; i + 5 < x.size(); ++i) advanced[i] = x[i + 5];
  EXPECT_EQ(Align(x, advanced, 50).lag, -5);
}

TEST(AlignTest, NeverWorseThanZeroLag) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto x = WhiteNoise(400, 1.0, seed);
    auto y = WhiteNoise(400, 1.0, seed + 100);
    for (std::size_t i = 3; i < y.size(); ++i) y[i] += 0.5 * x[i - 3];
    const Alignment a = Align(x, y, 20);
    EXPECT_GE(a.r, PearsonR(x, y) - 1e-15);
  }
}

TEST(AlignTest, LengthMismatchUsesOverlap) {
  const auto x = WhiteNoise(1000, 1.0, 4);
  std::vector<double> y(x.begin(), x.begin() + 900);
  const Alignment a = Align(x, y, 10);
  EXPECT_EQ(a.lag, 0);
  EXPECT_EQ(a.reference.size(), 900u);
}

TEST(ImprovementTest, ReferenceCorrelationPairs) {
  // Published correlation pairs and their rounded percentages.
  struct Case {
    double proposed, baseline, printed;
  };
  const Case cases[] = {{0.8026, 0.7888, 1.749},  {0.4713, 0.4377, 7.6},
                        {0.5475, 0.4768, 14.828}, {0.7940, 0.7658, 3.682},
                        {0.4609, 0.4136, 11.43},  {0.5375, 0.4562, 17.82}};
  for (const Case& c : cases) {
    const double got = ImprovementPercent(c.proposed, c.baseline);
    EXPECT_NEAR(got, 100.0 * (c.proposed - c.baseline) / c.baseline, 1e-12);
    EXPECT_NEAR(got, c.printed, 0.1);
  }
  EXPECT_NEAR(ImprovementPercent(0.4713, 0.4377), 7.677, 1e-3);
  EXPECT_EQ(ImprovementPercent(0.3, 0.3), 0.0);
  EXPECT_THROW(ImprovementPercent(0.5, 0.0), Error);
}

TEST(NamesTest, RoundTrip) {
  for (Condition c : {Condition::kQuiet, Condition::kBabble5dB, Condition::kBabble10dB}) {
    EXPECT_EQ(ParseCondition(ConditionName(c)), c);
  }
  EXPECT_EQ(ParseCondition("5"), Condition::kBabble5dB);
  EXPECT_EQ(ParseCondition("10"), Condition::kBabble10dB);
  EXPECT_FALSE(ParseCondition("7").has_value());
  EXPECT_EQ(ParseMethod("drnl_baseline"), Method::kDrnlBaseline);
  EXPECT_FALSE(ParseMethod("cis").has_value());
  EXPECT_FALSE(ConditionSnrDb(Condition::kQuiet).has_value());
  EXPECT_EQ(ConditionSnrDb(Condition::kBabble10dB), 10.0);
}

}  // namespace
}  // namespace civb
