// Copyright 2026 The Trackaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <cmath>

#include "gtest/gtest.h"
#include "oracles.h"
#include "test_util.h"
#include "trackaudit/rng.h"
#include "trackaudit/stats.h"

namespace trackaudit {
namespace {

// Reference values from scipy.stats.mannwhitneyu(x, y, use_continuity=True,
// alternative="two-sided", method="asymptotic").
TEST(MannWhitneyU, MatchesReferenceWithTies) {
  const std::vector<double> x = {1.1, 2.2, 3.3, 4.4, 5.5, 6.6};
  const std::vector<double> y = {0.5, 1.1, 2.0, 2.2, 3.0};
  auto r = MannWhitneyU(x, y);
  ASSERT_OK(r);
  EXPECT_DOUBLE_EQ(r->u, 25.0);
  EXPECT_NEAR(r->p_value, 0.08143973230450288, 1e-12);
  EXPECT_GT(r->z, 0);
}

TEST(MannWhitneyU, MatchesReferenceSecondCase) {
  const std::vector<double> x = {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  const std::vector<double> y = {0.1, 0.2, 0.3, 0.35, 0.4, 0.45};
  auto r = MannWhitneyU(x, y);
  ASSERT_OK(r);
  EXPECT_DOUBLE_EQ(r->u, 43.0);
  EXPECT_NEAR(r->p_value, 0.016683650806287514, 1e-12);
}

TEST(MannWhitneyU, UAgreesWithPairCountingOracle) {
  CounterRng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(1 + trial % 13), y(1 + trial % 7);
    // Coarse values so ties are common.
    for (auto& v : x) v = static_cast<double>(rng.UniformInt(std::int64_t{0}, 6)) / 4;
    for (auto& v : y) v = static_cast<double>(rng.UniformInt(std::int64_t{0}, 6)) / 4;
    auto r = MannWhitneyU(x, y);
    ASSERT_OK(r);
    EXPECT_DOUBLE_EQ(r->u, oracle::PairwiseU(x, y));
    auto flipped = MannWhitneyU(y, x);
    EXPECT_DOUBLE_EQ(r->u + flipped->u, static_cast<double>(x.size() * y.size()));
    EXPECT_NEAR(r->p_value, flipped->p_value, 1e-12);
    EXPECT_GE(r->p_value, 0.0);
    EXPECT_LE(r->p_value, 1.0);
  }
}

TEST(MannWhitneyU, AllTiedGivesPOne) {
  const std::vector<double> x = {0.5, 0.5, 0.5};
  const std::vector<double> y = {0.5, 0.5};
  auto r = MannWhitneyU(x, y);
  ASSERT_OK(r);
  EXPECT_DOUBLE_EQ(r->p_value, 1.0);
  EXPECT_DOUBLE_EQ(r->u, 3.0);
}

TEST(MannWhitneyU, EmptySampleIsError) {
  const std::vector<double> x = {1.0};
  EXPECT_FALSE(MannWhitneyU(x, {}).ok());
  EXPECT_FALSE(MannWhitneyU({}, x).ok());
}

TEST(MannWhitneyU, SeparatedSamplesAreSignificant) {
  std::vector<double> lo, hi;
  for (int i = 0; i < 40; ++i) {
    lo.push_back(i);
    hi.push_back(100 + i);
  }
  auto r = MannWhitneyU(hi, lo);
  ASSERT_OK(r);
  EXPECT_DOUBLE_EQ(r->u, 1600);
  EXPECT_LT(r->p_value, 1e-10);
}

TEST(Mean, Basic) {
  const std::vector<double> v = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(Mean(v), 2.5);
}

TEST(BootstrapDeltaCI, DeterministicAndCoversDelta) {
  CounterRng rng(21);
  std::vector<double> base(60), post(60);
  for (auto& v : base) v = rng.Uniform(0, 1);
  for (auto& v : post) v = rng.Uniform(0.2, 1.2);
  auto a = BootstrapDeltaCI(base, post, 2000, 99);
  auto b = BootstrapDeltaCI(base, post, 2000, 99);
  auto c = BootstrapDeltaCI(base, post, 2000, 100);
  ASSERT_OK(a);
  ASSERT_OK(b);
  ASSERT_OK(c);
  EXPECT_EQ(a->low, b->low);
  EXPECT_EQ(a->high, b->high);
  EXPECT_NE(a->low, c->low);
  const double delta = Mean(post) - Mean(base);
  EXPECT_LT(a->low, delta);
  EXPECT_GT(a->high, delta);
  // Normal-theory width: 2 * 1.96 * sqrt(2 * (1/12) / 60) ~ 0.207.
  EXPECT_NEAR(a->high - a->low, 0.207, 0.04);
}

TEST(BootstrapDeltaCI, ConstantSamplesGiveDegenerateInterval) {
  const std::vector<double> base = {0.1, 0.1, 0.1};
  const std::vector<double> post = {0.4, 0.4};
  auto ci = BootstrapDeltaCI(base, post, 100, 1);
  ASSERT_OK(ci);
  EXPECT_NEAR(ci->low, 0.3, 1e-12);
  EXPECT_NEAR(ci->high, 0.3, 1e-12);
}

TEST(BootstrapDeltaCI, RejectsBadArguments) {
  const std::vector<double> v = {1.0};
  EXPECT_FALSE(BootstrapDeltaCI({}, v, 10, 1).ok());
  EXPECT_FALSE(BootstrapDeltaCI(v, v, 0, 1).ok());
  EXPECT_FALSE(BootstrapDeltaCI(v, v, 10, 1, 1.0).ok());
}

}  // namespace
}  // namespace trackaudit
