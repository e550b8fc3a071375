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

#include <algorithm>
#include <map>
#include <set>

#include "gtest/gtest.h"
#include "oracles.h"
#include "trackaudit/rng.h"

namespace trackaudit {
namespace {

TEST(CounterRng, ReferenceVectorIsStable) {
  // Pins the algorithm. Changing any of these breaks reproducibility of
  // every archived run.
  CounterRng rng(0);
  EXPECT_EQ(rng.Next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.counter(), 1u);
  EXPECT_EQ(CounterRng::HashString(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(CounterRng::HashString("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(CounterRng::kAlgorithm, "splitmix64-ctr/v1");
}

TEST(CounterRng, MatchesOracleFinalizer) {
  for (std::uint64_t z : {0ULL, 1ULL, 0x9e3779b97f4a7c15ULL, ~0ULL}) {
    EXPECT_EQ(CounterRng::Mix(z), oracle::Finalize(z));
  }
  for (const char* s : {"", "a", "puppet/misinformation-tracking-permissive-000"}) {
    EXPECT_EQ(CounterRng::HashString(s), oracle::Fnv1a(s));
  }
}

TEST(CounterRng, DerivedStreamsDiffer) {
  std::set<std::uint64_t> keys;
  for (int i = 0; i < 100; ++i) {
    keys.insert(CounterRng::DeriveKey(42, "stream", i));
    keys.insert(CounterRng::DeriveKey(42, "other", i));
    keys.insert(CounterRng::DeriveKey(43, "stream", i));
  }
  EXPECT_EQ(keys.size(), 300u);
  EXPECT_EQ(CounterRng::DeriveKey(42, "stream", 7),
            CounterRng::DeriveKey(42, "stream", 7));
}

TEST(CounterRng, UniformIntInclusiveBounds) {
  CounterRng rng(11);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.UniformInt(std::int64_t{3}, std::int64_t{8});
    ASSERT_GE(v, 3);
    ASSERT_LE(v, 8);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 6u);
}

TEST(CounterRng, UniformDoubleInUnitInterval) {
  CounterRng rng(5);
  double lo = 1, hi = 0;
  for (int i = 0; i < 5000; ++i) {
    const double u = rng.UniformDouble();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_LT(lo, 0.01);
  EXPECT_GT(hi, 0.99);
}

TEST(SamplePermutationPrefix, LongerPrefixExtendsShorter) {
  CounterRng a(CounterRng::DeriveKey(9, "perm"));
  CounterRng b(CounterRng::DeriveKey(9, "perm"));
  const auto short_prefix = SamplePermutationPrefix(100, 10, a);
  const auto long_prefix = SamplePermutationPrefix(100, 30, b);
  ASSERT_EQ(short_prefix.size(), 10u);
  ASSERT_EQ(long_prefix.size(), 30u);
  EXPECT_TRUE(std::equal(short_prefix.begin(), short_prefix.end(),
                         long_prefix.begin()));
}

TEST(SamplePermutationPrefix, ClampsToPopulation) {
  CounterRng rng(1);
  auto all = SamplePermutationPrefix(6, 10, rng);
  ASSERT_EQ(all.size(), 6u);
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
}

TEST(SamplePermutationPrefix, AllOrderingsOfThreeAppear) {
  std::map<std::vector<std::size_t>, int> counts;
  for (int i = 0; i < 6000; ++i) {
    CounterRng rng(CounterRng::DeriveKey(3, "orderings", i));
    ++counts[SamplePermutationPrefix(3, 3, rng)];
  }
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [perm, c] : counts) {
    EXPECT_NEAR(c, 1000, 5 * std::sqrt(6000 * (1.0 / 6) * (5.0 / 6)));
  }
}

}  // namespace
}  // namespace trackaudit
