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

#include <map>
#include <set>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "fmt/format.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "trackaudit/corpus.h"
#include "trackaudit/rng.h"

namespace trackaudit {
namespace {

using ::testing::HasSubstr;

DateRange Window(std::string_view a, std::string_view b) {
  return *MakeDateRange(a, b);
}

std::string OutletLine(std::string_view id, std::string_view label) {
  return fmt::format(R"({{"outlet_id": "{}", "domain": "{}.example", "bias_label": "{}"}})",
                     id, id, label) + "\n";
}

std::vector<ArticleRecord> ArticlesFor(const OutletRecord& o, int n) {
  std::vector<ArticleRecord> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({fmt::format("https://{}/a/{}", o.domain, i), o.outlet_id,
                   ToPoolLabel(o.bias_label), std::nullopt});
  }
  return out;
}

ArticlePool PoolOf(int n) {
  ArticlePool p;
  for (int i = 0; i < n; ++i) {
    p.articles.push_back({fmt::format("https://m.example/{}", i), std::nullopt,
                          PoolLabel::kMisinformation, std::nullopt});
  }
  return p;
}

TEST(LoadOutlets, FilterKeepsMatchingRowsInOrder) {
  std::istringstream in(OutletLine("a", "right") + OutletLine("b", "left") +
                        OutletLine("c", "right"));
  auto right = ParseOutlets(in, "outlets.jsonl", Ideology::kRight);
  ASSERT_OK(right);
  ASSERT_EQ(right->size(), 2u);
  EXPECT_EQ((*right)[0].outlet_id, "a");
  EXPECT_EQ((*right)[1].outlet_id, "c");
}

TEST(LoadOutlets, NoFilterKeepsAll) {
  std::istringstream in(OutletLine("a", "right") + OutletLine("b", "left") +
                        OutletLine("c", "right"));
  auto all = ParseOutlets(in, "outlets.jsonl");
  ASSERT_OK(all);
  EXPECT_EQ(all->size(), 3u);
}

TEST(LoadOutlets, UnknownBiasLabelIsRejected) {
  std::istringstream in(OutletLine("a", "right") + OutletLine("b", "centrist"));
  auto r = ParseOutlets(in, "outlets.jsonl");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(r.status().message(), HasSubstr("outlets.jsonl:2"));
  EXPECT_THAT(r.status().message(), HasSubstr("centrist"));
}

TEST(LoadOutlets, MalformedRowNamesLine) {
  std::istringstream in(OutletLine("a", "left") + "\n{not json\n");
  auto r = ParseOutlets(in, "o.jsonl");
  ASSERT_FALSE(r.ok());
  EXPECT_THAT(r.status().message(), HasSubstr("o.jsonl:3"));
}

TEST(LoadOutlets, MissingFileIsNotFound) {
  auto r = LoadOutlets("/nonexistent/outlets.jsonl");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), absl::StatusCode::kNotFound);
  EXPECT_THAT(r.status().message(), HasSubstr("/nonexistent/outlets.jsonl"));
}

TEST(BuildPool, FiftyOutletsOfTwentyGiveOneThousand) {
  std::vector<OutletRecord> outlets;
  std::vector<ArticleRecord> articles;
  for (int i = 0; i < 50; ++i) {
    outlets.push_back({fmt::format("o{:02}", i), fmt::format("o{:02}.example", i),
                       Ideology::kLeft});
    auto a = ArticlesFor(outlets.back(), 22);
    articles.insert(articles.end(), a.begin(), a.end());
  }
  auto pool = BuildPool(outlets, articles, 20);
  ASSERT_OK(pool);
  EXPECT_EQ(pool->size(), 1000u);
  EXPECT_EQ(pool->pool_label, PoolLabel::kLeft);
  // First-N per outlet, in outlet order.
  EXPECT_EQ(pool->articles[0].url, "https://o00.example/a/0");
  EXPECT_EQ(pool->articles[19].url, "https://o00.example/a/19");
  EXPECT_EQ(pool->articles[20].url, "https://o01.example/a/0");
  std::set<std::string> urls;
  for (const auto& a : pool->articles) urls.insert(a.url);
  EXPECT_EQ(urls.size(), 1000u);
}

TEST(BuildPool, SingleOutlet) {
  OutletRecord o{"x", "x.example", Ideology::kExtremeRight};
  auto pool = BuildPool(std::vector{o}, ArticlesFor(o, 20), 20);
  ASSERT_OK(pool);
  EXPECT_EQ(pool->size(), 20u);
}

TEST(BuildPool, TooFewArticlesNamesOutlet) {
  OutletRecord o{"thin-outlet", "t.example", Ideology::kRight};
  auto pool = BuildPool(std::vector{o}, ArticlesFor(o, 19), 20);
  ASSERT_FALSE(pool.ok());
  EXPECT_EQ(pool.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(pool.status().message(), HasSubstr("insufficient articles"));
  EXPECT_THAT(pool.status().message(), HasSubstr("thin-outlet"));
}

TEST(BuildPool, MixedLabelsRejected) {
  std::vector<OutletRecord> outlets{{"a", "a.example", Ideology::kLeft},
                                    {"b", "b.example", Ideology::kRight}};
  auto articles = ArticlesFor(outlets[0], 20);
  auto pool = BuildPool(outlets, articles, 20);
  ASSERT_FALSE(pool.ok());
  EXPECT_EQ(pool.status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(BuildPool, UnknownOutletRejected) {
  OutletRecord o{"a", "a.example", Ideology::kLeft};
  auto articles = ArticlesFor(o, 20);
  articles.push_back({"https://z/1", std::string("zzz"), PoolLabel::kLeft, std::nullopt});
  EXPECT_FALSE(BuildPool(std::vector{o}, articles, 20).ok());
}

constexpr char kMisinfo[] =
    R"({"url": "https://m.example/1", "outlet_id": null, "pool_label": "misinformation", "published_at": "2019-12-31"}
{"url": "https://m.example/2", "published_at": "2020-01-01"}
{"url": "https://m.example/3", "published_at": "2022-06-15"}
{"url": "https://m.example/4", "published_at": "2024-02-29"}
{"url": "https://m.example/5", "published_at": "2025-12-31"}
)";

TEST(LoadMisinformationPool, DateFilterInclusive) {
  std::istringstream in(kMisinfo);
  auto pool = ParseMisinformationPool(in, "m.jsonl", Window("2020-01-01", "2025-12-31"));
  ASSERT_OK(pool);
  EXPECT_EQ(pool->size(), 4u);
  EXPECT_EQ(pool->pool_label, PoolLabel::kMisinformation);
  EXPECT_EQ(pool->articles.front().url, "https://m.example/2");
  EXPECT_EQ(pool->articles.back().url, "https://m.example/5");
}

TEST(LoadMisinformationPool, WindowExcludingAllIsEmptyPoolError) {
  std::istringstream in(kMisinfo);
  auto pool = ParseMisinformationPool(in, "m.jsonl", Window("2010-01-01", "2010-12-31"));
  ASSERT_FALSE(pool.ok());
  EXPECT_EQ(pool.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(pool.status().message(), HasSubstr("empty"));
}

TEST(LoadMisinformationPool, RelativeUrlRejected) {
  std::istringstream in(R"({"url": "/post/1", "published_at": "2021-01-01"})");
  EXPECT_FALSE(ParseMisinformationPool(in, "m", Window("2020-01-01", "2025-12-31")).ok());
}

TEST(LoadMisinformationPool, DuplicateUrlRejected) {
  std::istringstream in(
      R"({"url": "https://a/1", "published_at": "2021-01-01"}
{"url": "https://a/1", "published_at": "2021-01-02"})");
  auto pool = ParseMisinformationPool(in, "m", Window("2020-01-01", "2025-12-31"));
  ASSERT_FALSE(pool.ok());
  EXPECT_THAT(pool.status().message(), HasSubstr("m:2"));
}

TEST(LoadClaims, DateAndVerdictFilters) {
  std::istringstream in(
      R"({"claim_id": "c1", "text": "the moon is cheese", "verdict": "false", "checked_at": "2021-03-01"}
{"claim_id": "c2", "text": "water is wet", "verdict": "true", "checked_at": "2021-03-01"}
{"claim_id": "c3", "text": "vaccines contain chips", "verdict": "pants-on-fire", "checked_at": "2025-10-31"}
{"claim_id": "c4", "text": "late claim", "verdict": "misleading", "checked_at": "2026-01-01"}
{"claim_id": "c5", "text": "early claim", "verdict": "misleading", "checked_at": "2020-01-01"}
)");
  auto claims = ParseClaims(in, "c.jsonl", Window("2020-01-01", "2025-10-31"));
  ASSERT_OK(claims);
  std::vector<std::string> ids;
  for (const auto& c : *claims) ids.push_back(c.claim_id);
  EXPECT_THAT(ids, ::testing::ElementsAre("c1", "c3", "c5"));
}

TEST(LoadClaims, DuplicateIdRejected) {
  std::istringstream in(
      R"({"claim_id": "dup", "text": "a", "verdict": "false", "checked_at": "2021-03-01"}
{"claim_id": "dup", "text": "b", "verdict": "false", "checked_at": "2021-03-02"}
)");
  auto claims = ParseClaims(in, "c.jsonl", Window("2020-01-01", "2025-10-31"));
  ASSERT_FALSE(claims.ok());
  EXPECT_EQ(claims.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(claims.status().message(), HasSubstr("dup"));
}

TEST(LoadClaims, CustomVerdictSet) {
  std::istringstream in(
      R"({"claim_id": "a", "text": "x", "verdict": "false", "checked_at": "2021-03-01"}
{"claim_id": "b", "text": "y", "verdict": "misleading", "checked_at": "2021-03-01"}
)");
  auto claims = ParseClaims(in, "c", Window("2020-01-01", "2025-10-31"),
                            VerdictSet{Verdict::kFalse});
  ASSERT_OK(claims);
  ASSERT_EQ(claims->size(), 1u);
  EXPECT_EQ(claims->front().claim_id, "a");
}

TEST(SampleExposure, ZeroIsEmpty) {
  auto s = SampleExposure(PoolOf(5), 0, 7, "p", 0);
  ASSERT_OK(s);
  EXPECT_TRUE(s->articles.empty());
}

TEST(SampleExposure, SameKeySameSequence) {
  const ArticlePool pool = PoolOf(1000);
  auto a = SampleExposure(pool, 20, 99, "puppet-1", 3);
  auto b = SampleExposure(pool, 20, 99, "puppet-1", 3);
  ASSERT_OK(a);
  ASSERT_OK(b);
  EXPECT_EQ(a->articles, b->articles);
  auto c = SampleExposure(pool, 20, 99, "puppet-1", 4);
  auto d = SampleExposure(pool, 20, 99, "puppet-2", 3);
  EXPECT_NE(a->articles, c->articles);
  EXPECT_NE(a->articles, d->articles);
}

TEST(SampleExposure, FullSampleIsPermutation) {
  const ArticlePool pool = PoolOf(5);
  auto s = SampleExposure(pool, 5, 1, "p", 0);
  ASSERT_OK(s);
  std::multiset<std::string> got, want;
  for (const auto& a : s->articles) got.insert(a.url);
  for (const auto& a : pool.articles) want.insert(a.url);
  EXPECT_EQ(got, want);
}

TEST(SampleExposure, NoDuplicates) {
  const ArticlePool pool = PoolOf(40);
  for (int day = 0; day < 200; ++day) {
    auto s = SampleExposure(pool, 20, 5, "p", day);
    ASSERT_OK(s);
    std::set<std::string> urls;
    for (const auto& a : s->articles) urls.insert(a.url);
    ASSERT_EQ(urls.size(), 20u) << "day " << day;
  }
}

TEST(SampleExposure, TooLargeIsError) {
  auto s = SampleExposure(PoolOf(5), 6, 1, "p", 0);
  ASSERT_FALSE(s.ok());
  EXPECT_EQ(s.status().code(), absl::StatusCode::kOutOfRange);
  EXPECT_THAT(s.status().message(), HasSubstr("sample too large"));
}

TEST(SampleExposure, UniformWithinFiveStandardErrors) {
  const ArticlePool pool = PoolOf(5);
  constexpr int kDraws = 10000;
  std::map<std::string, int> counts;
  for (int day = 0; day < kDraws; ++day) {
    auto s = SampleExposure(pool, 1, 2024, "uniformity", day);
    ASSERT_OK(s);
    ++counts[s->articles[0].url];
  }
  ASSERT_EQ(counts.size(), 5u);
  const double p = 0.2;
  const double se = std::sqrt(p * (1 - p) / kDraws);
  double chi2 = 0;
  for (const auto& [url, c] : counts) {
    const double freq = static_cast<double>(c) / kDraws;
    EXPECT_LT(std::abs(freq - p), 5 * se) << url;
    chi2 += std::pow(c - kDraws * p, 2) / (kDraws * p);
  }
  boost::math::chi_squared dist(4);
  EXPECT_GT(1 - boost::math::cdf(dist, chi2), 0.001);
}

TEST(ExposureReplacements, ContinueTheSamePermutation) {
  const ArticlePool pool = PoolOf(50);
  auto first = SampleExposure(pool, 20, 3, "p", 2);
  auto longer = SampleExposure(pool, 25, 3, "p", 2);
  ASSERT_OK(first);
  ASSERT_OK(longer);
  auto repl = ExposureReplacements(pool, 20, 5, 3, "p", 2);
  ASSERT_EQ(repl.size(), 5u);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(first->articles[i], longer->articles[i]);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(repl[i], longer->articles[20 + i]);
}

}  // namespace
}  // namespace trackaudit
