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

#ifndef TRACKAUDIT_CORPUS_H_
#define TRACKAUDIT_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "trackaudit/labels.h"
#include "trackaudit/time.h"

namespace trackaudit {

struct OutletRecord {
  std::string outlet_id;
  std::string domain;
  Ideology bias_label = Ideology::kLeft;

  bool operator==(const OutletRecord&) const = default;
};

struct ArticleRecord {
  std::string url;
  std::optional<std::string> outlet_id;  // null for the misinformation pool
  PoolLabel pool_label = PoolLabel::kMisinformation;
  std::optional<Date> published_at;

  bool operator==(const ArticleRecord&) const = default;
};

struct ArticlePool {
  PoolLabel pool_label = PoolLabel::kMisinformation;
  std::vector<ArticleRecord> articles;

  std::size_t size() const { return articles.size(); }
};

struct ClaimRecord {
  std::string claim_id;
  std::string text;
  Verdict verdict = Verdict::kOther;
  Date checked_at;

  bool operator==(const ClaimRecord&) const = default;
};

struct ExposureSequence {
  std::string puppet_id;
  int day_index = 0;
  std::vector<ArticleRecord> articles;
  std::uint64_t seed = 0;
};

using VerdictSet = std::set<Verdict>;

inline const VerdictSet& DefaultMisinformationVerdicts() {
  static const VerdictSet* const kSet =
      new VerdictSet{Verdict::kFalse, Verdict::kMisleading};
  return *kSet;
}

// Loaders read newline-delimited JSON. Blank lines are ignored. Parse and
// schema errors carry "<source>:<line>" in the message.
absl::StatusOr<std::vector<OutletRecord>> LoadOutlets(
    const std::filesystem::path& path,
    std::optional<Ideology> bias_filter = std::nullopt);
absl::StatusOr<std::vector<OutletRecord>> ParseOutlets(
    std::istream& in, std::string_view source,
    std::optional<Ideology> bias_filter = std::nullopt);

// Every row of an articles file, any pool. URLs must be absolute and unique
// within their pool.
absl::StatusOr<std::vector<ArticleRecord>> LoadArticles(
    const std::filesystem::path& path);
absl::StatusOr<std::vector<ArticleRecord>> ParseArticles(
    std::istream& in, std::string_view source);

// Takes the first `articles_per_outlet` articles of each outlet, in input
// order, grouped in outlet order. All outlets must share one bias label and
// every article must belong to one of them.
absl::StatusOr<ArticlePool> BuildPool(std::span<const OutletRecord> outlets,
                                      std::span<const ArticleRecord> articles,
                                      int articles_per_outlet);

// Rows may omit pool_label; if present it must be "misinformation". Rows
// without a publication date never fall inside the window.
absl::StatusOr<ArticlePool> LoadMisinformationPool(
    const std::filesystem::path& path, const DateRange& window);
absl::StatusOr<ArticlePool> ParseMisinformationPool(std::istream& in,
                                                    std::string_view source,
                                                    const DateRange& window);

absl::StatusOr<std::vector<ClaimRecord>> LoadClaims(
    const std::filesystem::path& path, const DateRange& window,
    const VerdictSet& verdicts = DefaultMisinformationVerdicts());
absl::StatusOr<std::vector<ClaimRecord>> ParseClaims(
    std::istream& in, std::string_view source, const DateRange& window,
    const VerdictSet& verdicts = DefaultMisinformationVerdicts());

// Deterministic key for one puppet-day exposure draw.
std::uint64_t ExposureKey(std::uint64_t seed, std::string_view puppet_id,
                          int day_index);

// n distinct articles drawn without replacement. Same (seed, puppet_id,
// day_index) always yields the same sequence.
absl::StatusOr<ExposureSequence> SampleExposure(const ArticlePool& pool, int n,
                                                std::uint64_t seed,
                                                std::string_view puppet_id,
                                                int day_index);

// Articles of the same draw beyond the first n, in draw order. Used to
// replace dead URLs; returns at most `count` (fewer if the pool runs out).
std::vector<ArticleRecord> ExposureReplacements(const ArticlePool& pool, int n,
                                                int count, std::uint64_t seed,
                                                std::string_view puppet_id,
                                                int day_index);

}  // namespace trackaudit

#endif  // TRACKAUDIT_CORPUS_H_
