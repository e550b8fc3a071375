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

#include "trackaudit/corpus.h"

#include <map>
#include <unordered_set>

#include "str_util.h"
#include "jsonl.h"
#include "trackaudit/rng.h"
#include "trackaudit/status_macros.h"

namespace trackaudit {
namespace {

using internal::ForEachJsonLine;
using internal::Json;
using internal::LineError;
using internal::OptionalString;
using internal::RequiredString;

bool IsAbsoluteUrl(std::string_view url) {
  std::string_view rest;
  if (url.starts_with("https://")) {
    rest = url.substr(8);
  } else if (url.starts_with("http://")) {
    rest = url.substr(7);
  } else {
    return false;
  }
  return !rest.empty() && rest.front() != '/';
}

// Wraps a field-level error with the source position.
absl::Status AtLine(std::string_view source, int line, const absl::Status& s) {
  return LineError(source, line, std::string(s.message()));
}

absl::StatusOr<ArticleRecord> ArticleFromJson(const Json& obj) {
  ArticleRecord a;
  ASSIGN_OR_RETURN(a.url, RequiredString(obj, "url"));
  if (!IsAbsoluteUrl(a.url)) {
    return absl::InvalidArgumentError(
        StrCat("url is not absolute: \"", a.url, "\""));
  }
  ASSIGN_OR_RETURN(a.outlet_id, OptionalString(obj, "outlet_id"));
  ASSIGN_OR_RETURN(std::optional<std::string> label,
                   OptionalString(obj, "pool_label"));
  if (label.has_value()) {
    ASSIGN_OR_RETURN(a.pool_label, ParsePoolLabel(*label));
  } else {
    a.pool_label = PoolLabel::kMisinformation;
  }
  ASSIGN_OR_RETURN(std::optional<std::string> published,
                   OptionalString(obj, "published_at"));
  if (published.has_value()) {
    ASSIGN_OR_RETURN(a.published_at, ParseDate(*published));
  }
  return a;
}

absl::StatusOr<std::ifstream> Open(const std::filesystem::path& p) {
  return internal::OpenInput(p);
}

}  // namespace

absl::StatusOr<std::vector<OutletRecord>> ParseOutlets(
    std::istream& in, std::string_view source,
    std::optional<Ideology> bias_filter) {
  std::vector<OutletRecord> out;
  std::unordered_set<std::string> seen;
  RETURN_IF_ERROR(ForEachJsonLine(
      in, source, [&](int line, const Json& obj) -> absl::Status {
        OutletRecord o;
        auto id = RequiredString(obj, "outlet_id");
        if (!id.ok()) return AtLine(source, line, id.status());
        auto domain = RequiredString(obj, "domain");
        if (!domain.ok()) return AtLine(source, line, domain.status());
        auto label = RequiredString(obj, "bias_label");
        if (!label.ok()) return AtLine(source, line, label.status());
        o.outlet_id = *std::move(id);
        o.domain = *std::move(domain);
        if (o.outlet_id.empty()) {
          return LineError(source, line, "outlet_id is empty");
        }
        if (o.domain.empty()) return LineError(source, line, "domain is empty");
        auto bias = ParseIdeology(*label);
        if (!bias.ok()) return AtLine(source, line, bias.status());
        o.bias_label = *bias;
        if (!seen.insert(o.outlet_id).second) {
          return LineError(source, line,
                           StrCat("duplicate outlet_id ", o.outlet_id));
        }
        if (!bias_filter.has_value() || *bias_filter == o.bias_label) {
          out.push_back(std::move(o));
        }
        return absl::OkStatus();
      }));
  return out;
}

absl::StatusOr<std::vector<OutletRecord>> LoadOutlets(
    const std::filesystem::path& path, std::optional<Ideology> bias_filter) {
  ASSIGN_OR_RETURN(std::ifstream in, Open(path));
  return ParseOutlets(in, path.string(), bias_filter);
}

absl::StatusOr<std::vector<ArticleRecord>> ParseArticles(
    std::istream& in, std::string_view source) {
  std::vector<ArticleRecord> out;
  std::map<PoolLabel, std::unordered_set<std::string>> urls;
  RETURN_IF_ERROR(ForEachJsonLine(
      in, source, [&](int line, const Json& obj) -> absl::Status {
        auto a = ArticleFromJson(obj);
        if (!a.ok()) return AtLine(source, line, a.status());
        if (!urls[a->pool_label].insert(a->url).second) {
          return LineError(source, line,
                           StrCat("duplicate url in pool ",
                                        ToString(a->pool_label), ": ", a->url));
        }
        out.push_back(*std::move(a));
        return absl::OkStatus();
      }));
  return out;
}

absl::StatusOr<std::vector<ArticleRecord>> LoadArticles(
    const std::filesystem::path& path) {
  ASSIGN_OR_RETURN(std::ifstream in, Open(path));
  return ParseArticles(in, path.string());
}

absl::StatusOr<ArticlePool> BuildPool(std::span<const OutletRecord> outlets,
                                      std::span<const ArticleRecord> articles,
                                      int articles_per_outlet) {
  if (outlets.empty()) {
    return absl::InvalidArgumentError("cannot build a pool from zero outlets");
  }
  if (articles_per_outlet < 1) {
    return absl::InvalidArgumentError("articles_per_outlet must be >= 1");
  }
  const Ideology bias = outlets.front().bias_label;
  std::map<std::string, std::vector<const ArticleRecord*>, std::less<>> by_outlet;
  for (const auto& o : outlets) {
    if (o.bias_label != bias) {
      return absl::InvalidArgumentError(StrCat(
          "outlets mix bias labels: ", outlets.front().outlet_id, " is ",
          ToString(bias), ", ", o.outlet_id, " is ", ToString(o.bias_label)));
    }
    by_outlet[o.outlet_id];
  }
  const PoolLabel label = ToPoolLabel(bias);
  for (const auto& a : articles) {
    if (!a.outlet_id.has_value()) {
      return absl::InvalidArgumentError(
          StrCat("article ", a.url, " has no outlet_id"));
    }
    auto it = by_outlet.find(*a.outlet_id);
    if (it == by_outlet.end()) {
      return absl::InvalidArgumentError(StrCat(
          "article ", a.url, " references unknown outlet ", *a.outlet_id));
    }
    if (a.pool_label != label) {
      return absl::InvalidArgumentError(
          StrCat("article ", a.url, " is labeled ",
                       ToString(a.pool_label), " but its outlet is ",
                       ToString(label)));
    }
    it->second.push_back(&a);
  }

  ArticlePool pool;
  pool.pool_label = label;
  std::unordered_set<std::string_view> urls;
  for (const auto& o : outlets) {
    const auto& list = by_outlet[o.outlet_id];
    if (static_cast<int>(list.size()) < articles_per_outlet) {
      return absl::FailedPreconditionError(StrCat(
          "insufficient articles for outlet ", o.outlet_id, ": has ",
          list.size(), ", need ", articles_per_outlet));
    }
    for (int i = 0; i < articles_per_outlet; ++i) {
      if (!urls.insert(list[i]->url).second) {
        return absl::InvalidArgumentError(
            StrCat("duplicate url in pool: ", list[i]->url));
      }
      pool.articles.push_back(*list[i]);
    }
  }
  return pool;
}

absl::StatusOr<ArticlePool> ParseMisinformationPool(std::istream& in,
                                                    std::string_view source,
                                                    const DateRange& window) {
  ArticlePool pool;
  pool.pool_label = PoolLabel::kMisinformation;
  std::unordered_set<std::string> urls;
  RETURN_IF_ERROR(ForEachJsonLine(
      in, source, [&](int line, const Json& obj) -> absl::Status {
        auto a = ArticleFromJson(obj);
        if (!a.ok()) return AtLine(source, line, a.status());
        if (a->pool_label != PoolLabel::kMisinformation) {
          return LineError(source, line,
                           StrCat("pool_label must be misinformation, got ",
                                        ToString(a->pool_label)));
        }
        if (!urls.insert(a->url).second) {
          return LineError(source, line, StrCat("duplicate url ", a->url));
        }
        if (a->published_at.has_value() && window.Contains(*a->published_at)) {
          pool.articles.push_back(*std::move(a));
        }
        return absl::OkStatus();
      }));
  if (pool.articles.empty()) {
    return absl::FailedPreconditionError(StrCat(
        "misinformation pool is empty after filtering ", source, " to ",
        FormatDate(window.first), "..", FormatDate(window.last)));
  }
  return pool;
}

absl::StatusOr<ArticlePool> LoadMisinformationPool(
    const std::filesystem::path& path, const DateRange& window) {
  ASSIGN_OR_RETURN(std::ifstream in, Open(path));
  return ParseMisinformationPool(in, path.string(), window);
}

absl::StatusOr<std::vector<ClaimRecord>> ParseClaims(std::istream& in,
                                                     std::string_view source,
                                                     const DateRange& window,
                                                     const VerdictSet& verdicts) {
  std::vector<ClaimRecord> out;
  std::unordered_set<std::string> ids;
  RETURN_IF_ERROR(ForEachJsonLine(
      in, source, [&](int line, const Json& obj) -> absl::Status {
        ClaimRecord c;
        auto id = RequiredString(obj, "claim_id");
        if (!id.ok()) return AtLine(source, line, id.status());
        auto text = RequiredString(obj, "text");
        if (!text.ok()) return AtLine(source, line, text.status());
        auto verdict = RequiredString(obj, "verdict");
        if (!verdict.ok()) return AtLine(source, line, verdict.status());
        auto checked = RequiredString(obj, "checked_at");
        if (!checked.ok()) return AtLine(source, line, checked.status());
        auto date = ParseDate(*checked);
        if (!date.ok()) return AtLine(source, line, date.status());
        c.claim_id = *std::move(id);
        c.text = *std::move(text);
        c.verdict = ParseVerdict(*verdict);
        c.checked_at = *date;
        if (c.claim_id.empty()) return LineError(source, line, "claim_id is empty");
        if (!ids.insert(c.claim_id).second) {
          return LineError(source, line,
                           StrCat("duplicate claim_id ", c.claim_id));
        }
        if (c.text.empty()) {
          return LineError(source, line,
                           StrCat("claim ", c.claim_id, " has empty text"));
        }
        if (window.Contains(c.checked_at) && verdicts.contains(c.verdict)) {
          out.push_back(std::move(c));
        }
        return absl::OkStatus();
      }));
  return out;
}

absl::StatusOr<std::vector<ClaimRecord>> LoadClaims(
    const std::filesystem::path& path, const DateRange& window,
    const VerdictSet& verdicts) {
  ASSIGN_OR_RETURN(std::ifstream in, Open(path));
  return ParseClaims(in, path.string(), window, verdicts);
}

std::uint64_t ExposureKey(std::uint64_t seed, std::string_view puppet_id,
                          int day_index) {
  return CounterRng::DeriveKey(
      seed, StrCat("exposure/", puppet_id),
      static_cast<std::uint64_t>(day_index));
}

absl::StatusOr<ExposureSequence> SampleExposure(const ArticlePool& pool, int n,
                                                std::uint64_t seed,
                                                std::string_view puppet_id,
                                                int day_index) {
  if (n < 0) return absl::InvalidArgumentError("sample size is negative");
  if (static_cast<std::size_t>(n) > pool.size()) {
    return absl::OutOfRangeError(StrCat("sample too large: n=", n,
                                              " but pool ",
                                              ToString(pool.pool_label),
                                              " has ", pool.size(), " articles"));
  }
  ExposureSequence seq;
  seq.puppet_id = std::string(puppet_id);
  seq.day_index = day_index;
  seq.seed = seed;
  CounterRng rng(ExposureKey(seed, puppet_id, day_index));
  for (std::size_t i : SamplePermutationPrefix(pool.size(), n, rng)) {
    seq.articles.push_back(pool.articles[i]);
  }
  return seq;
}

std::vector<ArticleRecord> ExposureReplacements(const ArticlePool& pool, int n,
                                                int count, std::uint64_t seed,
                                                std::string_view puppet_id,
                                                int day_index) {
  std::vector<ArticleRecord> out;
  if (n < 0 || count <= 0) return out;
  CounterRng rng(ExposureKey(seed, puppet_id, day_index));
  const auto idx = SamplePermutationPrefix(
      pool.size(), static_cast<std::size_t>(n) + count, rng);
  for (std::size_t i = static_cast<std::size_t>(n); i < idx.size(); ++i) {
    out.push_back(pool.articles[idx[i]]);
  }
  return out;
}

}  // namespace trackaudit
