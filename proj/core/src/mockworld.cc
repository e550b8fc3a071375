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

#include "trackaudit/mockworld.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include "fmt/format.h"
#include "jsonl.h"
#include "str_util.h"
#include "trackaudit/rng.h"
#include "trackaudit/status_macros.h"

namespace trackaudit {
namespace {

using internal::Json;

constexpr int kSignatureSize = 12;

struct TopicSeed {
  std::string_view name;
  std::array<std::string_view, kSignatureSize> signature;
};

// Topics 0..7. Worlds with more topics get generated pseudo-word topics.
constexpr std::array<TopicSeed, 8> kNamedTopics = {{
    {"sports",
     {"goal", "match", "league", "striker", "playoff", "coach", "season",
      "championship", "stadium", "tournament", "referee", "dribble"}},
    {"misinfo",
     {"vaccine", "microchip", "rigged", "ballot", "hoax", "coverup",
      "plandemic", "chemtrail", "stolen", "depopulation", "miracle",
      "suppressed"}},
    {"extreme-left",
     {"revolution", "abolish", "capitalism", "comrade", "uprising",
      "collective", "proletariat", "expropriate", "commune", "insurrection",
      "vanguard", "bourgeoisie"}},
    {"left",
     {"progressive", "healthcare", "union", "climate", "equity", "medicare",
      "wages", "renewable", "reform", "labor", "welfare", "inclusion"}},
    {"right",
     {"conservative", "border", "taxes", "liberty", "firearms", "enterprise",
      "deregulation", "patriot", "tradition", "sovereignty", "faith",
      "family"}},
    {"extreme-right",
     {"globalist", "invasion", "replacement", "militia", "purge",
      "nationalist", "elites", "traitor", "tyranny", "secede", "crusade",
      "dominion"}},
    {"music",
     {"album", "guitar", "concert", "lyrics", "melody", "chorus", "remix",
      "drummer", "vinyl", "playlist", "acoustic", "band"}},
    {"cooking",
     {"recipe", "oven", "sauce", "garlic", "bake", "skillet", "simmer",
      "pastry", "spice", "grill", "dough", "marinade"}},
}};

constexpr std::array<std::string_view, 4> kIdeologyAbbrev = {"el", "l", "r",
                                                             "er"};

constexpr int kFillerWords = 400;
constexpr int kExtraArticlesPerOutlet = 2;
constexpr int kMisinfoDomains = 40;

// Pronounceable pseudo-words, independent of the world seed so vocabularies
// are stable across worlds.
std::string PseudoWord(CounterRng& rng) {
  static constexpr std::string_view kConsonants = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  const int syllables = static_cast<int>(rng.UniformInt(2, 3));
  std::string w;
  for (int s = 0; s < syllables; ++s) {
    w += kConsonants[rng.UniformInt(kConsonants.size())];
    w += kVowels[rng.UniformInt(kVowels.size())];
  }
  return w;
}

std::vector<std::string> MakeWords(std::string_view stream, int n,
                                   std::set<std::string>& taken) {
  CounterRng rng(CounterRng::DeriveKey(0, stream));
  std::vector<std::string> out;
  while (static_cast<int>(out.size()) < n) {
    std::string w = PseudoWord(rng);
    if (taken.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

template <typename T>
const T& Pick(const std::vector<T>& v, CounterRng& rng) {
  return v[rng.UniformInt(v.size())];
}

std::vector<std::string> PickDistinct(const std::vector<std::string>& from,
                                      std::size_t n, CounterRng& rng) {
  std::vector<std::string> out;
  for (std::size_t i : SamplePermutationPrefix(from.size(), n, rng)) {
    out.push_back(from[i]);
  }
  return out;
}

void Shuffle(std::vector<std::string>& words, CounterRng& rng) {
  for (std::size_t i = words.size(); i > 1; --i) {
    std::swap(words[i - 1], words[rng.UniformInt(i)]);
  }
}

std::string Join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(out[0]));
  return out;
}

std::string VideoId(std::uint64_t bits) {
  static constexpr std::string_view kAlphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
  std::string id;
  for (int i = 0; i < 11; ++i) {
    id += kAlphabet[bits & 63];
    bits >>= 6;
  }
  return id;
}

Date DateFromDays(std::chrono::sys_days start, std::int64_t offset) {
  return Date{start + std::chrono::days{offset}};
}

Date UniformDate(CounterRng& rng, Date first, Date last) {
  const auto a = std::chrono::sys_days{first};
  const auto b = std::chrono::sys_days{last};
  return DateFromDays(a, rng.UniformInt(0, (b - a).count()));
}

}  // namespace

absl::Status ValidateWorldConfig(const WorldConfig& c) {
  if (c.n_topics < 6 || c.n_topics > 64) {
    return absl::InvalidArgumentError(
        StrCat("n_topics must be in [6, 64], got ", c.n_topics));
  }
  if (!(c.effect_size >= 0.0 && c.effect_size <= 1.0)) {
    return absl::InvalidArgumentError(
        StrCat("effect_size must be in [0, 1], got ", c.effect_size));
  }
  if (c.catalog_size < c.n_topics) {
    return absl::InvalidArgumentError(
        StrCat("catalog_size ", c.catalog_size,
               " cannot cover every topic (n_topics=", c.n_topics, ")"));
  }
  if (c.homepage_size < 1 || c.homepage_size > c.catalog_size) {
    return absl::InvalidArgumentError(
        StrCat("homepage_size must be in [1, catalog_size], got ",
               c.homepage_size));
  }
  if (c.trackers_per_article < 0) {
    return absl::InvalidArgumentError("trackers_per_article is negative");
  }
  if (c.outlets_per_ideology < 1 || c.articles_per_outlet < 1 ||
      c.misinformation_articles < 1 || c.n_claims < 1) {
    return absl::InvalidArgumentError(
        "corpus sizes (outlets_per_ideology, articles_per_outlet, "
        "misinformation_articles, n_claims) must be >= 1");
  }
  if (!(c.consent_banner_rate >= 0.0 && c.consent_banner_rate <= 1.0)) {
    return absl::InvalidArgumentError("consent_banner_rate must be in [0, 1]");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::unique_ptr<MockWorld>> MockWorld::Create(
    const WorldConfig& config) {
  RETURN_IF_ERROR(ValidateWorldConfig(config));
  std::unique_ptr<MockWorld> world(new MockWorld(config));
  world->Generate();
  return world;
}

void MockWorld::Generate() {
  const std::uint64_t seed = config_.seed;
  std::set<std::string> taken;
  std::vector<std::vector<std::string>> signatures;
  for (int t = 0; t < config_.n_topics; ++t) {
    if (t < static_cast<int>(kNamedTopics.size())) {
      topics_.emplace_back(kNamedTopics[t].name);
      std::vector<std::string> sig(kNamedTopics[t].signature.begin(),
                                   kNamedTopics[t].signature.end());
      taken.insert(sig.begin(), sig.end());
      signatures.push_back(std::move(sig));
    } else {
      topics_.push_back(fmt::format("topic-{}", t));
    }
  }
  for (int t = static_cast<int>(kNamedTopics.size()); t < config_.n_topics;
       ++t) {
    signatures.push_back(
        MakeWords(fmt::format("signature/{}", t), kSignatureSize, taken));
  }
  const std::vector<std::string> filler =
      MakeWords("filler", kFillerWords, taken);
  const auto& misinfo_sig = signatures[1];

  // Claims first: misinfo videos are planted from claim token sets.
  std::vector<std::vector<std::string>> claim_tokens;
  for (int j = 0; j < config_.n_claims; ++j) {
    CounterRng rng(CounterRng::DeriveKey(seed, "claim", j));
    ClaimRecord c;
    c.claim_id = fmt::format("pf-{:05}", j + 1);
    std::vector<std::string> sig = PickDistinct(misinfo_sig, 5, rng);
    std::vector<std::string> words = sig;
    for (int f = 0; f < 3; ++f) words.push_back(Pick(filler, rng));
    Shuffle(words, rng);
    c.text = Join(words);
    const double u = rng.UniformDouble();
    c.verdict = u < 0.7 ? Verdict::kFalse
                        : (u < 0.9 ? Verdict::kMisleading : Verdict::kOther);
    c.checked_at = UniformDate(rng, Date{std::chrono::year{2019} / 7 / 1},
                               Date{std::chrono::year{2026} / 1 / 31});
    claims_.push_back(std::move(c));
    claim_tokens.push_back(std::move(sig));
  }

  std::set<std::string> ids;
  for (int i = 0; i < config_.catalog_size; ++i) {
    CounterRng rng(CounterRng::DeriveKey(seed, "video", i));
    const std::size_t t = static_cast<std::size_t>(i % config_.n_topics);
    MockVideo v;
    v.video_id = VideoId(rng.Next());
    while (!ids.insert(v.video_id).second) v.video_id = VideoId(rng.Next());
    v.topic = topics_[t];
    v.channel = fmt::format("{}-channel-{}", topics_[t], i % 9);

    std::vector<std::string> title;
    std::vector<std::string> body;
    if (t == 1) {
      // Three tokens of one claim in the title, so every misinfo video
      // matches at least one claim on >= 3 signature tokens.
      const auto& planted = claim_tokens[rng.UniformInt(claim_tokens.size())];
      for (std::size_t k = 0; k < 3; ++k) title.push_back(planted[k]);
      title.push_back(Pick(misinfo_sig, rng));
    } else {
      title = PickDistinct(signatures[t], 4, rng);
    }
    for (int f = 0; f < 2; ++f) title.push_back(Pick(filler, rng));
    for (int s = 0; s < 10; ++s) body.push_back(Pick(signatures[t], rng));
    for (int f = 0; f < 6; ++f) body.push_back(Pick(filler, rng));
    Shuffle(title, rng);
    Shuffle(body, rng);
    v.title = Join(title);
    v.transcript = Join(body);
    v.base_rank_weight = rng.Uniform(0.8, 1.2);
    video_index_[v.video_id] = catalog_.size();
    topic_of_video_.push_back(t);
    catalog_.push_back(std::move(v));
  }

  const Date news_first{std::chrono::year{2023} / 1 / 1};
  const Date news_last{std::chrono::year{2025} / 10 / 31};
  for (int ideo = 0; ideo < 4; ++ideo) {
    const auto bias = static_cast<Ideology>(ideo);
    const PoolLabel pool = ToPoolLabel(bias);
    for (int o = 0; o < config_.outlets_per_ideology; ++o) {
      OutletRecord outlet;
      outlet.outlet_id = fmt::format("{}-{:03}", kIdeologyAbbrev[ideo], o + 1);
      outlet.domain =
          fmt::format("{}-news-{:03}.example", ToString(bias), o + 1);
      outlet.bias_label = bias;
      for (int a = 0; a < config_.articles_per_outlet + kExtraArticlesPerOutlet;
           ++a) {
        CounterRng rng(CounterRng::DeriveKey(
            seed, StrCat("article/", outlet.outlet_id), a));
        MockArticle art;
        art.record.published_at = UniformDate(rng, news_first, news_last);
        art.record.url = fmt::format(
            "https://{}/{}/story-{}", outlet.domain,
            FormatDate(*art.record.published_at).substr(0, 7), a + 1);
        art.record.outlet_id = outlet.outlet_id;
        art.record.pool_label = pool;
        art.topic = topics_[2 + ideo];
        art.consent_banner = rng.UniformDouble() < config_.consent_banner_rate;
        art.trackers = config_.trackers_per_article;
        article_index_[art.record.url] = articles_.size();
        articles_.push_back(std::move(art));
      }
      outlets_.push_back(std::move(outlet));
    }
  }
  for (int a = 0; a < config_.misinformation_articles; ++a) {
    CounterRng rng(CounterRng::DeriveKey(seed, "misinfo-article", a));
    MockArticle art;
    art.record.published_at =
        UniformDate(rng, Date{std::chrono::year{2019} / 6 / 1},
                    Date{std::chrono::year{2025} / 12 / 31});
    art.record.url = fmt::format("https://misinfo-site-{:02}.example/post/{}",
                                 a % kMisinfoDomains + 1, a + 1);
    art.record.pool_label = PoolLabel::kMisinformation;
    art.topic = topics_[1];
    art.consent_banner = rng.UniformDouble() < config_.consent_banner_rate;
    art.trackers = config_.trackers_per_article;
    article_index_[art.record.url] = articles_.size();
    articles_.push_back(std::move(art));
  }
}

const MockArticle* MockWorld::FindArticle(std::string_view url) const {
  auto it = article_index_.find(url);
  return it == article_index_.end() ? nullptr : &articles_[it->second];
}

const MockVideo* MockWorld::FindVideo(std::string_view video_id) const {
  auto it = video_index_.find(video_id);
  return it == video_index_.end() ? nullptr : &catalog_[it->second];
}

std::string_view MockWorld::TopicForPool(PoolLabel pool) const {
  switch (pool) {
    case PoolLabel::kExtremeLeft:
      return topics_[2];
    case PoolLabel::kLeft:
      return topics_[3];
    case PoolLabel::kRight:
      return topics_[4];
    case PoolLabel::kExtremeRight:
      return topics_[5];
    case PoolLabel::kMisinformation:
      return topics_[1];
  }
  return topics_[1];
}

std::vector<ArticleRecord> MockWorld::IdeologyArticles() const {
  std::vector<ArticleRecord> out;
  for (const auto& a : articles_) {
    if (a.record.pool_label != PoolLabel::kMisinformation) {
      out.push_back(a.record);
    }
  }
  return out;
}

std::vector<ArticleRecord> MockWorld::MisinformationArticles() const {
  std::vector<ArticleRecord> out;
  for (const auto& a : articles_) {
    if (a.record.pool_label == PoolLabel::kMisinformation) {
      out.push_back(a.record);
    }
  }
  return out;
}

namespace {

Json ArticleJson(const ArticleRecord& a) {
  Json j;
  j["url"] = a.url;
  j["outlet_id"] = a.outlet_id.has_value() ? Json(*a.outlet_id) : Json(nullptr);
  j["pool_label"] = std::string(ToString(a.pool_label));
  j["published_at"] = a.published_at.has_value()
                          ? Json(FormatDate(*a.published_at))
                          : Json(nullptr);
  return j;
}

absl::Status WriteLines(const std::filesystem::path& path,
                        const std::vector<Json>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) return absl::UnavailableError(StrCat("cannot write ", path.string()));
  for (const auto& r : rows) out << r.dump() << '\n';
  out.flush();
  if (!out) return absl::DataLossError(StrCat("short write to ", path.string()));
  return absl::OkStatus();
}

}  // namespace

absl::Status MockWorld::WriteCorpora(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }
  std::vector<Json> rows;
  for (const auto& o : outlets_) {
    rows.push_back(Json{{"outlet_id", o.outlet_id},
                        {"domain", o.domain},
                        {"bias_label", std::string(ToString(o.bias_label))}});
  }
  RETURN_IF_ERROR(WriteLines(dir / "outlets.jsonl", rows));
  rows.clear();
  for (const auto& a : IdeologyArticles()) rows.push_back(ArticleJson(a));
  RETURN_IF_ERROR(WriteLines(dir / "articles.jsonl", rows));
  rows.clear();
  for (const auto& a : MisinformationArticles()) rows.push_back(ArticleJson(a));
  RETURN_IF_ERROR(WriteLines(dir / "misinformation.jsonl", rows));
  rows.clear();
  for (const auto& c : claims_) {
    std::string verdict = c.verdict == Verdict::kOther
                              ? "half-true"
                              : std::string(ToString(c.verdict));
    rows.push_back(Json{{"claim_id", c.claim_id},
                        {"text", c.text},
                        {"verdict", verdict},
                        {"checked_at", FormatDate(c.checked_at)}});
  }
  return WriteLines(dir / "claims.jsonl", rows);
}

absl::Status MockWorld::SetStateDirectory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }
  std::lock_guard<std::mutex> lock(mu_);
  state_dir_ = dir;
  std::ifstream in(dir / "issued.json");
  if (in) {
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      return absl::DataLossError(
          StrCat("corrupt ", (dir / "issued.json").string()));
    }
    for (auto& [k, v] : j.items()) issued_[k] = v.get<std::int64_t>();
  }
  return absl::OkStatus();
}

std::string MockWorld::IssueVisitorId(std::string_view browser_profile) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = issued_.find(browser_profile);
  if (it == issued_.end()) {
    it = issued_.emplace(std::string(browser_profile), 0).first;
  }
  const std::int64_t n = it->second++;
  if (state_dir_.has_value()) {
    Json j = Json::object();
    for (const auto& [k, v] : issued_) j[k] = v;
    const auto tmp = *state_dir_ / "issued.json.tmp";
    { std::ofstream(tmp, std::ios::trunc) << j.dump(); }
    std::filesystem::rename(tmp, *state_dir_ / "issued.json");
  }
  CounterRng rng(CounterRng::DeriveKey(config_.seed,
                                       StrCat("visitor/", browser_profile), n));
  return fmt::format("VISITOR_{:016x}", rng.Next());
}

const MockWorld::ProfileState* MockWorld::FindStateLocked(
    std::string_view profile_ref) const {
  auto it = profiles_.find(profile_ref);
  if (it != profiles_.end()) return &it->second;
  if (!state_dir_.has_value()) return nullptr;
  std::ifstream in(*state_dir_ / StrCat(profile_ref, ".json"));
  if (!in) return nullptr;
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) return nullptr;
  ProfileState s;
  s.tracker.profile_ref = std::string(profile_ref);
  const Json counts = j.value("topic_counts", Json::object());
  for (auto& [k, v] : counts.items()) {
    s.tracker.topic_counts[k] = v.get<std::int64_t>();
  }
  s.watched = j.value("watched", std::vector<std::string>{});
  s.impressions = j.value("impressions", std::int64_t{0});
  return &profiles_.emplace(std::string(profile_ref), std::move(s))
              .first->second;
}

MockWorld::ProfileState& MockWorld::StateLocked(std::string_view profile_ref) {
  if (const ProfileState* s = FindStateLocked(profile_ref)) {
    return const_cast<ProfileState&>(*s);
  }
  ProfileState s;
  s.tracker.profile_ref = std::string(profile_ref);
  return profiles_.emplace(std::string(profile_ref), std::move(s))
      .first->second;
}

absl::Status MockWorld::PersistLocked(const ProfileState& state) {
  if (!state_dir_.has_value()) return absl::OkStatus();
  Json j;
  j["topic_counts"] = Json::object();
  for (const auto& [k, v] : state.tracker.topic_counts) j["topic_counts"][k] = v;
  j["watched"] = state.watched;
  j["impressions"] = state.impressions;
  const auto path = *state_dir_ / StrCat(state.tracker.profile_ref, ".json");
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << j.dump();
    if (!out) return absl::UnavailableError(StrCat("cannot write ", tmp));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) return absl::UnavailableError(StrCat("rename failed: ", ec.message()));
  return absl::OkStatus();
}

absl::StatusOr<int> MockWorld::ServeArticleVisit(std::string_view profile_ref,
                                                 std::string_view url,
                                                 bool tracking_allowed) {
  const MockArticle* article = FindArticle(url);
  if (article == nullptr) {
    return absl::NotFoundError(StrCat("visit failed: 404 for ", url));
  }
  if (!tracking_allowed || article->trackers == 0) return 0;
  std::lock_guard<std::mutex> lock(mu_);
  ProfileState& s = StateLocked(profile_ref);
  ++s.tracker.topic_counts[article->topic];
  RETURN_IF_ERROR(PersistLocked(s));
  return article->trackers;
}

absl::StatusOr<std::string> MockWorld::WatchVideo(std::string_view profile_ref,
                                                  std::string_view topic) {
  auto t = std::find(topics_.begin(), topics_.end(), topic);
  if (t == topics_.end()) {
    return absl::NotFoundError(
        StrCat("watch failed: no video for topic \"", topic, "\""));
  }
  const auto topic_idx = static_cast<std::size_t>(t - topics_.begin());
  std::size_t video = 0;
  while (topic_of_video_[video] != topic_idx) ++video;
  std::lock_guard<std::mutex> lock(mu_);
  ProfileState& s = StateLocked(profile_ref);
  s.watched.push_back(catalog_[video].video_id);
  RETURN_IF_ERROR(PersistLocked(s));
  return catalog_[video].video_id;
}

absl::StatusOr<std::vector<MockVideo>> MockWorld::RecommendHomepage(
    std::string_view profile_ref, int k) {
  if (k <= 0) {
    return absl::InvalidArgumentError(StrCat("k must be positive, got ", k));
  }
  std::map<std::string, std::int64_t> counts;
  std::int64_t impression = 0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    const ProfileState* found = FindStateLocked(profile_ref);
    if (found == nullptr || found->watched.empty()) {
      return std::vector<MockVideo>{};
    }
    ProfileState& s = StateLocked(profile_ref);
    counts = s.tracker.topic_counts;
    impression = s.impressions++;
    RETURN_IF_ERROR(PersistLocked(s));
  }

  std::int64_t total = 0;
  for (const auto& [topic, n] : counts) total += n;
  std::vector<double> boost(topics_.size(), 1.0);
  for (std::size_t t = 0; t < topics_.size(); ++t) {
    auto it = counts.find(topics_[t]);
    const double share =
        it == counts.end()
            ? 0.0
            : static_cast<double>(it->second) /
                  static_cast<double>(std::max<std::int64_t>(1, total));
    boost[t] = 1.0 + config_.effect_size * share;
  }

  // Efraimidis-Spirakis: key = log(u) / w; the k largest keys are a weighted
  // sample without replacement.
  CounterRng rng(CounterRng::DeriveKey(
      config_.seed, StrCat("homepage/", profile_ref),
      static_cast<std::uint64_t>(impression)));
  struct Candidate {
    std::size_t video;
    double weight;
    double key;
  };
  std::vector<Candidate> cand;
  cand.reserve(catalog_.size());
  for (std::size_t i = 0; i < catalog_.size(); ++i) {
    const double u =
        (static_cast<double>(rng.Next() >> 11) + 0.5) * 0x1.0p-53;
    const double w = catalog_[i].base_rank_weight * boost[topic_of_video_[i]];
    cand.push_back({i, w, std::log(u) / w});
  }
  const std::size_t n = std::min<std::size_t>(k, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + n, cand.end(),
                    [](const Candidate& a, const Candidate& b) {
                      return a.key > b.key;
                    });
  cand.resize(n);
  std::stable_sort(cand.begin(), cand.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.weight > b.weight;
                   });
  std::vector<MockVideo> out;
  out.reserve(n);
  for (const auto& c : cand) out.push_back(catalog_[c.video]);
  return out;
}

TrackerProfile MockWorld::tracker_profile(std::string_view profile_ref) const {
  std::lock_guard<std::mutex> lock(mu_);
  const ProfileState* s = FindStateLocked(profile_ref);
  if (s == nullptr) {
    TrackerProfile empty;
    empty.profile_ref = std::string(profile_ref);
    return empty;
  }
  return s->tracker;
}

std::int64_t MockWorld::watch_count(std::string_view profile_ref) const {
  std::lock_guard<std::mutex> lock(mu_);
  const ProfileState* s = FindStateLocked(profile_ref);
  return s == nullptr ? 0 : static_cast<std::int64_t>(s->watched.size());
}

}  // namespace trackaudit
