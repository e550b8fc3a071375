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

#ifndef TRACKAUDIT_MOCKWORLD_H_
#define TRACKAUDIT_MOCKWORLD_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "trackaudit/corpus.h"
#include "trackaudit/labels.h"

namespace trackaudit {

inline constexpr std::string_view kSportsTopic = "sports";
inline constexpr std::string_view kMisinfoTopic = "misinfo";

struct WorldConfig {
  std::uint64_t seed = 1;
  // Topic 0 is sports, 1 is misinfo, 2..5 are the four ideologies; the
  // rest are neutral filler topics. Must be in [6, 64].
  int n_topics = 8;
  double effect_size = 0.0;  // epsilon, in [0, 1]
  int catalog_size = 500;
  int trackers_per_article = 2;
  int homepage_size = 50;

  // Synthetic corpora sizes.
  int outlets_per_ideology = 50;
  int articles_per_outlet = 20;
  int misinformation_articles = 2000;
  int n_claims = 200;
  // Fraction of article pages that show a consent banner.
  double consent_banner_rate = 0.6;
};

absl::Status ValidateWorldConfig(const WorldConfig& config);

struct MockVideo {
  std::string video_id;
  std::string topic;
  std::string title;
  std::string channel;
  std::string transcript;
  double base_rank_weight = 1.0;
};

struct MockArticle {
  ArticleRecord record;
  std::string topic;
  bool consent_banner = false;
  int trackers = 0;
};

// What third-party trackers have learned about one browser identity.
struct TrackerProfile {
  std::string profile_ref;
  std::map<std::string, std::int64_t> topic_counts;
};

// Deterministic synthetic web plus video platform. Profiles are keyed by
// the visitor identifier the platform issued to a browser; the world never
// sees puppet ids directly.
//
// Thread-safe: calls for different profiles may run concurrently and never
// influence each other's outputs.
class MockWorld {
 public:
  static absl::StatusOr<std::unique_ptr<MockWorld>> Create(
      const WorldConfig& config);

  MockWorld(const MockWorld&) = delete;
  MockWorld& operator=(const MockWorld&) = delete;

  const WorldConfig& config() const { return config_; }
  const std::vector<std::string>& topics() const { return topics_; }
  std::span<const MockVideo> catalog() const { return catalog_; }
  std::span<const MockArticle> articles() const { return articles_; }
  const MockArticle* FindArticle(std::string_view url) const;
  const MockVideo* FindVideo(std::string_view video_id) const;

  // Topic that articles of a pool are about.
  std::string_view TopicForPool(PoolLabel pool) const;

  // Synthetic MBFC/PolitiFact-style corpora describing this world.
  const std::vector<OutletRecord>& outlets() const { return outlets_; }
  std::vector<ArticleRecord> IdeologyArticles() const;
  std::vector<ArticleRecord> MisinformationArticles() const;
  const std::vector<ClaimRecord>& claims() const { return claims_; }
  // Writes outlets.jsonl, articles.jsonl, misinformation.jsonl, claims.jsonl.
  absl::Status WriteCorpora(const std::filesystem::path& dir) const;

  // Persist per-profile platform state under `dir` after every mutation and
  // reload unknown profiles from it, so a resumed process sees the same
  // platform.
  absl::Status SetStateDirectory(const std::filesystem::path& dir);

  // Issues a new visitor identifier to a browser that has none. Successive
  // calls for the same browser profile yield distinct identifiers.
  std::string IssueVisitorId(std::string_view browser_profile);

  // A page load by `profile_ref`. With tracking allowed, the article's
  // trackers report its topic; otherwise nothing is observed.
  absl::StatusOr<int> ServeArticleVisit(std::string_view profile_ref,
                                        std::string_view url,
                                        bool tracking_allowed);

  // Plays one video of `topic` (the first catalog entry of that topic) and
  // records the watch.
  absl::StatusOr<std::string> WatchVideo(std::string_view profile_ref,
                                         std::string_view topic);

  // k videos in on-page order; empty until the profile has watched a video.
  // Candidates are drawn by weighted sampling without replacement with
  // weight base_rank_weight * (1 + effect_size * share of the topic in the
  // tracker profile), then ordered by that weight. Each call is one
  // impression and advances the profile's impression counter.
  absl::StatusOr<std::vector<MockVideo>> RecommendHomepage(
      std::string_view profile_ref, int k);

  TrackerProfile tracker_profile(std::string_view profile_ref) const;
  std::int64_t watch_count(std::string_view profile_ref) const;

 private:
  struct ProfileState {
    TrackerProfile tracker;
    std::vector<std::string> watched;
    std::int64_t impressions = 0;
  };

  explicit MockWorld(WorldConfig config) : config_(std::move(config)) {}
  void Generate();

  // Caller holds mu_.
  ProfileState& StateLocked(std::string_view profile_ref);
  const ProfileState* FindStateLocked(std::string_view profile_ref) const;
  absl::Status PersistLocked(const ProfileState& state);

  WorldConfig config_;
  std::vector<std::string> topics_;
  std::vector<MockVideo> catalog_;
  std::vector<std::size_t> topic_of_video_;
  std::vector<MockArticle> articles_;
  std::map<std::string, std::size_t, std::less<>> article_index_;
  std::map<std::string, std::size_t, std::less<>> video_index_;
  std::vector<OutletRecord> outlets_;
  std::vector<ClaimRecord> claims_;

  mutable std::mutex mu_;
  mutable std::map<std::string, ProfileState, std::less<>> profiles_;
  std::map<std::string, std::int64_t, std::less<>> issued_;
  std::optional<std::filesystem::path> state_dir_;
};

}  // namespace trackaudit

#endif  // TRACKAUDIT_MOCKWORLD_H_
