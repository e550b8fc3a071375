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

#include "trackaudit/simulated_driver.h"

#include <fstream>
#include <utility>

#include "jsonl.h"
#include "str_util.h"
#include "trackaudit/status_macros.h"

namespace trackaudit {
namespace {

using internal::Json;

constexpr std::chrono::milliseconds kVideoWatchTime{180'000};
constexpr std::chrono::milliseconds kPageLoadTime{1'500};

// Writes storage through to disk on every change, the way a browser keeps
// its profile, so a killed process resumes with the identity and clock the
// platform last saw.
class SimulatedBrowser final : public BrowserDriver {
 public:
  SimulatedBrowser(SimulatedSessionFactory& factory, std::string profile_ref,
                   Environment environment, BrowserStorage storage,
                   Timestamp epoch)
      : factory_(factory),
        world_(factory.world()),
        profile_ref_(std::move(profile_ref)),
        environment_(environment),
        storage_(std::move(storage)),
        clock_(*this, storage_.virtual_now.value_or(epoch)) {}

  absl::Status Navigate(std::string_view url,
                        std::chrono::milliseconds) override {
    page_ = world_.FindArticle(url);
    trackers_ = 0;
    if (page_ == nullptr) {
      return absl::NotFoundError(StrCat("404 for ", url));
    }
    clock_.SleepFor(kPageLoadTime);
    RETURN_IF_ERROR(Persist());
    if (environment_ == Environment::kTrackingPermissive) {
      // Third-party cookies are allowed, so the platform's trackers see the
      // same visitor id its first-party pages set.
      ASSIGN_OR_RETURN(const std::string visitor, VisitorId());
      ASSIGN_OR_RETURN(trackers_, world_.ServeArticleVisit(
                                      visitor, url, /*tracking_allowed=*/true));
    } else {
      ASSIGN_OR_RETURN(trackers_, world_.ServeArticleVisit(
                                      profile_ref_, url, /*tracking_allowed=*/false));
    }
    return absl::OkStatus();
  }

  ConsentOutcome AcceptConsent(std::chrono::milliseconds) override {
    if (page_ == nullptr) return ConsentOutcome::kFailed;
    if (!page_->consent_banner) return ConsentOutcome::kNoneFound;
    storage_.cookies[StrCat("consent.", page_->record.url.substr(
                                           0, page_->record.url.find('/', 8)))] =
        "accepted";
    if (!Persist().ok()) return ConsentOutcome::kFailed;
    return ConsentOutcome::kAccepted;
  }

  absl::StatusOr<int> Scroll(std::span<const double> fractions) override {
    return static_cast<int>(fractions.size());
  }

  int TrackersFired() const override { return trackers_; }

  absl::StatusOr<std::string> WatchVideo(std::string_view topic) override {
    ASSIGN_OR_RETURN(const std::string visitor, VisitorId());
    ASSIGN_OR_RETURN(std::string id, world_.WatchVideo(visitor, topic));
    clock_.SleepFor(kVideoWatchTime);
    RETURN_IF_ERROR(Persist());
    return id;
  }

  absl::StatusOr<std::vector<VideoRecord>> ReadHomepage() override {
    ASSIGN_OR_RETURN(const std::string visitor, VisitorId());
    ASSIGN_OR_RETURN(std::vector<MockVideo> videos,
                     world_.RecommendHomepage(visitor, world_.config().homepage_size));
    std::vector<VideoRecord> out;
    out.reserve(videos.size());
    int position = 0;
    for (auto& v : videos) {
      VideoRecord r;
      r.video_id = std::move(v.video_id);
      r.title = std::move(v.title);
      r.channel = std::move(v.channel);
      r.position = ++position;
      r.transcript = std::move(v.transcript);
      out.push_back(std::move(r));
    }
    return out;
  }

  std::optional<std::string> PlatformIdentifier() const override {
    auto it = storage_.cookies.find(std::string(kPlatformCookie));
    if (it == storage_.cookies.end()) return std::nullopt;
    return it->second;
  }

  Clock& clock() override { return clock_; }

  absl::Status Close() override { return Persist(); }

 private:
  // Virtual clock that saves the profile whenever time moves. Save errors
  // are held until the next operation that can report them.
  class PersistedClock final : public Clock {
   public:
    PersistedClock(SimulatedBrowser& owner, Timestamp start)
        : owner_(owner), inner_(start) {}
    Timestamp Now() const override { return inner_.Now(); }
    void SleepFor(std::chrono::milliseconds d) override {
      inner_.SleepFor(d);
      owner_.PersistLater();
    }
    void SleepUntil(Timestamp t) override {
      inner_.SleepUntil(t);
      owner_.PersistLater();
    }

   private:
    SimulatedBrowser& owner_;
    VirtualClock inner_;
  };

  absl::Status Persist() {
    storage_.virtual_now = clock_.Now();
    absl::Status s = factory_.SaveStorage(profile_ref_, storage_);
    if (s.ok()) s = std::exchange(pending_error_, absl::OkStatus());
    return s;
  }
  void PersistLater() {
    storage_.virtual_now = clock_.Now();
    if (absl::Status s = factory_.SaveStorage(profile_ref_, storage_); !s.ok()) {
      pending_error_ = s;
    }
  }

  absl::StatusOr<std::string> VisitorId() {
    auto& id = storage_.cookies[std::string(kPlatformCookie)];
    if (id.empty()) {
      id = world_.IssueVisitorId(profile_ref_);
      RETURN_IF_ERROR(Persist());
    }
    return id;
  }

  SimulatedSessionFactory& factory_;
  MockWorld& world_;
  std::string profile_ref_;
  Environment environment_;
  BrowserStorage storage_;
  PersistedClock clock_;
  absl::Status pending_error_;
  const MockArticle* page_ = nullptr;
  int trackers_ = 0;
};

Json StorageToJson(const BrowserStorage& s) {
  Json j;
  j["cookies"] = s.cookies;
  j["local_storage"] = s.local_storage;
  j["virtual_now"] =
      s.virtual_now.has_value() ? Json(FormatTimestamp(*s.virtual_now)) : Json();
  return j;
}

}  // namespace

SimulatedSessionFactory::SimulatedSessionFactory(
    MockWorld& world, std::optional<std::filesystem::path> profiles_root,
    Timestamp epoch)
    : world_(world), root_(std::move(profiles_root)), epoch_(epoch) {}

absl::StatusOr<BrowserStorage> SimulatedSessionFactory::LoadStorage(
    std::string_view profile_ref) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!root_.has_value()) {
    auto it = memory_.find(profile_ref);
    return it == memory_.end() ? BrowserStorage{} : it->second;
  }
  const auto path = *root_ / profile_ref / "storage.json";
  std::ifstream in(path);
  if (!in) return BrowserStorage{};
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::DataLossError(StrCat("corrupt browser profile ", path.string()));
  }
  BrowserStorage s;
  s.cookies = j.value("cookies", std::map<std::string, std::string>{});
  s.local_storage = j.value("local_storage", std::map<std::string, std::string>{});
  if (j.contains("virtual_now") && j["virtual_now"].is_string()) {
    ASSIGN_OR_RETURN(s.virtual_now,
                     ParseTimestamp(j["virtual_now"].get<std::string>()));
  }
  return s;
}

absl::Status SimulatedSessionFactory::SaveStorage(std::string_view profile_ref,
                                                  const BrowserStorage& storage) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!root_.has_value()) {
    memory_[std::string(profile_ref)] = storage;
    return absl::OkStatus();
  }
  const auto dir = *root_ / profile_ref;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return absl::UnavailableError(StrCat("cannot create ", dir.string()));
  const auto tmp = dir / "storage.json.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << StorageToJson(storage).dump();
    if (!out) return absl::UnavailableError(StrCat("cannot write ", tmp.string()));
  }
  std::filesystem::rename(tmp, dir / "storage.json", ec);
  if (ec) return absl::UnavailableError(StrCat("rename failed: ", ec.message()));
  return absl::OkStatus();
}

absl::StatusOr<std::unique_ptr<Session>> SimulatedSessionFactory::Open(
    const PuppetSpec& puppet, bool fresh) {
  BrowserStorage storage;
  if (fresh) {
    // A fresh profile keeps only the clock: storage is cleared, time is not
    // rewound.
    ASSIGN_OR_RETURN(BrowserStorage old, LoadStorage(puppet.profile_ref));
    storage.virtual_now = old.virtual_now;
    RETURN_IF_ERROR(SaveStorage(puppet.profile_ref, storage));
  } else {
    ASSIGN_OR_RETURN(storage, LoadStorage(puppet.profile_ref));
  }
  auto driver = std::make_unique<SimulatedBrowser>(
      *this, puppet.profile_ref, puppet.environment, std::move(storage), epoch_);
  SessionInfo info{puppet.puppet_id, puppet.environment, puppet.profile_ref,
                   DriverKind::kSimulated};
  return std::make_unique<Session>(std::move(info), std::move(driver));
}

}  // namespace trackaudit
