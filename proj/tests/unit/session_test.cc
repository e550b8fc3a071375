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

#include <set>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "trackaudit/mockworld.h"
#include "trackaudit/session.h"
#include "trackaudit/simulated_driver.h"

namespace trackaudit {
namespace {

using namespace std::chrono_literals;
using ::testing::HasSubstr;
using testing::TempDir;

VideoRecord V(std::string id, int pos) { return {std::move(id), "t", "c", pos, std::nullopt}; }

TEST(PlanVisitBehavior, WithinBoundsAndDeterministic) {
  std::set<int> counts;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const VisitBehavior b = PlanVisitBehavior(seed);
    const int k = static_cast<int>(b.scroll_fractions.size());
    ASSERT_GE(k, kMinScrollEvents);
    ASSERT_LE(k, kMaxScrollEvents);
    counts.insert(k);
    for (double f : b.scroll_fractions) {
      ASSERT_GE(f, 0.0);
      ASSERT_LT(f, 1.0);
    }
    ASSERT_GE(b.dwell_seconds, kMinDwellSeconds);
    ASSERT_LE(b.dwell_seconds, kMaxDwellSeconds);
    const VisitBehavior again = PlanVisitBehavior(seed);
    ASSERT_EQ(b.scroll_fractions, again.scroll_fractions);
    ASSERT_EQ(b.dwell_seconds, again.dwell_seconds);
  }
  EXPECT_EQ(counts.size(), 6u);
}

TEST(NormalizeHomepage, KeepsFirstOccurrenceInPositionOrder) {
  auto out = NormalizeHomepage({V("b", 2), V("a", 1), V("b", 3), V("", 4), V("c", 5)}, 10);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].video_id, "a");
  EXPECT_EQ(out[1].video_id, "b");
  EXPECT_EQ(out[1].position, 2);
  EXPECT_EQ(out[2].video_id, "c");
}

TEST(NormalizeHomepage, StopsAtTopK) {
  std::vector<VideoRecord> raw;
  for (int i = 1; i <= 20; ++i) raw.push_back(V("v" + std::to_string(i), i));
  EXPECT_EQ(NormalizeHomepage(raw, 5).size(), 5u);
}

// Scriptable driver for exercising Session without a world.
class FakeDriver final : public BrowserDriver {
 public:
  explicit FakeDriver(Timestamp start) : clock_(start) {}

  absl::Status Navigate(std::string_view url, std::chrono::milliseconds) override {
    navigations.emplace_back(url);
    return nav_status;
  }
  ConsentOutcome AcceptConsent(std::chrono::milliseconds) override { return consent; }
  absl::StatusOr<int> Scroll(std::span<const double> f) override {
    scrolls = static_cast<int>(f.size());
    return scrolls;
  }
  int TrackersFired() const override { return 0; }
  absl::StatusOr<std::string> WatchVideo(std::string_view) override { return "w"; }
  absl::StatusOr<std::vector<VideoRecord>> ReadHomepage() override { return homepage; }
  std::optional<std::string> PlatformIdentifier() const override { return std::nullopt; }
  Clock& clock() override { return clock_; }
  absl::Status Close() override {
    ++closes;
    return absl::OkStatus();
  }

  absl::Status nav_status;
  ConsentOutcome consent = ConsentOutcome::kNoneFound;
  std::vector<VideoRecord> homepage;
  std::vector<std::string> navigations;
  int scrolls = 0;
  int closes = 0;

 private:
  VirtualClock clock_;
};

struct Rig {
  FakeDriver* driver;
  std::unique_ptr<Session> session;
};

Rig MakeRig() {
  auto d = std::make_unique<FakeDriver>(Timestamp{} + 1000h);
  FakeDriver* raw = d.get();
  SessionInfo info{"p-1", Environment::kTrackingRestrictive, "p-1", DriverKind::kSimulated};
  return {raw, std::make_unique<Session>(info, std::move(d))};
}

TEST(Session, VisitRecordsBehaviourAndAdvancesClock) {
  Rig rig = MakeRig();
  const Timestamp t0 = rig.session->clock().Now();
  auto log = rig.session->VisitArticle("https://a.example/1", 77, 3);
  ASSERT_OK(log);
  const VisitBehavior planned = PlanVisitBehavior(77);
  EXPECT_EQ(log->puppet_id, "p-1");
  EXPECT_EQ(log->day_index, 3);
  EXPECT_EQ(log->started_at, t0);
  EXPECT_EQ(log->dwell_seconds, planned.dwell_seconds);
  EXPECT_EQ(log->scroll_events, static_cast<int>(planned.scroll_fractions.size()));
  EXPECT_EQ(rig.session->clock().Now() - t0,
            std::chrono::milliseconds(static_cast<std::int64_t>(planned.dwell_seconds * 1000 + 0.5)));
  EXPECT_OK(ValidateVisitLog(*log));
}

TEST(Session, ConsentFailureIsRecordedNotFatal) {
  Rig rig = MakeRig();
  rig.driver->consent = ConsentOutcome::kFailed;
  auto log = rig.session->VisitArticle("https://a.example/1", 1);
  ASSERT_OK(log);
  EXPECT_EQ(log->consent_outcome, ConsentOutcome::kFailed);
  EXPECT_GT(log->scroll_events, 0);
}

TEST(Session, NavigationFailurePropagates) {
  Rig rig = MakeRig();
  rig.driver->nav_status = absl::DeadlineExceededError("slow");
  auto log = rig.session->VisitArticle("https://a.example/1", 1);
  ASSERT_FALSE(log.ok());
  EXPECT_EQ(log.status().code(), absl::StatusCode::kDeadlineExceeded);
  EXPECT_THAT(log.status().message(), HasSubstr("https://a.example/1"));
}

TEST(Session, CaptureNormalizesAndRejectsEmpty) {
  Rig rig = MakeRig();
  EXPECT_EQ(rig.session->CaptureHomepage(5).status().code(), absl::StatusCode::kUnavailable);
  rig.driver->homepage = {V("x", 1), V("x", 2), V("y", 3)};
  auto snap = rig.session->CaptureHomepage(5);
  ASSERT_OK(snap);
  EXPECT_EQ(snap->videos.size(), 2u);
  EXPECT_EQ(snap->phase, Phase::kBaseline);
  EXPECT_FALSE(rig.session->CaptureHomepage(0).ok());
}

TEST(Session, CloseIsIdempotent) {
  Rig rig = MakeRig();
  EXPECT_OK(rig.session->Close());
  EXPECT_OK(rig.session->Close());
  EXPECT_EQ(rig.driver->closes, 1);
}

WorldConfig World() {
  WorldConfig c;
  c.seed = 12;
  c.catalog_size = 120;
  c.homepage_size = 30;
  c.outlets_per_ideology = 2;
  c.misinformation_articles = 50;
  c.n_claims = 10;
  c.consent_banner_rate = 1.0;
  return c;
}

PuppetSpec Puppet(std::string id, Environment env) {
  return {id, Group::kMisinformation, env, 1, id};
}

std::string MisinfoUrl(const MockWorld& w, int i) {
  return w.MisinformationArticles()[i].url;
}

TEST(SimulatedDriver, RestrictiveEnvironmentFiresNoTrackers) {
  auto world = *MockWorld::Create(World());
  SimulatedSessionFactory factory(*world, std::nullopt, Timestamp{});
  for (Environment env : kAllEnvironments) {
    auto s = factory.Open(Puppet(std::string(ToString(env)), env), true);
    ASSERT_OK(s);
    ASSERT_OK((*s)->WatchVideo(kSportsTopic));
    auto log = (*s)->VisitArticle(MisinfoUrl(*world, 0), 5);
    ASSERT_OK(log);
    EXPECT_EQ(log->consent_outcome, ConsentOutcome::kAccepted);
    const auto id = (*s)->driver().PlatformIdentifier();
    ASSERT_TRUE(id.has_value());
    const auto profile = world->tracker_profile(*id);
    if (env == Environment::kTrackingRestrictive) {
      EXPECT_EQ(log->trackers_fired, 0);
      EXPECT_TRUE(profile.topic_counts.empty());
    } else {
      EXPECT_GT(log->trackers_fired, 0);
      EXPECT_EQ(profile.topic_counts.size(), 1u);
    }
    ASSERT_OK((*s)->Close());
  }
}

TEST(SimulatedDriver, DeadUrlIsNotFound) {
  auto world = *MockWorld::Create(World());
  SimulatedSessionFactory factory(*world, std::nullopt, Timestamp{});
  auto s = factory.Open(Puppet("p", Environment::kTrackingPermissive), true);
  ASSERT_OK(s);
  EXPECT_EQ((*s)->VisitArticle("https://gone.example/", 1).status().code(),
            absl::StatusCode::kNotFound);
}

TEST(SimulatedDriver, ResumeKeepsIdentityFreshReplacesIt) {
  TempDir dir;
  auto world = *MockWorld::Create(World());
  const PuppetSpec p = Puppet("p", Environment::kTrackingPermissive);
  std::string first;
  Timestamp closed_at;
  {
    SimulatedSessionFactory factory(*world, dir.path(), Timestamp{} + 24h);
    auto s = factory.Open(p, true);
    ASSERT_OK(s);
    ASSERT_OK((*s)->WatchVideo(kSportsTopic));
    first = *(*s)->driver().PlatformIdentifier();
    closed_at = (*s)->clock().Now();
    EXPECT_GT(closed_at, Timestamp{} + 24h);
    ASSERT_OK((*s)->Close());
  }
  SimulatedSessionFactory factory(*world, dir.path(), Timestamp{} + 24h);
  {
    auto s = factory.Open(p, false);
    ASSERT_OK(s);
    EXPECT_EQ((*s)->driver().PlatformIdentifier(), first);
    EXPECT_EQ((*s)->clock().Now(), closed_at);
    auto snap = (*s)->CaptureHomepage(10);
    ASSERT_OK(snap);
    EXPECT_EQ(snap->videos.size(), 10u);
  }
  auto fresh = factory.Open(p, true);
  ASSERT_OK(fresh);
  EXPECT_FALSE((*fresh)->driver().PlatformIdentifier().has_value());
  EXPECT_GE((*fresh)->clock().Now(), closed_at);
  // A fresh identity has watched nothing, so the homepage is empty.
  EXPECT_FALSE((*fresh)->CaptureHomepage(10).ok());
}

TEST(SimulatedDriver, ProfileOnDiskTracksAnOpenSession) {
  // A second factory reading the directory while the first session is
  // still open sees what a resumed process would after a kill.
  TempDir dir;
  auto world = *MockWorld::Create(World());
  const PuppetSpec p = Puppet("p", Environment::kTrackingPermissive);
  SimulatedSessionFactory first(*world, dir.path(), Timestamp{} + 24h);
  auto s = first.Open(p, true);
  ASSERT_OK(s);
  ASSERT_OK((*s)->WatchVideo(kSportsTopic));
  (*s)->clock().SleepFor(std::chrono::seconds(42));

  SimulatedSessionFactory second(*world, dir.path(), Timestamp{} + 24h);
  auto t = second.Open(p, false);
  ASSERT_OK(t);
  EXPECT_EQ((*t)->driver().PlatformIdentifier(), (*s)->driver().PlatformIdentifier());
  EXPECT_EQ((*t)->clock().Now(), (*s)->clock().Now());
  auto snap = (*t)->CaptureHomepage(10);
  ASSERT_OK(snap);
  EXPECT_EQ(snap->videos.size(), 10u);
}

TEST(SimulatedDriver, CorruptProfileIsDataLoss) {
  TempDir dir;
  auto world = *MockWorld::Create(World());
  testing::WriteFile(dir / "p" / "storage.json", "{not json");
  SimulatedSessionFactory factory(*world, dir.path(), Timestamp{});
  auto s = factory.Open(Puppet("p", Environment::kTrackingPermissive), false);
  EXPECT_EQ(s.status().code(), absl::StatusCode::kDataLoss);
}

}  // namespace
}  // namespace trackaudit
