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

#include <thread>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "trackaudit/store.h"

namespace trackaudit {
namespace {

using namespace std::chrono_literals;
using ::testing::HasSubstr;
using testing::TempDir;

const Timestamp kT0 = Timestamp{} + 24h * 20000;

VisitLog Visit(std::string puppet, int day, int i) {
  VisitLog v;
  v.puppet_id = std::move(puppet);
  v.day_index = day;
  v.url = "https://a.example/" + std::to_string(i);
  v.started_at = kT0 + std::chrono::minutes(i);
  v.dwell_seconds = 21.5;
  v.consent_outcome = ConsentOutcome::kAccepted;
  v.scroll_events = 3;
  v.trackers_fired = 2;
  if (i % 2 == 1) v.substituted_for = "https://dead.example/" + std::to_string(i);
  return v;
}

RecommendationSnapshot Snapshot(std::string puppet, Phase phase, int day) {
  RecommendationSnapshot s;
  s.puppet_id = std::move(puppet);
  s.phase = phase;
  s.day_index = day;
  s.captured_at = kT0 + 24h * day;
  s.videos.push_back({"vid-a", "A title \"quoted\"", "chan", 1, std::string("words")});
  s.videos.push_back({"vid-b", "B título", "chan", 3, std::nullopt});
  return s;
}

PhaseMarker Marker(std::string puppet, int day, Step step) {
  return {std::move(puppet), day, step, false, ""};
}

std::unique_ptr<RunArchive> NewArchive(const TempDir& dir,
                                       Durability d = Durability::kFlush) {
  auto a = RunArchive::Create(dir / "run", "abc123", kT0, d);
  EXPECT_TRUE(a.ok()) << a.status();
  return *std::move(a);
}

ExperimentPlan TwoCellPlan() {
  ExperimentPlan plan;
  plan.created_at = kT0;
  PlanCell a{Group::kMisinformation, Environment::kTrackingPermissive, {}};
  a.puppets.push_back({"m-1", a.group, a.environment, 1, "m-1"});
  a.puppets.push_back({"m-2", a.group, a.environment, 18446744073709551615ULL, "m-2"});
  PlanCell b{Group::kControl, Environment::kTrackingPermissive, {}};
  b.puppets.push_back({"c-1", b.group, b.environment, 3, "c-1"});
  plan.cells = {a, b};
  return plan;
}

TEST(RunArchive, CreateWritesManifestAndRefusesExisting) {
  TempDir dir;
  auto a = NewArchive(dir);
  EXPECT_TRUE(RunArchive::Exists(dir / "run"));
  EXPECT_EQ(a->manifest().schema_version, "1.0");
  EXPECT_EQ(a->manifest().config_hash, "abc123");
  EXPECT_EQ(a->manifest().created_at, kT0);
  auto again = RunArchive::Create(dir / "run", "abc123", kT0);
  EXPECT_EQ(again.status().code(), absl::StatusCode::kAlreadyExists);
  auto opened = RunArchive::Open(dir / "run");
  ASSERT_OK(opened);
  EXPECT_EQ((*opened)->manifest().config_hash, "abc123");
}

TEST(RunArchive, OpenMissingIsNotFound) {
  TempDir dir;
  EXPECT_FALSE(RunArchive::Exists(dir / "nope"));
  EXPECT_EQ(RunArchive::Open(dir / "nope").status().code(), absl::StatusCode::kNotFound);
}

TEST(RunArchive, RefusesOtherMajorVersion) {
  TempDir dir;
  NewArchive(dir);
  std::string m = testing::ReadFile(dir / "run" / "manifest.json");
  const auto at = m.find("\"1.0\"");
  ASSERT_NE(at, std::string::npos);
  m.replace(at, 5, "\"2.0\"");
  testing::WriteFile(dir / "run" / "manifest.json", m);
  auto opened = RunArchive::Open(dir / "run");
  ASSERT_FALSE(opened.ok());
  EXPECT_THAT(opened.status().message(), HasSubstr("2.0"));
}

TEST(RunArchive, PlanRoundTripKeepsFullSeedRange) {
  TempDir dir;
  auto a = NewArchive(dir);
  const ExperimentPlan plan = TwoCellPlan();
  ASSERT_OK(a->WritePlan(plan));
  auto back = a->ReadPlan();
  ASSERT_OK(back);
  EXPECT_EQ(*back, plan);
}

TEST(RunArchive, RecordsRoundTripInAppendOrder) {
  TempDir dir;
  auto a = NewArchive(dir);
  std::vector<Record> written = {
      Snapshot("m-1", Phase::kBaseline, 0), Marker("m-1", 0, Step::kSetting),
      Visit("m-1", 0, 0), Visit("m-1", 0, 1), Marker("m-1", 0, Step::kExposure),
      Snapshot("m-1", Phase::kPost, 0)};
  std::int64_t last = 0;
  for (const auto& r : written) {
    auto seq = a->Append(r, KindOf(r) == RecordKind::kMarker
                                ? std::optional<Timestamp>(kT0)
                                : std::nullopt);
    ASSERT_OK(seq);
    EXPECT_GT(*seq, last);
    last = *seq;
  }
  auto loaded = a->LoadRecords("m-1");
  ASSERT_OK(loaded);
  ASSERT_EQ(loaded->size(), written.size());
  for (std::size_t i = 0; i < written.size(); ++i) {
    EXPECT_EQ((*loaded)[i].record, written[i]) << i;
    EXPECT_EQ((*loaded)[i].kind, KindOf(written[i]));
    EXPECT_EQ((*loaded)[i].puppet_id, "m-1");
  }
  EXPECT_EQ((*loaded)[2].ts, std::get<VisitLog>(written[2]).started_at);
  EXPECT_THAT(a->PuppetIds(), ::testing::ElementsAre("m-1"));
}

TEST(RunArchive, SeqContinuesAfterReopen) {
  TempDir dir;
  {
    auto a = NewArchive(dir);
    ASSERT_OK(a->Append(Visit("p", 0, 0)));
    ASSERT_OK(a->Append(Visit("p", 0, 1)));
  }
  auto a = *RunArchive::Open(dir / "run", Durability::kFsync);
  auto seq = a->Append(Visit("p", 0, 2));
  ASSERT_OK(seq);
  EXPECT_EQ(*seq, 3);
}

TEST(RunArchive, AppendValidates) {
  TempDir dir;
  auto a = NewArchive(dir);
  VisitLog bad = Visit("p", 0, 0);
  bad.dwell_seconds = 90;
  EXPECT_EQ(a->Append(bad).status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(a->Append(Snapshot("p", Phase::kBaseline, 2)).ok());
  EXPECT_FALSE(a->Append(Marker("p", 0, Step::kSetting)).ok());  // no ts
  EXPECT_FALSE(a->Append(Visit("../escape", 0, 0)).ok());
  EXPECT_FALSE(a->Append(Visit(".hidden", 0, 0)).ok());
  EXPECT_TRUE(a->PuppetIds().empty());
}

TEST(RunArchive, TornFinalLineIsSkippedAndRepaired) {
  TempDir dir;
  {
    auto a = NewArchive(dir);
    ASSERT_OK(a->Append(Visit("p", 0, 0)));
    ASSERT_OK(a->Append(Visit("p", 0, 1)));
  }
  const auto file = dir / "run" / "records" / "p.jsonl";
  std::string text = testing::ReadFile(file);
  text += R"({"seq":3,"puppet_id":"p","kind":"vis)";
  testing::WriteFile(file, text);

  auto a = *RunArchive::Open(dir / "run", Durability::kFlush);
  LoadReport report;
  auto loaded = a->LoadRecords("p", &report);
  ASSERT_OK(loaded);
  EXPECT_EQ(loaded->size(), 2u);
  EXPECT_EQ(report.truncated_lines, 1);
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_THAT(report.warnings[0], HasSubstr("p.jsonl:3"));

  auto seq = a->Append(Visit("p", 0, 2));
  ASSERT_OK(seq);
  EXPECT_EQ(*seq, 3);
  LoadReport clean;
  loaded = a->LoadRecords("p", &clean);
  ASSERT_OK(loaded);
  EXPECT_EQ(loaded->size(), 3u);
  EXPECT_EQ(clean.truncated_lines, 0);
}

TEST(RunArchive, CorruptMiddleLineIsDataLossWithLocation) {
  TempDir dir;
  {
    auto a = NewArchive(dir);
    for (int i = 0; i < 3; ++i) ASSERT_OK(a->Append(Visit("p", 0, i)));
  }
  const auto file = dir / "run" / "records" / "p.jsonl";
  std::string text = testing::ReadFile(file);
  const auto first_nl = text.find('\n');
  text.replace(first_nl + 1, 1, "#");
  testing::WriteFile(file, text);
  auto a = *RunArchive::OpenReadOnly(dir / "run");
  auto loaded = a->LoadRecords("p");
  ASSERT_FALSE(loaded.ok());
  EXPECT_EQ(loaded.status().code(), absl::StatusCode::kDataLoss);
  EXPECT_THAT(loaded.status().message(), HasSubstr("p.jsonl:2: corrupt record"));
}

TEST(RunArchive, NonIncreasingSeqIsCorrupt) {
  TempDir dir;
  {
    auto a = NewArchive(dir);
    ASSERT_OK(a->Append(Visit("p", 0, 0)));
  }
  const auto file = dir / "run" / "records" / "p.jsonl";
  const std::string line = testing::ReadFile(file);
  testing::WriteFile(file, line + line);
  auto a = *RunArchive::OpenReadOnly(dir / "run");
  EXPECT_THAT(a->LoadRecords("p").status().message(), HasSubstr("does not increase"));
}

TEST(RunArchive, ReadOnlyRefusesWrites) {
  TempDir dir;
  NewArchive(dir);
  auto a = RunArchive::OpenReadOnly(dir / "run");
  ASSERT_OK(a);
  EXPECT_EQ((*a)->Append(Visit("p", 0, 0)).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_FALSE((*a)->WritePlan(TwoCellPlan()).ok());
  EXPECT_FALSE((*a)->WriteFileAtomic("x.json", "{}").ok());
  EXPECT_FALSE(std::filesystem::exists(dir / "run" / "records" / "p.jsonl"));
}

TEST(RunArchive, SnapshotFiltersResolveThroughPlan) {
  TempDir dir;
  auto a = NewArchive(dir);
  ASSERT_OK(a->WritePlan(TwoCellPlan()));
  for (const char* p : {"m-2", "m-1", "c-1"}) {
    ASSERT_OK(a->Append(Snapshot(p, Phase::kBaseline, 0)));
    ASSERT_OK(a->Append(Snapshot(p, Phase::kPost, 1)));
    ASSERT_OK(a->Append(Snapshot(p, Phase::kPost, 0)));
  }
  SnapshotFilter f;
  f.group = Group::kMisinformation;
  auto misinfo = a->LoadSnapshots(f);
  ASSERT_OK(misinfo);
  ASSERT_EQ(misinfo->size(), 6u);
  // (puppet, day, seq) order.
  EXPECT_EQ((*misinfo)[0].puppet_id, "m-1");
  EXPECT_EQ((*misinfo)[0].phase, Phase::kBaseline);
  EXPECT_EQ((*misinfo)[1].phase, Phase::kPost);
  EXPECT_EQ((*misinfo)[1].day_index, 0);
  EXPECT_EQ((*misinfo)[2].day_index, 1);
  EXPECT_EQ((*misinfo)[3].puppet_id, "m-2");

  f = {};
  f.phase = Phase::kPost;
  f.day_index = 1;
  auto day1 = a->LoadSnapshots(f);
  ASSERT_OK(day1);
  EXPECT_EQ(day1->size(), 3u);

  f = {};
  f.puppet_id = "c-1";
  f.phase = Phase::kBaseline;
  EXPECT_EQ(a->LoadSnapshots(f)->size(), 1u);

  f = {};
  f.environment = Environment::kTrackingRestrictive;
  EXPECT_TRUE(a->LoadSnapshots(f)->empty());
}

TEST(RunArchive, ConcurrentPuppetsKeepTheirOwnSequences) {
  TempDir dir;
  auto a = NewArchive(dir);
  std::vector<std::jthread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&a, t] {
      const std::string id = "p" + std::to_string(t);
      for (int i = 0; i < 50; ++i) EXPECT_TRUE(a->Append(Visit(id, 0, i)).ok());
    });
  }
  threads.clear();
  for (int t = 0; t < 4; ++t) {
    auto r = a->LoadRecords("p" + std::to_string(t));
    ASSERT_OK(r);
    ASSERT_EQ(r->size(), 50u);
    EXPECT_EQ(r->back().seq, 50);
  }
}

TEST(RunArchive, AtomicMetadataFiles) {
  TempDir dir;
  auto a = NewArchive(dir);
  auto missing = a->ReadFile("runstate.json");
  ASSERT_OK(missing);
  EXPECT_FALSE(missing->has_value());
  ASSERT_OK(a->WriteFileAtomic("runstate.json", "one"));
  ASSERT_OK(a->WriteFileAtomic("runstate.json", "two"));
  EXPECT_EQ(**a->ReadFile("runstate.json"), "two");
}

TEST(ConfigHash, StableAndSensitive) {
  EXPECT_EQ(ConfigHash("abc"), ConfigHash("abc"));
  EXPECT_NE(ConfigHash("abc"), ConfigHash("abd"));
  EXPECT_EQ(ConfigHash("abc").size(), 16u);
}

}  // namespace
}  // namespace trackaudit
