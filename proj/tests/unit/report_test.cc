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

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"
#include "trackaudit/report.h"

namespace trackaudit {
namespace {

using ::testing::HasSubstr;
using Json = nlohmann::json;
using testing::TempDir;

GroupComparison Cell() {
  GroupComparison c;
  c.group = Group::kMisinformation;
  c.environment = Environment::kTrackingPermissive;
  c.aggregate = Aggregate::kMax;
  c.baseline_mean = 0.25;
  c.post_mean = 0.5;
  c.delta = 0.25;
  c.test_statistic = 120;
  c.z = 3.1;
  c.p_value = 0.002;
  c.n_baseline = 20;
  c.n_post = 100;
  c.ci_low = 0.1;
  c.ci_high = 0.4;
  c.per_day_delta = {{0, 0.2}, {1, 0.3}};
  return c;
}

ScoredVideo Scored(Phase phase, int day, double max_sim) {
  ScoredVideo s;
  s.puppet_id = "misinformation-permissive-001";
  s.group = Group::kMisinformation;
  s.environment = Environment::kTrackingPermissive;
  s.phase = phase;
  s.day_index = day;
  s.position = 1;
  s.result = {"vid", max_sim, max_sim / 2, "pf-00001", false};
  return s;
}

TEST(ComparisonsToJson, ArrayOfCellObjects) {
  const std::vector<GroupComparison> cells = {Cell()};
  const Json j = Json::parse(ComparisonsToJson(cells));
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 1u);
  const Json& c = j[0];
  EXPECT_EQ(c["group"], "misinformation");
  EXPECT_EQ(c["environment"], "tracking-permissive");
  EXPECT_EQ(c["aggregate"], "max");
  EXPECT_DOUBLE_EQ(c["delta"].get<double>(), 0.25);
  EXPECT_DOUBLE_EQ(c["test_statistic"].get<double>(), 120);
  EXPECT_DOUBLE_EQ(c["p_value"].get<double>(), 0.002);
  EXPECT_EQ(c["n_post"], 100);
  EXPECT_EQ(c["ci95"].size(), 2u);
  EXPECT_TRUE(c["per_puppet_delta"].is_null());
  EXPECT_DOUBLE_EQ(c["per_day_delta"]["1"].get<double>(), 0.3);
  EXPECT_EQ(Json::parse(ComparisonsToJson({})), Json::array());
}

TEST(ScoresToJsonl, OneObjectPerLine) {
  const std::vector<ScoredVideo> s = {Scored(Phase::kBaseline, 0, 0.2),
                                      Scored(Phase::kPost, 1, 0.6)};
  const std::string text = ScoresToJsonl(s);
  std::vector<Json> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    rows.push_back(Json::parse(text.substr(pos, nl - pos)));
    pos = nl + 1;
  }
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1]["phase"], "post");
  EXPECT_EQ(rows[1]["day_index"], 1);
  EXPECT_DOUBLE_EQ(rows[1]["max_sim"].get<double>(), 0.6);
  EXPECT_EQ(rows[0]["top_claim_id"], "pf-00001");
}

TEST(ReportToJson, CarriesBothTablesAndSummary) {
  RunAnalysis a;
  a.tables[Aggregate::kMax] = {Cell()};
  GroupComparison mean = Cell();
  mean.aggregate = Aggregate::kMean;
  a.tables[Aggregate::kMean] = {mean};
  a.summary.puppets = 4;
  a.summary.failed_puppets = 1;
  a.warnings = {"cell control/tracking-permissive omitted: no post snapshots"};
  const Json j = Json::parse(ReportToJson(a, Aggregate::kMean, "hash"));
  EXPECT_EQ(j["format"], "trackaudit.report");
  EXPECT_EQ(j["selected_aggregate"], "mean");
  EXPECT_EQ(j["embedder"], "hash");
  EXPECT_EQ(j["tables"]["max"].size(), 1u);
  EXPECT_EQ(j["tables"]["mean"][0]["aggregate"], "mean");
  EXPECT_EQ(j["run_summary"]["failed_puppets"], 1);
  EXPECT_EQ(j["warnings"].size(), 1u);
}

TEST(FormatComparisonTable, OneRowPerCell) {
  const std::vector<GroupComparison> cells = {Cell(), Cell()};
  const std::string t = FormatComparisonTable(cells, Aggregate::kMax);
  EXPECT_THAT(t, HasSubstr("aggregate=max"));
  EXPECT_THAT(t, HasSubstr("tracking-permissive"));
  EXPECT_THAT(t, HasSubstr("+0.2500"));
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 4);
}

TEST(CellPlots, CsvAndSvg) {
  const std::vector<ScoredVideo> s = {Scored(Phase::kBaseline, 0, 0.2),
                                      Scored(Phase::kPost, 0, 0.7)};
  const std::string csv = CellScoresCsv(s, Group::kMisinformation,
                                        Environment::kTrackingPermissive, Aggregate::kMax);
  EXPECT_THAT(csv, HasSubstr("phase,day_index,puppet_id,video_id,score\n"));
  EXPECT_THAT(csv, HasSubstr("post,0,misinformation-permissive-001,vid,0.69999999999999996"));
  EXPECT_EQ(CellScoresCsv(s, Group::kLeft, Environment::kTrackingPermissive, Aggregate::kMax),
            "phase,day_index,puppet_id,video_id,score\n");
  const std::string svg = CellHistogramSvg(s, Group::kMisinformation,
                                           Environment::kTrackingPermissive, Aggregate::kMax);
  EXPECT_THAT(svg, HasSubstr("<svg"));
  EXPECT_THAT(svg, HasSubstr("</svg>"));
}

TEST(WriteAnalysisOutputs, WritesEveryFile) {
  TempDir dir;
  RunAnalysis a;
  a.tables[Aggregate::kMax] = {Cell()};
  a.tables[Aggregate::kMean] = {};
  a.scores = {Scored(Phase::kBaseline, 0, 0.2), Scored(Phase::kPost, 0, 0.7)};
  ASSERT_OK(WriteAnalysisOutputs(a, Aggregate::kMax, "hash", dir / "out"));
  for (const char* f : {"comparisons.json", "scores.jsonl", "report.json",
                        "plots/misinformation__tracking-permissive.csv",
                        "plots/misinformation__tracking-permissive.svg"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / f)) << f;
  }
}

}  // namespace
}  // namespace trackaudit
