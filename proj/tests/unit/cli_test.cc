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

#include <sstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"
#include "trackaudit/cli.h"
#include "trackaudit/experiment.h"
#include "trackaudit/mockworld.h"

namespace trackaudit {
namespace {

using ::testing::HasSubstr;
using testing::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Audit(std::vector<std::string> args) {
  args.insert(args.begin(), "audit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = AuditMain(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

constexpr char kConfig[] = R"({
  "n_puppets_per_cell": 2,
  "groups": ["misinformation", "control"],
  "environments": ["tracking-permissive"],
  "days": 2,
  "articles_per_day": 5,
  "homepage_top_k": 10,
  "master_seed": 3,
  "archive": "archive",
  "durability": "flush",
  "simulated": {"effect_size": 0.8, "catalog_size": 160, "homepage_size": 30,
                "outlets_per_ideology": 2, "misinformation_articles": 60,
                "n_claims": 40}
})";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    WorldConfig w;
    w.outlets_per_ideology = 3;
    w.misinformation_articles = 50;
    w.n_claims = 40;
    ASSERT_OK((*MockWorld::Create(w))->WriteCorpora(dir_ / "corpus"));
    testing::WriteFile(dir_ / "run.json", kConfig);
  }
  std::string P(std::string_view f) const { return (dir_ / f).string(); }

  TempDir dir_;
};

TEST_F(CliTest, NoSubcommandIsUserError) {
  EXPECT_EQ(Audit({}).code, kExitUserError);
  EXPECT_EQ(Audit({"frobnicate"}).code, kExitUserError);
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(Audit({"--help"}).code, kExitOk); }

TEST_F(CliTest, ValidateReportsCounts) {
  auto r = Audit({"validate", "--outlets", P("corpus/outlets.jsonl"), "--articles",
                  P("corpus/articles.jsonl"), "--claims", P("corpus/claims.jsonl"),
                  "--misinformation", P("corpus/misinformation.jsonl")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, HasSubstr("12 outlets"));
  EXPECT_THAT(r.out, HasSubstr("pool extreme-left: 3 outlets x 20 = 60 articles"));
  EXPECT_THAT(r.out, HasSubstr("ok\n"));
}

TEST_F(CliTest, ValidateFlagsBadInput) {
  auto r = Audit({"validate", "--outlets", P("missing.jsonl"), "--articles",
                  P("corpus/articles.jsonl"), "--claims", P("corpus/claims.jsonl")});
  EXPECT_EQ(r.code, kExitUserError);
  EXPECT_THAT(r.err, HasSubstr("missing.jsonl"));
  r = Audit({"validate", "--outlets", P("corpus/outlets.jsonl"), "--articles",
             P("corpus/articles.jsonl"), "--claims", P("corpus/claims.jsonl"),
             "--articles-per-outlet", "500"});
  EXPECT_EQ(r.code, kExitUserError);
  EXPECT_THAT(r.err, HasSubstr("insufficient articles"));
  EXPECT_EQ(Audit({"validate", "--outlets", P("corpus/outlets.jsonl")}).code,
            kExitUserError);
}

TEST_F(CliTest, RunThenAnalyze) {
  auto run = Audit({"run", "--config", P("run.json")});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  EXPECT_THAT(run.out, HasSubstr("status: done"));
  EXPECT_THAT(run.out, HasSubstr("completed steps: 20"));

  auto again = Audit({"run", "--config", P("run.json")});
  EXPECT_EQ(again.code, kExitUserError);
  EXPECT_THAT(again.err, HasSubstr("--resume"));
  EXPECT_EQ(Audit({"run", "--config", P("run.json"), "--resume"}).code, kExitOk);

  auto an = Audit({"analyze", "--archive", P("archive"), "--claims",
                   P("archive/corpus/claims.jsonl"), "--aggregate", "mean"});
  ASSERT_EQ(an.code, kExitOk) << an.err;
  EXPECT_THAT(an.out, HasSubstr("aggregate=mean"));
  EXPECT_THAT(an.out, HasSubstr("aggregate=max"));
  EXPECT_LT(an.out.find("aggregate=mean"), an.out.find("aggregate=max"));
  const auto cmp = nlohmann::json::parse(testing::ReadFile(dir_ / "archive-analysis" / "comparisons.json"));
  ASSERT_TRUE(cmp.is_array());
  ASSERT_EQ(cmp.size(), 2u);
  EXPECT_EQ(cmp[0]["aggregate"], "mean");
  EXPECT_TRUE(std::filesystem::exists(dir_ / "archive-analysis" / "report.json"));

  auto custom = Audit({"analyze", "--archive", P("archive"), "--claims",
                       P("archive/corpus/claims.jsonl"), "--out", P("elsewhere"),
                       "--workers", "3"});
  ASSERT_EQ(custom.code, kExitOk) << custom.err;
  EXPECT_EQ(testing::ReadFile(dir_ / "elsewhere" / "scores.jsonl"),
            testing::ReadFile(dir_ / "archive-analysis" / "scores.jsonl"));
}

TEST_F(CliTest, RunRejectsBadConfig) {
  testing::WriteFile(dir_ / "bad.json", R"({"days": 0})");
  auto r = Audit({"run", "--config", P("bad.json")});
  EXPECT_EQ(r.code, kExitUserError);
  EXPECT_THAT(r.err, HasSubstr("days"));
  EXPECT_EQ(Audit({"run", "--config", P("nope.json")}).code, kExitUserError);
}

TEST_F(CliTest, AnalyzeUserErrors) {
  const std::string claims = P("corpus/claims.jsonl");
  EXPECT_EQ(Audit({"analyze", "--archive", P("nope"), "--claims", claims}).code,
            kExitUserError);
  // Empty archive: created but never run.
  ASSERT_OK(RunArchive::Create(dir_ / "empty", "h", Timestamp{}));
  auto r = Audit({"analyze", "--archive", P("empty"), "--claims", claims});
  EXPECT_EQ(r.code, kExitUserError);
  EXPECT_THAT(r.err, HasSubstr("no records"));
  EXPECT_EQ(Audit({"analyze", "--archive", P("empty"), "--claims", claims,
                   "--aggregate", "median"})
                .code,
            kExitUserError);
  ::unsetenv("TRACKAUDIT_EMBEDDER_CMD");
  EXPECT_EQ(Audit({"analyze", "--archive", P("empty"), "--claims", claims,
                   "--embedder", "model"})
                .code,
            kExitUserError);
}

TEST_F(CliTest, AnalyzeBaselineOnlyArchive) {
  auto config = LoadExperimentConfig(dir_ / "run.json");
  ASSERT_OK(config);
  RunHooks hooks;
  hooks.halt_after = [](const PuppetSpec&, int, Step step) { return step == Step::kExposure; };
  // Halting on the first exposure leaves settings done but nothing measured.
  config->workers = 1;
  ASSERT_OK(ExecuteRun(*config, false, hooks));
  auto r = Audit({"analyze", "--archive", P("archive"), "--claims",
                  P("archive/corpus/claims.jsonl")});
  EXPECT_EQ(r.code, kExitUserError);
  EXPECT_THAT(r.err, HasSubstr("no post-exposure snapshots"));
}

TEST_F(CliTest, CorruptArchiveIsRuntimeError) {
  ASSERT_EQ(Audit({"run", "--config", P("run.json")}).code, kExitOk);
  const auto file = dir_ / "archive" / "records" / "misinformation-permissive-001.jsonl";
  std::string text = testing::ReadFile(file);
  text[0] = '#';
  testing::WriteFile(file, text);
  auto r = Audit({"analyze", "--archive", P("archive"), "--claims",
                  P("archive/corpus/claims.jsonl")});
  EXPECT_EQ(r.code, kExitRuntimeError);
  EXPECT_THAT(r.err, HasSubstr("corrupt record"));
}

}  // namespace
}  // namespace trackaudit
