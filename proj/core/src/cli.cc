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

#include "trackaudit/cli.h"

#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmt/format.h"
#include "str_util.h"
#include "trackaudit/analysis.h"
#include "trackaudit/corpus.h"
#include "trackaudit/embedder.h"
#include "trackaudit/experiment.h"
#include "trackaudit/report.h"
#include "trackaudit/store.h"

namespace trackaudit {
namespace {

constexpr char kDefaultFrom[] = "2020-01-01";
constexpr char kDefaultTo[] = "2025-10-31";

// Status codes that mean the operator gave us something wrong.
bool IsUserError(const absl::Status& s) {
  if (IsStoreError(s)) return false;
  switch (s.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kAlreadyExists:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kPermissionDenied:
      return true;
    default:
      return false;
  }
}

int ExitFor(const absl::Status& s) {
  return IsUserError(s) ? kExitUserError : kExitRuntimeError;
}

struct ValidateArgs {
  std::string outlets, articles, claims, misinformation;
  int articles_per_outlet = 20;
  std::string from = kDefaultFrom, to = kDefaultTo;
};

int CmdValidate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  int errors = 0;
  auto fail = [&](const absl::Status& s) {
    err << "error: " << s.message() << "\n";
    ++errors;
  };
  auto window = MakeDateRange(a.from, a.to);
  if (!window.ok()) {
    fail(window.status());
    return kExitUserError;
  }
  auto outlets = LoadOutlets(a.outlets);
  if (outlets.ok()) {
    out << fmt::format("{}: {} outlets\n", a.outlets, outlets->size());
  } else {
    fail(outlets.status());
  }
  auto articles = LoadArticles(a.articles);
  if (articles.ok()) {
    out << fmt::format("{}: {} articles\n", a.articles, articles->size());
  } else {
    fail(articles.status());
  }
  if (outlets.ok() && articles.ok()) {
    for (Ideology ideology : {Ideology::kExtremeLeft, Ideology::kLeft,
                              Ideology::kRight, Ideology::kExtremeRight}) {
      std::vector<OutletRecord> mine;
      std::set<std::string> ids;
      for (const auto& o : *outlets) {
        if (o.bias_label == ideology) {
          mine.push_back(o);
          ids.insert(o.outlet_id);
        }
      }
      if (mine.empty()) continue;
      std::vector<ArticleRecord> arts;
      for (const auto& r : *articles) {
        if (r.outlet_id.has_value() && ids.contains(*r.outlet_id)) arts.push_back(r);
      }
      auto pool = BuildPool(mine, arts, a.articles_per_outlet);
      if (pool.ok()) {
        out << fmt::format("  pool {}: {} outlets x {} = {} articles\n",
                           ToString(ideology), mine.size(), a.articles_per_outlet,
                           pool->size());
      } else {
        fail(pool.status());
      }
    }
  }
  if (!a.misinformation.empty()) {
    auto pool = LoadMisinformationPool(a.misinformation, *window);
    if (pool.ok()) {
      out << fmt::format("{}: {} misinformation articles in [{}, {}]\n",
                         a.misinformation, pool->size(), a.from, a.to);
    } else {
      fail(pool.status());
    }
  }
  auto claims = LoadClaims(a.claims, *window);
  if (claims.ok()) {
    out << fmt::format("{}: {} claims in [{}, {}]\n", a.claims, claims->size(),
                       a.from, a.to);
  } else {
    fail(claims.status());
  }
  if (errors > 0) {
    err << fmt::format("{} error(s)\n", errors);
    return kExitUserError;
  }
  out << "ok\n";
  return kExitOk;
}

struct RunArgs {
  std::string config;
  bool resume = false;
  int workers = 0;
};

int CmdRun(const RunArgs& a, std::ostream& out, std::ostream& err) {
  auto config = LoadExperimentConfig(a.config);
  if (!config.ok()) {
    err << "error: " << config.status().message() << "\n";
    return kExitUserError;
  }
  if (a.workers > 0) config->workers = a.workers;
  auto result = ExecuteRun(*config, a.resume);
  if (!result.ok()) {
    err << "error: " << result.status().message() << "\n";
    return ExitFor(result.status());
  }
  const RunState& st = result->state;
  int steps = 0;
  for (const auto& c : st.completed) {
    (void)c;
    ++steps;
  }
  out << fmt::format("archive: {}\nstatus: {}\npuppets: {}\ncompleted steps: {}\n"
                     "failed puppets: {}\n",
                     result->archive.string(), ToString(st.status),
                     st.plan.Puppets().size(), steps, st.failed_puppets.size());
  for (const auto& id : st.failed_puppets) out << "  failed: " << id << "\n";
  if (st.status == RunStatus::kFailed) {
    err << "error: run failed: " << st.failure << "\n";
    return kExitRuntimeError;
  }
  return kExitOk;
}

struct AnalyzeArgs {
  std::string archive, claims, out_dir;
  std::string aggregate = "max";
  std::string embedder = "hash";
  int workers = 1;
  std::string from = kDefaultFrom, to = kDefaultTo;
};

int CmdAnalyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  auto error = [&](const absl::Status& s, int code) {
    err << "error: " << s.message() << "\n";
    return code;
  };
  auto aggregate = ParseAggregate(a.aggregate);
  if (!aggregate.ok()) return error(aggregate.status(), kExitUserError);
  auto window = MakeDateRange(a.from, a.to);
  if (!window.ok()) return error(window.status(), kExitUserError);
  auto archive = RunArchive::OpenReadOnly(a.archive);
  if (!archive.ok()) return error(archive.status(), ExitFor(archive.status()));
  auto claims = LoadClaims(a.claims, *window);
  if (!claims.ok()) return error(claims.status(), kExitUserError);
  if (claims->empty()) {
    return error(absl::FailedPreconditionError(
                     StrCat("no claims in ", a.claims, " within [", a.from, ", ",
                            a.to, "]")),
                 kExitUserError);
  }
  if ((*archive)->PuppetIds().empty()) {
    return error(absl::FailedPreconditionError(
                     StrCat("archive ", a.archive, " holds no records")),
                 kExitUserError);
  }
  std::unique_ptr<Embedder> embedder;
  if (a.embedder == "hash") {
    embedder = std::make_unique<HashEmbedder>();
  } else if (a.embedder == "model") {
    auto e = ProcessEmbedder::FromEnvironment();
    if (!e.ok()) return error(e.status(), kExitUserError);
    embedder = *std::move(e);
  } else {
    return error(absl::InvalidArgumentError(
                     StrCat("unknown embedder \"", a.embedder,
                            "\" (expected hash or model)")),
                 kExitUserError);
  }
  ScoreOptions options;
  options.workers = a.workers;
  auto analysis = ScoreRun(**archive, *claims, *embedder, options);
  if (!analysis.ok()) return error(analysis.status(), ExitFor(analysis.status()));
  if (analysis->summary.post_snapshots == 0) {
    return error(absl::FailedPreconditionError(StrCat(
                     "archive ", a.archive, " has ",
                     analysis->summary.baseline_snapshots,
                     " baseline snapshot(s) but no post-exposure snapshots; "
                     "nothing to compare until a measurement day completes")),
                 kExitUserError);
  }
  if (analysis->tables[*aggregate].empty()) {
    for (const auto& w : analysis->warnings) err << "warning: " << w << "\n";
    return error(absl::FailedPreconditionError(
                     "no cell has both baseline and post snapshots"),
                 kExitUserError);
  }
  std::filesystem::path out_dir = a.out_dir;
  if (out_dir.empty()) {
    std::filesystem::path arch = a.archive;
    if (!arch.has_filename()) arch = arch.parent_path();
    out_dir = arch.string() + "-analysis";
  }
  if (absl::Status s =
          WriteAnalysisOutputs(*analysis, *aggregate, embedder->name(), out_dir);
      !s.ok()) {
    return error(s, kExitRuntimeError);
  }
  for (const auto& w : analysis->warnings) err << "warning: " << w << "\n";
  const RunSummary& s = analysis->summary;
  out << fmt::format(
      "puppets {} (failed {}), snapshots {} baseline / {} post, videos {} / {}, "
      "visits {}\n\n",
      s.puppets, s.failed_puppets, s.baseline_snapshots, s.post_snapshots,
      s.baseline_videos, s.post_videos, s.visits);
  // Selected aggregate first, then the other one.
  out << FormatComparisonTable(analysis->tables[*aggregate], *aggregate) << "\n";
  const Aggregate other = *aggregate == Aggregate::kMax ? Aggregate::kMean
                                                        : Aggregate::kMax;
  out << FormatComparisonTable(analysis->tables[other], other) << "\n";
  out << "wrote " << (out_dir / "comparisons.json").string() << "\n";
  return kExitOk;
}

}  // namespace

int AuditMain(int argc, const char* const* argv, std::ostream& out,
              std::ostream& err) {
  CLI::App app{"Sock-puppet audit of tracking-driven recommendation shifts",
               "audit"};
  app.require_subcommand(1);

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check corpus files");
  validate->add_option("--outlets", va.outlets, "outlets.jsonl")->required();
  validate->add_option("--articles", va.articles, "articles.jsonl")->required();
  validate->add_option("--claims", va.claims, "claims.jsonl")->required();
  validate->add_option("--misinformation", va.misinformation,
                       "misinformation.jsonl");
  validate->add_option("--articles-per-outlet", va.articles_per_outlet)
      ->capture_default_str();
  validate->add_option("--from", va.from, "Date window start")->capture_default_str();
  validate->add_option("--to", va.to, "Date window end")->capture_default_str();

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Run or resume an experiment");
  run->add_option("--config", ra.config, "Experiment config JSON")->required();
  run->add_flag("--resume", ra.resume, "Continue an existing archive");
  run->add_option("--workers", ra.workers, "Override the config's worker count");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Score and compare a run");
  analyze->add_option("--archive", aa.archive, "Run archive directory")->required();
  analyze->add_option("--claims", aa.claims, "claims.jsonl")->required();
  analyze->add_option("--aggregate", aa.aggregate, "max or mean")
      ->check(CLI::IsMember({"max", "mean"}))
      ->capture_default_str();
  analyze->add_option("--embedder", aa.embedder, "hash or model")
      ->check(CLI::IsMember({"hash", "model"}))
      ->capture_default_str();
  analyze->add_option("--out", aa.out_dir,
                      "Output directory (default <archive>-analysis)");
  analyze->add_option("--workers", aa.workers)->capture_default_str();
  analyze->add_option("--from", aa.from, "Claims window start")->capture_default_str();
  analyze->add_option("--to", aa.to, "Claims window end")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUserError;
  }
  if (validate->parsed()) return CmdValidate(va, out, err);
  if (run->parsed()) return CmdRun(ra, out, err);
  return CmdAnalyze(aa, out, err);
}

}  // namespace trackaudit
