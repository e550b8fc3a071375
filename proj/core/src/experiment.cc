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

#include "trackaudit/experiment.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "jsonl.h"
#include "str_util.h"
#include "trackaudit/rng.h"
#include "trackaudit/simulated_driver.h"
#include "trackaudit/status_macros.h"
#include "trackaudit/webdriver_driver.h"

namespace trackaudit {
namespace {

using internal::Json;
using internal::OrderedJson;

constexpr char kStorePayload[] = "trackaudit/store";

absl::Status TagStore(absl::Status s) {
  if (!s.ok()) s.SetPayload(kStorePayload, absl::Cord("1"));
  return s;
}

absl::Status Annotate(const absl::Status& s, std::string_view what) {
  absl::Status out(s.code(), StrCat(what, ": ", std::string(s.message())));
  if (IsStoreError(s)) out = TagStore(std::move(out));
  return out;
}

// What the archive already holds for one puppet.
struct PuppetHistory {
  std::set<std::pair<int, Step>> done;
  bool failed = false;
  int baselines = 0;
  std::set<int> post_days;
  std::map<int, std::vector<VisitLog>> visits;  // by day, in seq order
};

absl::StatusOr<PuppetHistory> History(const RunArchive& archive,
                                      std::string_view puppet_id) {
  auto records = archive.LoadRecords(puppet_id);
  if (!records.ok()) return TagStore(records.status());
  PuppetHistory h;
  for (auto& r : *records) {
    switch (r.kind) {
      case RecordKind::kMarker: {
        const auto& m = std::get<PhaseMarker>(r.record);
        if (m.failed) {
          h.failed = true;
        } else {
          h.done.insert({m.day_index, m.step});
        }
        break;
      }
      case RecordKind::kSnapshot: {
        const auto& s = std::get<RecommendationSnapshot>(r.record);
        if (s.phase == Phase::kBaseline) {
          ++h.baselines;
        } else {
          h.post_days.insert(s.day_index);
        }
        break;
      }
      case RecordKind::kVisit: {
        auto& v = std::get<VisitLog>(r.record);
        h.visits[v.day_index].push_back(std::move(v));
        break;
      }
    }
  }
  return h;
}

absl::Status AppendRecord(RunArchive& archive, const Record& r,
                          std::optional<Timestamp> ts = std::nullopt) {
  auto seq = archive.Append(r, ts);
  return seq.ok() ? absl::OkStatus() : TagStore(seq.status());
}

absl::Status MarkDone(RunArchive& archive, const PuppetSpec& puppet, int day,
                      Step step, Timestamp ts, std::string detail = "") {
  return AppendRecord(archive,
                      PhaseMarker{puppet.puppet_id, day, step, false,
                                  std::move(detail)},
                      ts);
}

absl::Status CheckDay(const PhaseContext& ctx, int day_index) {
  if (day_index < 0 || day_index >= ctx.config.days) {
    return absl::FailedPreconditionError(
        StrCat("day_index ", day_index, " is outside [0, ", ctx.config.days, ")"));
  }
  return absl::OkStatus();
}

bool IsLoadFailure(const absl::Status& s) {
  return absl::IsNotFound(s) || absl::IsDeadlineExceeded(s) ||
         absl::IsUnavailable(s);
}

// Closes the session, keeping the first error.
absl::Status Finish(Session& session, absl::Status status) {
  absl::Status closed = session.Close();
  if (status.ok() && !closed.ok()) return closed;
  return status;
}

std::string_view EnvironmentShort(Environment e) {
  return e == Environment::kTrackingPermissive ? "permissive" : "restrictive";
}

}  // namespace

bool IsStoreError(const absl::Status& status) {
  return status.GetPayload(kStorePayload).has_value();
}

std::string_view ToString(RunStatus status) {
  switch (status) {
    case RunStatus::kPending:
      return "pending";
    case RunStatus::kRunning:
      return "running";
    case RunStatus::kDone:
      return "done";
    case RunStatus::kFailed:
      return "failed";
  }
  return "?";
}

absl::StatusOr<ExperimentPlan> PlanExperiment(const ExperimentConfig& config,
                                              Timestamp created_at) {
  RETURN_IF_ERROR(ValidateExperimentConfig(config));
  ExperimentPlan plan;
  plan.created_at = created_at;
  for (Group g : config.groups) {
    for (Environment e : config.environments) {
      PlanCell cell{g, e, {}};
      for (int i = 1; i <= config.n_puppets_per_cell; ++i) {
        PuppetSpec p;
        p.puppet_id = fmt::format("{}-{}-{:03}", ToString(g), EnvironmentShort(e), i);
        p.group = g;
        p.environment = e;
        p.seed = CounterRng::DeriveKey(config.master_seed,
                                       StrCat("puppet/", p.puppet_id));
        p.profile_ref = p.puppet_id;
        cell.puppets.push_back(std::move(p));
      }
      plan.cells.push_back(std::move(cell));
    }
  }
  RETURN_IF_ERROR(ValidatePlan(plan));
  return plan;
}

absl::StatusOr<Corpora> LoadCorpora(const ExperimentConfig& config) {
  Corpora c;
  const CorpusConfig& cc = config.corpus;
  std::optional<std::vector<ArticleRecord>> articles;
  for (Group g : config.groups) {
    const std::optional<PoolLabel> label = PoolForGroup(g);
    if (!label.has_value() || c.pools.contains(*label)) continue;
    if (*label == PoolLabel::kMisinformation) {
      if (!cc.misinformation.has_value()) {
        return absl::InvalidArgumentError(
            "group misinformation needs corpus.misinformation");
      }
      ASSIGN_OR_RETURN(c.pools[*label],
                       LoadMisinformationPool(*cc.misinformation,
                                              cc.misinformation_window));
      continue;
    }
    if (!cc.outlets.has_value() || !cc.articles.has_value()) {
      return absl::InvalidArgumentError(StrCat(
          "group ", ToString(g), " needs corpus.outlets and corpus.articles"));
    }
    ASSIGN_OR_RETURN(const Ideology ideology, ParseIdeology(ToString(*label)));
    ASSIGN_OR_RETURN(const std::vector<OutletRecord> outlets,
                     LoadOutlets(*cc.outlets, ideology));
    if (outlets.empty()) {
      return absl::FailedPreconditionError(StrCat(
          "no outlets labeled ", ToString(ideology), " in ", cc.outlets->string()));
    }
    if (!articles.has_value()) {
      ASSIGN_OR_RETURN(articles, LoadArticles(*cc.articles));
    }
    std::unordered_set<std::string> ids;
    for (const auto& o : outlets) ids.insert(o.outlet_id);
    std::vector<ArticleRecord> mine;
    for (const auto& a : *articles) {
      if (a.outlet_id.has_value() && ids.contains(*a.outlet_id)) mine.push_back(a);
    }
    ASSIGN_OR_RETURN(c.pools[*label],
                     BuildPool(outlets, mine, cc.articles_per_outlet));
  }
  if (cc.claims.has_value()) {
    ASSIGN_OR_RETURN(c.claims, LoadClaims(*cc.claims, cc.claims_window));
  }
  return c;
}

Timestamp DayStart(const PhaseContext& ctx, int day_index) {
  return ctx.epoch + std::chrono::seconds(ctx.config.inter_day_seconds) * day_index;
}

absl::StatusOr<RecommendationSnapshot> RunSettingPhase(const PhaseContext& ctx,
                                                       const PuppetSpec& puppet) {
  const std::string what = StrCat("setting failed for ", puppet.puppet_id);
  ASSIGN_OR_RETURN(const PuppetHistory h, History(ctx.archive, puppet.puppet_id));
  if (!h.done.empty() || h.baselines > 0) {
    return absl::FailedPreconditionError(
        StrCat(what, ": puppet already has recorded phases"));
  }
  auto opened = ctx.sessions.Open(puppet, /*fresh=*/true);
  if (!opened.ok()) return Annotate(opened.status(), what);
  Session& session = **opened;
  session.clock().SleepUntil(DayStart(ctx, 0));

  auto run = [&]() -> absl::StatusOr<RecommendationSnapshot> {
    ASSIGN_OR_RETURN(const std::string video,
                     session.WatchVideo(ctx.config.seed_video_topic));
    (void)video;
    ASSIGN_OR_RETURN(RecommendationSnapshot snap,
                     session.CaptureHomepage(ctx.config.homepage_top_k));
    snap.phase = Phase::kBaseline;
    snap.day_index = 0;
    RETURN_IF_ERROR(AppendRecord(ctx.archive, snap));
    RETURN_IF_ERROR(MarkDone(ctx.archive, puppet, 0, Step::kSetting,
                             session.clock().Now()));
    return snap;
  };
  auto snap = run();
  absl::Status s = Finish(session, snap.status());
  if (!s.ok()) return Annotate(s, what);
  return snap;
}

absl::StatusOr<std::vector<VisitLog>> RunExposurePhase(const PhaseContext& ctx,
                                                       const PuppetSpec& puppet,
                                                       int day_index,
                                                       const ArticlePool* pool) {
  const std::string what = StrCat("exposure failed for ", puppet.puppet_id,
                                  " day ", day_index);
  RETURN_IF_ERROR(CheckDay(ctx, day_index));
  ASSIGN_OR_RETURN(PuppetHistory h, History(ctx.archive, puppet.puppet_id));
  if (!h.done.contains({0, Step::kSetting})) {
    return absl::FailedPreconditionError(
        StrCat(what, ": setting phase not completed"));
  }
  if (day_index > 0 && !h.done.contains({day_index - 1, Step::kMeasurement})) {
    return absl::FailedPreconditionError(
        StrCat(what, ": day ", day_index - 1, " not measured"));
  }
  if (h.done.contains({day_index, Step::kExposure})) {
    return absl::FailedPreconditionError(StrCat(what, ": already completed"));
  }
  const bool control = !PoolForGroup(puppet.group).has_value();
  if (!control && pool == nullptr) {
    return absl::InvalidArgumentError(StrCat(what, ": no article pool"));
  }

  auto opened = ctx.sessions.Open(puppet, /*fresh=*/false);
  if (!opened.ok()) return Annotate(opened.status(), what);
  Session& session = **opened;
  session.clock().SleepUntil(DayStart(ctx, day_index));

  std::vector<VisitLog> logs = std::move(h.visits[day_index]);
  auto run = [&]() -> absl::Status {
    if (ctx.config.capture_pre_exposure && day_index == 0 && h.baselines < 2) {
      ASSIGN_OR_RETURN(RecommendationSnapshot pre,
                       session.CaptureHomepage(ctx.config.homepage_top_k));
      RETURN_IF_ERROR(AppendRecord(ctx.archive, pre));
    }
    if (control) {
      return MarkDone(ctx.archive, puppet, day_index, Step::kExposure,
                      session.clock().Now(), "control: no exposure");
    }
    const int key_day = ctx.config.resample_daily ? day_index : 0;
    const int n = ctx.config.articles_per_day;
    ASSIGN_OR_RETURN(const ExposureSequence seq,
                     SampleExposure(*pool, n, puppet.seed, puppet.puppet_id,
                                    key_day));
    std::optional<std::vector<ArticleRecord>> replacements;
    std::size_t next_replacement = 0;
    std::set<std::string> used;
    for (const auto& v : logs) used.insert(v.url);

    for (std::size_t i = logs.size(); i < seq.articles.size(); ++i) {
      const std::string& original = seq.articles[i].url;
      const std::uint64_t behavior = CounterRng::DeriveKey(
          puppet.seed, StrCat("behavior/", day_index), i);
      std::string url = original;
      absl::StatusOr<VisitLog> log = absl::UnknownError("not visited");
      while (true) {
        log = session.VisitArticle(url, behavior, day_index);
        if (!log.ok() && IsLoadFailure(log.status())) {
          log = session.VisitArticle(url, behavior, day_index);  // one retry
        }
        if (log.ok() || !IsLoadFailure(log.status())) break;
        if (!replacements.has_value()) {
          replacements = ExposureReplacements(
              *pool, n, static_cast<int>(pool->size()) - n, puppet.seed,
              puppet.puppet_id, key_day);
        }
        while (next_replacement < replacements->size() &&
               used.contains((*replacements)[next_replacement].url)) {
          ++next_replacement;
        }
        if (next_replacement >= replacements->size()) {
          return absl::ResourceExhaustedError(
              StrCat("no replacement left for ", original, ": ",
                     std::string(log.status().message())));
        }
        url = (*replacements)[next_replacement++].url;
      }
      if (!log.ok()) return log.status();  // the session itself broke
      if (url != original) log->substituted_for = original;
      used.insert(url);
      RETURN_IF_ERROR(AppendRecord(ctx.archive, *log));
      logs.push_back(*std::move(log));
    }
    return MarkDone(ctx.archive, puppet, day_index, Step::kExposure,
                    session.clock().Now());
  };
  absl::Status s = Finish(session, run());
  if (!s.ok()) return Annotate(s, what);
  return logs;
}

absl::StatusOr<RecommendationSnapshot> RunMeasurementPhase(
    const PhaseContext& ctx, const PuppetSpec& puppet, int day_index) {
  const std::string what = StrCat("measurement failed for ", puppet.puppet_id,
                                  " day ", day_index);
  RETURN_IF_ERROR(CheckDay(ctx, day_index));
  ASSIGN_OR_RETURN(const PuppetHistory h, History(ctx.archive, puppet.puppet_id));
  if (!h.done.contains({day_index, Step::kExposure})) {
    return absl::FailedPreconditionError(
        StrCat(what, ": exposure for day ", day_index, " not completed"));
  }
  if (h.done.contains({day_index, Step::kMeasurement}) ||
      h.post_days.contains(day_index)) {
    return absl::FailedPreconditionError(StrCat(what, ": already captured"));
  }
  auto opened = ctx.sessions.Open(puppet, /*fresh=*/false);
  if (!opened.ok()) return Annotate(opened.status(), what);
  Session& session = **opened;
  auto run = [&]() -> absl::StatusOr<RecommendationSnapshot> {
    ASSIGN_OR_RETURN(RecommendationSnapshot snap,
                     session.CaptureHomepage(ctx.config.homepage_top_k));
    snap.phase = Phase::kPost;
    snap.day_index = day_index;
    RETURN_IF_ERROR(AppendRecord(ctx.archive, snap));
    RETURN_IF_ERROR(MarkDone(ctx.archive, puppet, day_index, Step::kMeasurement,
                             session.clock().Now()));
    return snap;
  };
  auto snap = run();
  absl::Status s = Finish(session, snap.status());
  if (!s.ok()) return Annotate(s, what);
  return snap;
}

std::string RunStateToJson(const RunState& state) {
  OrderedJson j;
  j["format"] = "trackaudit.runstate";
  j["version"] = 1;
  j["status"] = std::string(ToString(state.status));
  if (!state.failure.empty()) j["failure"] = state.failure;
  j["completed"] = OrderedJson::array();
  for (const auto& c : state.completed) {
    j["completed"].push_back(
        OrderedJson::array({c.puppet_id, c.day_index, std::string(ToString(c.step))}));
  }
  j["failed_puppets"] = state.failed_puppets;
  return j.dump(1) + "\n";
}

absl::StatusOr<RunState> RunStateFromJson(std::string_view text) {
  Json j = Json::parse(text, nullptr, false);
  auto bad = [](std::string_view what) {
    return absl::DataLossError(StrCat("corrupt runstate.json: ", what));
  };
  if (j.is_discarded() || !j.is_object()) return bad("not a JSON object");
  if (j.value("format", "") != "trackaudit.runstate") return bad("wrong format");
  if (j.value("version", 0) != 1) return bad("unsupported version");
  RunState s;
  const std::string status = j.value("status", "");
  if (status == "pending") {
    s.status = RunStatus::kPending;
  } else if (status == "running") {
    s.status = RunStatus::kRunning;
  } else if (status == "done") {
    s.status = RunStatus::kDone;
  } else if (status == "failed") {
    s.status = RunStatus::kFailed;
  } else {
    return bad("unknown status");
  }
  s.failure = j.value("failure", "");
  if (!j.contains("completed") || !j["completed"].is_array()) {
    return bad("missing completed");
  }
  for (const auto& t : j["completed"]) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_string() ||
        !t[1].is_number_integer() || !t[2].is_string()) {
      return bad("completed entries must be [puppet_id, day, step]");
    }
    auto step = ParseStep(t[2].get<std::string>());
    if (!step.ok()) return bad(std::string(step.status().message()));
    s.completed.insert({t[0].get<std::string>(), t[1].get<int>(), *step});
  }
  if (j.contains("failed_puppets")) {
    for (const auto& p : j["failed_puppets"]) {
      if (!p.is_string()) return bad("failed_puppets must be strings");
      s.failed_puppets.insert(p.get<std::string>());
    }
  }
  return s;
}

absl::StatusOr<RunState> RecoverRunState(const RunArchive& archive) {
  RunState state;
  ASSIGN_OR_RETURN(state.plan, archive.ReadPlan());
  ASSIGN_OR_RETURN(const std::optional<std::string> text,
                   archive.ReadFile("runstate.json"));
  if (text.has_value()) {
    ASSIGN_OR_RETURN(RunState saved, RunStateFromJson(*text));
    state.failed_puppets = std::move(saved.failed_puppets);
    state.status = saved.status;
    state.failure = saved.failure;
  }
  // Markers are written before the checkpoint, so they normally cover it.
  // A step the checkpoint lists without a marker lost its marker to a torn
  // tail; it is redone rather than trusted.
  for (const auto& p : state.plan.Puppets()) {
    ASSIGN_OR_RETURN(const PuppetHistory h, History(archive, p.puppet_id));
    for (const auto& [day, step] : h.done) {
      state.completed.insert({p.puppet_id, day, step});
    }
    if (h.failed) state.failed_puppets.insert(p.puppet_id);
  }
  return state;
}

absl::StatusOr<RunState> RunExperiment(const ExperimentConfig& config,
                                       const Corpora& corpora,
                                       SessionFactory& sessions,
                                       RunArchive& archive, Timestamp epoch,
                                       const RunHooks& hooks) {
  RETURN_IF_ERROR(ValidateExperimentConfig(config));
  ASSIGN_OR_RETURN(RunState state, RecoverRunState(archive));
  for (Group g : config.groups) {
    const auto label = PoolForGroup(g);
    if (label.has_value() && !corpora.pools.contains(*label)) {
      return absl::FailedPreconditionError(
          StrCat("no article pool loaded for group ", ToString(g)));
    }
  }
  const PhaseContext ctx{config, sessions, archive, epoch};
  const std::vector<PuppetSpec> puppets = state.plan.Puppets();

  std::mutex mu;  // guards state and the checkpoint file
  std::atomic<bool> halted{false};
  std::atomic<bool> fatal{false};

  auto checkpoint = [&]() -> absl::Status {
    return TagStore(archive.WriteFileAtomic("runstate.json", RunStateToJson(state)));
  };
  auto fail_run = [&](const absl::Status& s) {
    std::lock_guard<std::mutex> lock(mu);
    if (!fatal.exchange(true)) state.failure = std::string(s.message());
  };
  {
    std::lock_guard<std::mutex> lock(mu);
    state.status = RunStatus::kRunning;
    state.failure.clear();
    if (absl::Status s = checkpoint(); !s.ok()) return s;
  }

  auto is_done = [&](const PuppetSpec& p, int day, Step step) {
    std::lock_guard<std::mutex> lock(mu);
    return state.completed.contains({p.puppet_id, day, step});
  };
  auto is_failed = [&](const PuppetSpec& p) {
    std::lock_guard<std::mutex> lock(mu);
    return state.failed_puppets.contains(p.puppet_id);
  };
  // Records the outcome of one step. Returns false when the puppet or the
  // run should stop.
  auto record = [&](const PuppetSpec& p, int day, Step step,
                    const absl::Status& outcome) -> bool {
    if (!outcome.ok()) {
      if (IsStoreError(outcome)) {
        fail_run(outcome);
        return false;
      }
      PhaseMarker m{p.puppet_id, day, step, true, std::string(outcome.message())};
      absl::Status s = AppendRecord(archive, m, epoch);
      std::lock_guard<std::mutex> lock(mu);
      state.failed_puppets.insert(p.puppet_id);
      if (s.ok()) s = checkpoint();
      if (!s.ok() && !fatal.exchange(true)) state.failure = std::string(s.message());
      return false;
    }
    {
      std::lock_guard<std::mutex> lock(mu);
      state.completed.insert({p.puppet_id, day, step});
      if (absl::Status s = checkpoint(); !s.ok()) {
        if (!fatal.exchange(true)) state.failure = std::string(s.message());
        return false;
      }
    }
    if (hooks.halt_after && hooks.halt_after(p, day, step)) {
      halted = true;
      return false;
    }
    return true;
  };

  // One unit of work per puppet per stage; stage -1 is setting.
  auto run_unit = [&](const PuppetSpec& p, int stage) {
    if (is_failed(p)) return;
    if (stage < 0) {
      if (is_done(p, 0, Step::kSetting)) return;
      auto h = History(archive, p.puppet_id);
      if (!h.ok()) return (void)record(p, 0, Step::kSetting, h.status());
      absl::Status outcome;
      if (h->baselines > 0) {
        // Baseline landed before a crash but its marker did not.
        outcome = MarkDone(archive, p, 0, Step::kSetting, epoch);
      } else {
        outcome = RunSettingPhase(ctx, p).status();
      }
      record(p, 0, Step::kSetting, outcome);
      return;
    }
    const int day = stage;
    if (!is_done(p, day, Step::kExposure)) {
      const auto label = PoolForGroup(p.group);
      const ArticlePool* pool =
          label.has_value() ? &corpora.pools.at(*label) : nullptr;
      if (!record(p, day, Step::kExposure,
                  RunExposurePhase(ctx, p, day, pool).status())) {
        return;
      }
      if (halted || fatal) return;
    }
    if (!is_done(p, day, Step::kMeasurement)) {
      auto h = History(archive, p.puppet_id);
      if (!h.ok()) return (void)record(p, day, Step::kMeasurement, h.status());
      absl::Status outcome;
      if (h->post_days.contains(day)) {
        outcome = MarkDone(archive, p, day, Step::kMeasurement, epoch);
      } else {
        outcome = RunMeasurementPhase(ctx, p, day).status();
      }
      record(p, day, Step::kMeasurement, outcome);
    }
  };

  const int workers = std::max(1, config.workers);
  for (int stage = -1; stage < config.days && !halted && !fatal; ++stage) {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      while (!halted && !fatal) {
        const std::size_t i = next.fetch_add(1);
        if (i >= puppets.size()) return;
        run_unit(puppets[i], stage);
      }
    };
    if (workers == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
  }

  std::lock_guard<std::mutex> lock(mu);
  if (fatal) {
    state.status = RunStatus::kFailed;
    (void)checkpoint();
    return state;
  }
  if (halted) return state;  // stays "running"; resume continues it
  state.status = RunStatus::kDone;
  RETURN_IF_ERROR(checkpoint());
  return state;
}

absl::StatusOr<ExecuteResult> ExecuteRun(const ExperimentConfig& config_in,
                                         bool resume, const RunHooks& hooks) {
  ExperimentConfig config = config_in;
  RETURN_IF_ERROR(ValidateExperimentConfig(config));
  const std::filesystem::path root = config.archive;
  const bool exists = RunArchive::Exists(root);
  if (exists && !resume) {
    return absl::FailedPreconditionError(
        StrCat("archive ", root.string(),
               " already exists; pass --resume to continue it"));
  }
  const bool simulated = config.driver == DriverKind::kSimulated;
  const bool world_corpora = simulated && !config.corpus.outlets.has_value() &&
                             !config.corpus.articles.has_value() &&
                             !config.corpus.misinformation.has_value();
  std::optional<Corpora> corpora;
  if (!world_corpora) {
    ASSIGN_OR_RETURN(corpora, LoadCorpora(config));
  }

  std::unique_ptr<MockWorld> world;
  if (simulated) {
    ASSIGN_OR_RETURN(world, MockWorld::Create(config.simulated));
  }

  const std::string hash = ExperimentConfigHash(config);
  std::unique_ptr<RunArchive> archive;
  if (exists) {
    ASSIGN_OR_RETURN(archive, RunArchive::Open(root, config.durability));
    if (archive->manifest().config_hash != hash) {
      return absl::FailedPreconditionError(
          StrCat("archive ", root.string(),
                 " was created by a different configuration (config hash ",
                 archive->manifest().config_hash, ", this config ", hash, ")"));
    }
  } else {
    const Timestamp created = simulated ? config.simulated_epoch : SystemClock().Now();
    ASSIGN_OR_RETURN(archive,
                     RunArchive::Create(root, hash, created, config.durability));
    RETURN_IF_ERROR(TagStore(
        archive->WriteFileAtomic("config.json", ExperimentConfigToJson(config))));
  }

  if (world_corpora) {
    const auto dir = root / "corpus";
    if (!std::filesystem::exists(dir / "claims.jsonl")) {
      RETURN_IF_ERROR(world->WriteCorpora(dir));
    }
    config.corpus.outlets = dir / "outlets.jsonl";
    config.corpus.articles = dir / "articles.jsonl";
    config.corpus.misinformation = dir / "misinformation.jsonl";
    config.corpus.claims = dir / "claims.jsonl";
    config.corpus.articles_per_outlet = config.simulated.articles_per_outlet;
    ASSIGN_OR_RETURN(corpora, LoadCorpora(config));
  }

  const Timestamp epoch =
      simulated ? config.simulated_epoch : archive->manifest().created_at;
  ASSIGN_OR_RETURN(const ExperimentPlan expected, PlanExperiment(config, epoch));
  auto saved = archive->ReadPlan();
  if (saved.ok()) {
    ExperimentPlan a = *saved, b = expected;
    a.created_at = b.created_at = Timestamp{};
    if (!(a == b)) {
      return absl::FailedPreconditionError(
          StrCat("plan.json in ", root.string(), " does not match the config"));
    }
  } else if (absl::IsNotFound(saved.status())) {
    RETURN_IF_ERROR(TagStore(archive->WritePlan(expected)));
  } else {
    return saved.status();
  }

  std::unique_ptr<SessionFactory> factory;
  if (simulated) {
    RETURN_IF_ERROR(world->SetStateDirectory(root / "world"));
    factory = std::make_unique<SimulatedSessionFactory>(*world, root / "profiles",
                                                        epoch);
  } else {
    RealDriverConfig real = config.real;
    if (const char* env = std::getenv("TRACKAUDIT_WEBDRIVER_URL");
        env != nullptr && *env != '\0') {
      real.endpoint = env;
    }
    ASSIGN_OR_RETURN(factory, MakeWebDriverSessionFactory(real, root / "profiles"));
  }

  ASSIGN_OR_RETURN(RunState state, RunExperiment(config, *corpora, *factory,
                                                 *archive, epoch, hooks));
  return ExecuteResult{std::move(state), root};
}

}  // namespace trackaudit
