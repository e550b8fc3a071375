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

#ifndef TRACKAUDIT_EXPERIMENT_H_
#define TRACKAUDIT_EXPERIMENT_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "trackaudit/corpus.h"
#include "trackaudit/labels.h"
#include "trackaudit/mockworld.h"
#include "trackaudit/records.h"
#include "trackaudit/session.h"
#include "trackaudit/store.h"
#include "trackaudit/time.h"

namespace trackaudit {

struct CorpusConfig {
  // All optional in simulated mode, where the world supplies its own.
  std::optional<std::filesystem::path> outlets;
  std::optional<std::filesystem::path> articles;
  std::optional<std::filesystem::path> misinformation;
  std::optional<std::filesystem::path> claims;
  DateRange misinformation_window;
  DateRange claims_window;
  int articles_per_outlet = 20;
};

struct RealDriverConfig {
  std::string endpoint;  // $TRACKAUDIT_WEBDRIVER_URL overrides
  std::filesystem::path page_scripts_dir = "page_scripts";
  std::string capabilities_json = "{}";
  double watch_seconds = 60.0;
  std::string platform_url = "https://www.youtube.com/";
  // Operator-supplied seed videos per topic.
  std::map<std::string, std::vector<std::string>> seed_videos;
};

struct ExperimentConfig {
  int n_puppets_per_cell = 1;
  // The parser fills in every group and environment when the keys are absent.
  std::vector<Group> groups;
  std::vector<Environment> environments;
  int days = 5;
  int articles_per_day = 20;
  int homepage_top_k = 30;
  std::uint64_t master_seed = 0;
  DriverKind driver = DriverKind::kSimulated;

  std::filesystem::path archive = "archive";
  int workers = 1;
  // false: every day revisits day 0's sample.
  bool resample_daily = true;
  // Also capture a pre-exposure snapshot on day 0, stored as a second
  // baseline.
  bool capture_pre_exposure = false;
  std::string seed_video_topic = std::string(kSportsTopic);
  std::int64_t inter_day_seconds = 86'400;
  Durability durability = Durability::kFsync;
  // Start of virtual time in simulated mode.
  Timestamp simulated_epoch;

  CorpusConfig corpus;
  WorldConfig simulated;
  RealDriverConfig real;
};

absl::Status ValidateExperimentConfig(const ExperimentConfig& config);
// Defaults are filled in for absent keys; unknown keys are rejected.
absl::StatusOr<ExperimentConfig> ParseExperimentConfig(std::string_view json,
                                                       std::string_view source);
absl::StatusOr<ExperimentConfig> LoadExperimentConfig(
    const std::filesystem::path& path);
// Canonical JSON form. ParseExperimentConfig(ToJson(c)) == c.
std::string ExperimentConfigToJson(const ExperimentConfig& config);
// Hash over the fields that determine what a run produces; the archive
// path, worker count and durability are left out.
std::string ExperimentConfigHash(const ExperimentConfig& config);

// Cells in group-major configuration order. Puppet ids are
// "<group>-<environment>-NNN" and seeds derive from master_seed and the id.
absl::StatusOr<ExperimentPlan> PlanExperiment(const ExperimentConfig& config,
                                              Timestamp created_at);

// Exposure pools for the configured groups, plus the claim corpus.
struct Corpora {
  std::map<PoolLabel, ArticlePool> pools;
  std::vector<ClaimRecord> claims;
};

// Loads every pool the configured groups need from the corpus files.
absl::StatusOr<Corpora> LoadCorpora(const ExperimentConfig& config);

struct CompletedStep {
  std::string puppet_id;
  int day_index = 0;
  Step step = Step::kSetting;
  auto operator<=>(const CompletedStep&) const = default;
};

enum class RunStatus { kPending, kRunning, kDone, kFailed };
std::string_view ToString(RunStatus status);

struct RunState {
  ExperimentPlan plan;
  std::set<CompletedStep> completed;
  std::set<std::string> failed_puppets;
  RunStatus status = RunStatus::kPending;
  std::string failure;  // why the run failed, if it did
};

// runstate.json, format "trackaudit.runstate" version 1.
std::string RunStateToJson(const RunState& state);
absl::StatusOr<RunState> RunStateFromJson(std::string_view json);

// Everything one phase needs. Sessions must produce per-puppet clocks that
// start at or after `epoch`.
struct PhaseContext {
  const ExperimentConfig& config;
  SessionFactory& sessions;
  RunArchive& archive;
  Timestamp epoch;
};

// Start of day `day_index` on the puppet's clock.
Timestamp DayStart(const PhaseContext& ctx, int day_index);

// Fresh profile, one seed-video watch, baseline capture persisted as
// (baseline, day 0).
absl::StatusOr<RecommendationSnapshot> RunSettingPhase(const PhaseContext& ctx,
                                                       const PuppetSpec& puppet);

// Visits the day's sample in order, persisting one VisitLog per page. A page
// that fails to load is retried once and then replaced by the next article
// of the same seeded permutation. Control puppets return an empty list.
// Visits already in the archive for this day are kept and not repeated.
absl::StatusOr<std::vector<VisitLog>> RunExposurePhase(const PhaseContext& ctx,
                                                       const PuppetSpec& puppet,
                                                       int day_index,
                                                       const ArticlePool* pool);

// Captures and persists the (post, day_index) snapshot.
absl::StatusOr<RecommendationSnapshot> RunMeasurementPhase(
    const PhaseContext& ctx, const PuppetSpec& puppet, int day_index);

// True for errors raised by the archive rather than by a browser.
bool IsStoreError(const absl::Status& status);

struct RunHooks {
  // Called after each completed step; returning true stops the run as if
  // the process had been killed at that point.
  std::function<bool(const PuppetSpec&, int day_index, Step)> halt_after;
};

// Setting for every puppet, then for each day exposure and measurement for
// every puppet, workers running puppets in parallel. Steps already marked
// completed in the archive or in runstate.json are skipped. A puppet whose
// step fails is marked failed and takes no further part. Store failures
// stop the run with status failed.
absl::StatusOr<RunState> RunExperiment(const ExperimentConfig& config,
                                       const Corpora& corpora,
                                       SessionFactory& sessions,
                                       RunArchive& archive, Timestamp epoch,
                                       const RunHooks& hooks = {});

// Completed steps and failed puppets recorded by markers in `archive`.
absl::StatusOr<RunState> RecoverRunState(const RunArchive& archive);

// End-to-end run as the CLI performs it: opens or creates the archive,
// builds the simulated world or connects to the real driver, loads the
// corpora and runs. Refuses an existing archive unless `resume`.
struct ExecuteResult {
  RunState state;
  std::filesystem::path archive;
};
absl::StatusOr<ExecuteResult> ExecuteRun(const ExperimentConfig& config,
                                         bool resume,
                                         const RunHooks& hooks = {});

}  // namespace trackaudit

#endif  // TRACKAUDIT_EXPERIMENT_H_
