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

#ifndef TRACKAUDIT_ANALYSIS_H_
#define TRACKAUDIT_ANALYSIS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "trackaudit/corpus.h"
#include "trackaudit/embedder.h"
#include "trackaudit/labels.h"
#include "trackaudit/matcher.h"
#include "trackaudit/store.h"

namespace trackaudit {

struct GroupComparison {
  Group group = Group::kControl;
  Environment environment = Environment::kTrackingPermissive;
  Aggregate aggregate = Aggregate::kMax;
  double baseline_mean = 0.0;
  double post_mean = 0.0;
  double delta = 0.0;           // post_mean - baseline_mean
  double test_statistic = 0.0;  // Mann-Whitney U of post vs baseline
  double z = 0.0;
  double p_value = 1.0;
  std::int64_t n_baseline = 0;
  std::int64_t n_post = 0;
  double ci_low = 0.0;  // bootstrap 95% interval on delta
  double ci_high = 0.0;
  // Mean over puppets with both phases of (post mean - baseline mean).
  std::optional<double> per_puppet_delta;
  // day_index -> mean of that day's post scores minus baseline_mean.
  std::map<int, double> per_day_delta;
};

struct CompareOptions {
  int bootstrap_resamples = 10'000;
  std::uint64_t bootstrap_seed = 0x5eed;
};

// Pooled comparison of two score samples. Fills everything except the
// per-puppet and per-day fields.
absl::StatusOr<GroupComparison> ComparePhases(
    std::span<const double> baseline, std::span<const double> post,
    Aggregate aggregate, Group group, Environment environment,
    const CompareOptions& options = {});

double AggregateOf(const SimilarityResult& r, Aggregate aggregate);

// One scored video of one snapshot.
struct ScoredVideo {
  std::string puppet_id;
  Group group = Group::kControl;
  Environment environment = Environment::kTrackingPermissive;
  Phase phase = Phase::kBaseline;
  int day_index = 0;
  int position = 0;
  SimilarityResult result;
};

struct RunSummary {
  std::int64_t puppets = 0;
  std::int64_t failed_puppets = 0;
  std::int64_t baseline_snapshots = 0;
  std::int64_t post_snapshots = 0;
  std::int64_t baseline_videos = 0;
  std::int64_t post_videos = 0;
  std::int64_t visits = 0;
};

struct RunAnalysis {
  std::vector<ScoredVideo> scores;  // (puppet, day, seq, position) order
  std::map<Aggregate, std::vector<GroupComparison>> tables;
  RunSummary summary;
  std::vector<std::string> warnings;
};

struct ScoreOptions {
  int workers = 1;
  CompareOptions compare;
};

// Scores every snapshot in `archive` against `claims` and compares phases
// per (group, environment) cell of the plan, for both aggregates. Cells
// lacking a baseline or a post snapshot are omitted with a warning. The
// result does not depend on `workers`.
absl::StatusOr<RunAnalysis> ScoreRun(const RunArchive& archive,
                                     std::span<const ClaimRecord> claims,
                                     Embedder& embedder,
                                     const ScoreOptions& options = {});

// Builds the comparison table for one aggregate from already scored videos,
// cells in `plan` order.
std::vector<GroupComparison> CompareCells(const ExperimentPlan& plan,
                                          std::span<const ScoredVideo> scores,
                                          Aggregate aggregate,
                                          const CompareOptions& options,
                                          std::vector<std::string>* warnings);

}  // namespace trackaudit

#endif  // TRACKAUDIT_ANALYSIS_H_
