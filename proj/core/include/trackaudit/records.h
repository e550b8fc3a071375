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

#ifndef TRACKAUDIT_RECORDS_H_
#define TRACKAUDIT_RECORDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "trackaudit/labels.h"
#include "trackaudit/time.h"

namespace trackaudit {

// One article page visit during the exposure phase.
struct VisitLog {
  std::string puppet_id;
  int day_index = 0;
  std::string url;
  Timestamp started_at;
  double dwell_seconds = 0.0;
  ConsentOutcome consent_outcome = ConsentOutcome::kNoneFound;
  int scroll_events = 0;
  // Set when this visit replaced a pool article that failed to load.
  std::optional<std::string> substituted_for;
  // Third-party tracker requests that left the browser. Only the simulated
  // driver can observe this; the real adapter reports 0.
  int trackers_fired = 0;

  bool operator==(const VisitLog&) const = default;
};

struct VideoRecord {
  std::string video_id;
  std::string title;
  std::string channel;
  int position = 0;  // 1-based homepage rank
  std::optional<std::string> transcript;

  bool operator==(const VideoRecord&) const = default;
};

struct RecommendationSnapshot {
  std::string puppet_id;
  int day_index = 0;
  Phase phase = Phase::kBaseline;
  Timestamp captured_at;
  std::vector<VideoRecord> videos;  // ascending position

  bool operator==(const RecommendationSnapshot&) const = default;
};

// Written after a protocol step finishes (or fails) for one puppet/day.
struct PhaseMarker {
  std::string puppet_id;
  int day_index = 0;
  Step step = Step::kSetting;
  bool failed = false;
  std::string detail;

  bool operator==(const PhaseMarker&) const = default;
};

struct PuppetSpec {
  std::string puppet_id;
  Group group = Group::kControl;
  Environment environment = Environment::kTrackingPermissive;
  std::uint64_t seed = 0;
  // Names the persistent browser profile; drivers map it to storage.
  std::string profile_ref;

  bool operator==(const PuppetSpec&) const = default;
};

struct PlanCell {
  Group group = Group::kControl;
  Environment environment = Environment::kTrackingPermissive;
  std::vector<PuppetSpec> puppets;

  bool operator==(const PlanCell&) const = default;
};

struct ExperimentPlan {
  std::vector<PlanCell> cells;  // group-major, in configuration order
  Timestamp created_at;

  std::vector<PuppetSpec> Puppets() const;
  const PuppetSpec* FindPuppet(std::string_view puppet_id) const;

  bool operator==(const ExperimentPlan&) const = default;
};

absl::Status ValidateVisitLog(const VisitLog& log);
absl::Status ValidateSnapshot(const RecommendationSnapshot& snapshot);
absl::Status ValidatePlan(const ExperimentPlan& plan);

}  // namespace trackaudit

#endif  // TRACKAUDIT_RECORDS_H_
