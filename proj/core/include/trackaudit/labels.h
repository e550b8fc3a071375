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

#ifndef TRACKAUDIT_LABELS_H_
#define TRACKAUDIT_LABELS_H_

#include <array>
#include <optional>
#include <string_view>

#include "absl/status/statusor.h"

namespace trackaudit {

// MBFC-style outlet bias.
enum class Ideology { kExtremeLeft, kLeft, kRight, kExtremeRight };

enum class PoolLabel {
  kExtremeLeft,
  kLeft,
  kRight,
  kExtremeRight,
  kMisinformation
};

// Exposure group of a sock puppet. Every group except kControl maps onto
// exactly one article pool.
enum class Group {
  kExtremeLeft,
  kLeft,
  kRight,
  kExtremeRight,
  kMisinformation,
  kControl
};

enum class Environment { kTrackingPermissive, kTrackingRestrictive };

enum class Phase { kBaseline, kPost };

// Protocol step recorded in the completed-triple set.
enum class Step { kSetting, kExposure, kMeasurement };

enum class Verdict { kFalse, kMisleading, kOther };

enum class ConsentOutcome { kAccepted, kNoneFound, kFailed };

enum class DriverKind { kSimulated, kReal };

enum class Aggregate { kMax, kMean };

inline constexpr std::array<Group, 6> kAllGroups = {
    Group::kExtremeLeft, Group::kLeft,           Group::kRight,
    Group::kExtremeRight, Group::kMisinformation, Group::kControl};

inline constexpr std::array<Environment, 2> kAllEnvironments = {
    Environment::kTrackingPermissive, Environment::kTrackingRestrictive};

std::string_view ToString(Ideology v);
std::string_view ToString(PoolLabel v);
std::string_view ToString(Group v);
std::string_view ToString(Environment v);
std::string_view ToString(Phase v);
std::string_view ToString(Step v);
std::string_view ToString(Verdict v);
std::string_view ToString(ConsentOutcome v);
std::string_view ToString(DriverKind v);
std::string_view ToString(Aggregate v);

absl::StatusOr<Ideology> ParseIdeology(std::string_view s);
absl::StatusOr<PoolLabel> ParsePoolLabel(std::string_view s);
absl::StatusOr<Group> ParseGroup(std::string_view s);
absl::StatusOr<Environment> ParseEnvironment(std::string_view s);
absl::StatusOr<Phase> ParsePhase(std::string_view s);
absl::StatusOr<Step> ParseStep(std::string_view s);
absl::StatusOr<ConsentOutcome> ParseConsentOutcome(std::string_view s);
absl::StatusOr<DriverKind> ParseDriverKind(std::string_view s);
absl::StatusOr<Aggregate> ParseAggregate(std::string_view s);

// Fact-check ratings are open-ended; anything that is not a recognised
// false/misleading rating collapses to kOther, so this never fails.
Verdict ParseVerdict(std::string_view s);

PoolLabel ToPoolLabel(Ideology v);
// nullopt for the control group, which has no pool.
std::optional<PoolLabel> PoolForGroup(Group g);

}  // namespace trackaudit

#endif  // TRACKAUDIT_LABELS_H_
