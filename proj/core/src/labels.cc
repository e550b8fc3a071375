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

#include "trackaudit/labels.h"

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "fmt/format.h"

#include "str_util.h"

namespace trackaudit {
namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<Ideology, 4> kIdeologyNames = {{
    {Ideology::kExtremeLeft, "extreme-left"},
    {Ideology::kLeft, "left"},
    {Ideology::kRight, "right"},
    {Ideology::kExtremeRight, "extreme-right"},
}};

constexpr NameTable<PoolLabel, 5> kPoolNames = {{
    {PoolLabel::kExtremeLeft, "extreme-left"},
    {PoolLabel::kLeft, "left"},
    {PoolLabel::kRight, "right"},
    {PoolLabel::kExtremeRight, "extreme-right"},
    {PoolLabel::kMisinformation, "misinformation"},
}};

constexpr NameTable<Group, 6> kGroupNames = {{
    {Group::kExtremeLeft, "extreme-left"},
    {Group::kLeft, "left"},
    {Group::kRight, "right"},
    {Group::kExtremeRight, "extreme-right"},
    {Group::kMisinformation, "misinformation"},
    {Group::kControl, "control"},
}};

constexpr NameTable<Environment, 2> kEnvironmentNames = {{
    {Environment::kTrackingPermissive, "tracking-permissive"},
    {Environment::kTrackingRestrictive, "tracking-restrictive"},
}};

constexpr NameTable<Phase, 2> kPhaseNames = {{
    {Phase::kBaseline, "baseline"},
    {Phase::kPost, "post"},
}};

constexpr NameTable<Step, 3> kStepNames = {{
    {Step::kSetting, "setting"},
    {Step::kExposure, "exposure"},
    {Step::kMeasurement, "measurement"},
}};

constexpr NameTable<Verdict, 3> kVerdictNames = {{
    {Verdict::kFalse, "false"},
    {Verdict::kMisleading, "misleading"},
    {Verdict::kOther, "other"},
}};

constexpr NameTable<ConsentOutcome, 3> kConsentNames = {{
    {ConsentOutcome::kAccepted, "accepted"},
    {ConsentOutcome::kNoneFound, "none_found"},
    {ConsentOutcome::kFailed, "failed"},
}};

constexpr NameTable<DriverKind, 2> kDriverNames = {{
    {DriverKind::kSimulated, "simulated"},
    {DriverKind::kReal, "real"},
}};

constexpr NameTable<Aggregate, 2> kAggregateNames = {{
    {Aggregate::kMax, "max"},
    {Aggregate::kMean, "mean"},
}};

template <typename E, std::size_t N>
std::string_view Lookup(const NameTable<E, N>& table, E v) {
  for (const auto& [value, name] : table) {
    if (value == v) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
absl::StatusOr<E> Parse(const NameTable<E, N>& table, std::string_view kind,
                        std::string_view s) {
  for (const auto& [value, name] : table) {
    if (name == s) return value;
  }
  std::vector<std::string_view> names;
  for (const auto& entry : table) names.push_back(entry.second);
  return absl::InvalidArgumentError(StrCat("unknown ", kind, " \"", s,
                                                 "\" (expected one of ",
                                                 fmt::format("{}", fmt::join(names, ", ")),
                                                 ")"));
}

}  // namespace

std::string_view ToString(Ideology v) { return Lookup(kIdeologyNames, v); }
std::string_view ToString(PoolLabel v) { return Lookup(kPoolNames, v); }
std::string_view ToString(Group v) { return Lookup(kGroupNames, v); }
std::string_view ToString(Environment v) {
  return Lookup(kEnvironmentNames, v);
}
std::string_view ToString(Phase v) { return Lookup(kPhaseNames, v); }
std::string_view ToString(Step v) { return Lookup(kStepNames, v); }
std::string_view ToString(Verdict v) { return Lookup(kVerdictNames, v); }
std::string_view ToString(ConsentOutcome v) { return Lookup(kConsentNames, v); }
std::string_view ToString(DriverKind v) { return Lookup(kDriverNames, v); }
std::string_view ToString(Aggregate v) { return Lookup(kAggregateNames, v); }

absl::StatusOr<Ideology> ParseIdeology(std::string_view s) {
  return Parse(kIdeologyNames, "bias label", s);
}
absl::StatusOr<PoolLabel> ParsePoolLabel(std::string_view s) {
  return Parse(kPoolNames, "pool label", s);
}
absl::StatusOr<Group> ParseGroup(std::string_view s) {
  return Parse(kGroupNames, "group", s);
}
absl::StatusOr<Environment> ParseEnvironment(std::string_view s) {
  return Parse(kEnvironmentNames, "environment", s);
}
absl::StatusOr<Phase> ParsePhase(std::string_view s) {
  return Parse(kPhaseNames, "phase", s);
}
absl::StatusOr<Step> ParseStep(std::string_view s) {
  return Parse(kStepNames, "step", s);
}
absl::StatusOr<ConsentOutcome> ParseConsentOutcome(std::string_view s) {
  return Parse(kConsentNames, "consent outcome", s);
}
absl::StatusOr<DriverKind> ParseDriverKind(std::string_view s) {
  return Parse(kDriverNames, "driver", s);
}
absl::StatusOr<Aggregate> ParseAggregate(std::string_view s) {
  return Parse(kAggregateNames, "aggregate", s);
}

Verdict ParseVerdict(std::string_view s) {
  std::string v(s);
  for (char& c : v) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (v == "false" || v == "pants-on-fire" || v == "pants on fire") {
    return Verdict::kFalse;
  }
  if (v == "misleading") return Verdict::kMisleading;
  return Verdict::kOther;
}

PoolLabel ToPoolLabel(Ideology v) {
  switch (v) {
    case Ideology::kExtremeLeft:
      return PoolLabel::kExtremeLeft;
    case Ideology::kLeft:
      return PoolLabel::kLeft;
    case Ideology::kRight:
      return PoolLabel::kRight;
    case Ideology::kExtremeRight:
      return PoolLabel::kExtremeRight;
  }
  return PoolLabel::kMisinformation;
}

std::optional<PoolLabel> PoolForGroup(Group g) {
  switch (g) {
    case Group::kExtremeLeft:
      return PoolLabel::kExtremeLeft;
    case Group::kLeft:
      return PoolLabel::kLeft;
    case Group::kRight:
      return PoolLabel::kRight;
    case Group::kExtremeRight:
      return PoolLabel::kExtremeRight;
    case Group::kMisinformation:
      return PoolLabel::kMisinformation;
    case Group::kControl:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace trackaudit
