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

#include "codec.h"

#include <charconv>

#include "str_util.h"
#include "trackaudit/status_macros.h"

namespace trackaudit::internal {
namespace {

absl::StatusOr<std::int64_t> RequiredInt(const Json& j, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) {
    return absl::InvalidArgumentError(
        StrCat("field \"", key, "\" must be an integer"));
  }
  return it->get<std::int64_t>();
}

absl::StatusOr<double> RequiredDouble(const Json& j, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    return absl::InvalidArgumentError(
        StrCat("field \"", key, "\" must be a number"));
  }
  return it->get<double>();
}

absl::StatusOr<const Json*> RequiredArray(const Json& j, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array()) {
    return absl::InvalidArgumentError(
        StrCat("field \"", key, "\" must be an array"));
  }
  return &*it;
}

OrderedJson OptionalToJson(const std::optional<std::string>& s) {
  return s.has_value() ? OrderedJson(*s) : OrderedJson(nullptr);
}

}  // namespace

OrderedJson VisitLogToJson(const VisitLog& v) {
  OrderedJson j;
  j["day_index"] = v.day_index;
  j["url"] = v.url;
  j["started_at"] = FormatTimestamp(v.started_at);
  j["dwell_seconds"] = v.dwell_seconds;
  j["consent_outcome"] = std::string(ToString(v.consent_outcome));
  j["scroll_events"] = v.scroll_events;
  j["substituted_for"] = OptionalToJson(v.substituted_for);
  j["trackers_fired"] = v.trackers_fired;
  return j;
}

absl::StatusOr<VisitLog> VisitLogFromJson(const Json& j, std::string puppet_id) {
  VisitLog v;
  v.puppet_id = std::move(puppet_id);
  ASSIGN_OR_RETURN(const std::int64_t day, RequiredInt(j, "day_index"));
  v.day_index = static_cast<int>(day);
  ASSIGN_OR_RETURN(v.url, RequiredString(j, "url"));
  ASSIGN_OR_RETURN(const std::string started, RequiredString(j, "started_at"));
  ASSIGN_OR_RETURN(v.started_at, ParseTimestamp(started));
  ASSIGN_OR_RETURN(v.dwell_seconds, RequiredDouble(j, "dwell_seconds"));
  ASSIGN_OR_RETURN(const std::string consent,
                   RequiredString(j, "consent_outcome"));
  ASSIGN_OR_RETURN(v.consent_outcome, ParseConsentOutcome(consent));
  ASSIGN_OR_RETURN(const std::int64_t scrolls, RequiredInt(j, "scroll_events"));
  v.scroll_events = static_cast<int>(scrolls);
  ASSIGN_OR_RETURN(v.substituted_for, OptionalString(j, "substituted_for"));
  ASSIGN_OR_RETURN(const std::int64_t trackers, RequiredInt(j, "trackers_fired"));
  v.trackers_fired = static_cast<int>(trackers);
  return v;
}

OrderedJson VideoToJson(const VideoRecord& v) {
  OrderedJson j;
  j["video_id"] = v.video_id;
  j["title"] = v.title;
  j["channel"] = v.channel;
  j["position"] = v.position;
  j["transcript"] = OptionalToJson(v.transcript);
  return j;
}

absl::StatusOr<VideoRecord> VideoFromJson(const Json& j) {
  if (!j.is_object()) return absl::InvalidArgumentError("video must be an object");
  VideoRecord v;
  ASSIGN_OR_RETURN(v.video_id, RequiredString(j, "video_id"));
  ASSIGN_OR_RETURN(v.title, RequiredString(j, "title"));
  ASSIGN_OR_RETURN(v.channel, RequiredString(j, "channel"));
  ASSIGN_OR_RETURN(const std::int64_t pos, RequiredInt(j, "position"));
  v.position = static_cast<int>(pos);
  ASSIGN_OR_RETURN(v.transcript, OptionalString(j, "transcript"));
  return v;
}

OrderedJson SnapshotToJson(const RecommendationSnapshot& s) {
  OrderedJson j;
  j["day_index"] = s.day_index;
  j["phase"] = std::string(ToString(s.phase));
  j["captured_at"] = FormatTimestamp(s.captured_at);
  j["videos"] = OrderedJson::array();
  for (const auto& v : s.videos) j["videos"].push_back(VideoToJson(v));
  return j;
}

absl::StatusOr<RecommendationSnapshot> SnapshotFromJson(const Json& j,
                                                        std::string puppet_id) {
  RecommendationSnapshot s;
  s.puppet_id = std::move(puppet_id);
  ASSIGN_OR_RETURN(const std::int64_t day, RequiredInt(j, "day_index"));
  s.day_index = static_cast<int>(day);
  ASSIGN_OR_RETURN(const std::string phase, RequiredString(j, "phase"));
  ASSIGN_OR_RETURN(s.phase, ParsePhase(phase));
  ASSIGN_OR_RETURN(const std::string captured, RequiredString(j, "captured_at"));
  ASSIGN_OR_RETURN(s.captured_at, ParseTimestamp(captured));
  ASSIGN_OR_RETURN(const Json* videos, RequiredArray(j, "videos"));
  for (const auto& v : *videos) {
    ASSIGN_OR_RETURN(VideoRecord rec, VideoFromJson(v));
    s.videos.push_back(std::move(rec));
  }
  return s;
}

OrderedJson MarkerToJson(const PhaseMarker& m) {
  OrderedJson j;
  j["day_index"] = m.day_index;
  j["step"] = std::string(ToString(m.step));
  j["status"] = m.failed ? "failed" : "completed";
  j["detail"] = m.detail;
  return j;
}

absl::StatusOr<PhaseMarker> MarkerFromJson(const Json& j, std::string puppet_id) {
  PhaseMarker m;
  m.puppet_id = std::move(puppet_id);
  ASSIGN_OR_RETURN(const std::int64_t day, RequiredInt(j, "day_index"));
  m.day_index = static_cast<int>(day);
  ASSIGN_OR_RETURN(const std::string step, RequiredString(j, "step"));
  ASSIGN_OR_RETURN(m.step, ParseStep(step));
  ASSIGN_OR_RETURN(const std::string status, RequiredString(j, "status"));
  if (status != "completed" && status != "failed") {
    return absl::InvalidArgumentError(StrCat("unknown marker status ", status));
  }
  m.failed = status == "failed";
  ASSIGN_OR_RETURN(m.detail, RequiredString(j, "detail"));
  return m;
}

OrderedJson PlanToJson(const ExperimentPlan& plan) {
  OrderedJson j;
  j["created_at"] = FormatTimestamp(plan.created_at);
  j["cells"] = OrderedJson::array();
  for (const auto& cell : plan.cells) {
    OrderedJson c;
    c["group"] = std::string(ToString(cell.group));
    c["environment"] = std::string(ToString(cell.environment));
    c["puppets"] = OrderedJson::array();
    for (const auto& p : cell.puppets) {
      OrderedJson pj;
      pj["puppet_id"] = p.puppet_id;
      // Decimal string: 64-bit seeds do not survive IEEE doubles.
      pj["seed"] = std::to_string(p.seed);
      pj["profile_ref"] = p.profile_ref;
      c["puppets"].push_back(std::move(pj));
    }
    j["cells"].push_back(std::move(c));
  }
  return j;
}

absl::StatusOr<ExperimentPlan> PlanFromJson(const Json& j) {
  ExperimentPlan plan;
  ASSIGN_OR_RETURN(const std::string created, RequiredString(j, "created_at"));
  ASSIGN_OR_RETURN(plan.created_at, ParseTimestamp(created));
  ASSIGN_OR_RETURN(const Json* cells, RequiredArray(j, "cells"));
  for (const auto& cj : *cells) {
    PlanCell cell;
    ASSIGN_OR_RETURN(const std::string group, RequiredString(cj, "group"));
    ASSIGN_OR_RETURN(cell.group, ParseGroup(group));
    ASSIGN_OR_RETURN(const std::string env, RequiredString(cj, "environment"));
    ASSIGN_OR_RETURN(cell.environment, ParseEnvironment(env));
    ASSIGN_OR_RETURN(const Json* puppets, RequiredArray(cj, "puppets"));
    for (const auto& pj : *puppets) {
      PuppetSpec p;
      p.group = cell.group;
      p.environment = cell.environment;
      ASSIGN_OR_RETURN(p.puppet_id, RequiredString(pj, "puppet_id"));
      ASSIGN_OR_RETURN(const std::string seed, RequiredString(pj, "seed"));
      const auto [ptr, ec] =
          std::from_chars(seed.data(), seed.data() + seed.size(), p.seed);
      if (ec != std::errc() || ptr != seed.data() + seed.size()) {
        return absl::InvalidArgumentError(StrCat("bad puppet seed ", seed));
      }
      ASSIGN_OR_RETURN(p.profile_ref, RequiredString(pj, "profile_ref"));
      cell.puppets.push_back(std::move(p));
    }
    plan.cells.push_back(std::move(cell));
  }
  RETURN_IF_ERROR(ValidatePlan(plan));
  return plan;
}

}  // namespace trackaudit::internal
