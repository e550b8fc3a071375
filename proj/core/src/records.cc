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

#include "trackaudit/records.h"

#include <set>

#include "str_util.h"

namespace trackaudit {

std::vector<PuppetSpec> ExperimentPlan::Puppets() const {
  std::vector<PuppetSpec> out;
  for (const auto& cell : cells) {
    out.insert(out.end(), cell.puppets.begin(), cell.puppets.end());
  }
  return out;
}

const PuppetSpec* ExperimentPlan::FindPuppet(std::string_view puppet_id) const {
  for (const auto& cell : cells) {
    for (const auto& p : cell.puppets) {
      if (p.puppet_id == puppet_id) return &p;
    }
  }
  return nullptr;
}

absl::Status ValidateVisitLog(const VisitLog& log) {
  if (log.puppet_id.empty()) {
    return absl::InvalidArgumentError("visit log has no puppet_id");
  }
  if (log.url.empty()) return absl::InvalidArgumentError("visit log has no url");
  if (log.day_index < 0) {
    return absl::InvalidArgumentError("visit log day_index is negative");
  }
  if (!(log.dwell_seconds > 0.0 && log.dwell_seconds <= 60.0)) {
    return absl::InvalidArgumentError(StrCat(
        "dwell_seconds must be in (0, 60], got ", log.dwell_seconds));
  }
  if (log.scroll_events < 0) {
    return absl::InvalidArgumentError("scroll_events is negative");
  }
  if (log.trackers_fired < 0) {
    return absl::InvalidArgumentError("trackers_fired is negative");
  }
  return absl::OkStatus();
}

absl::Status ValidateSnapshot(const RecommendationSnapshot& snapshot) {
  if (snapshot.puppet_id.empty()) {
    return absl::InvalidArgumentError("snapshot has no puppet_id");
  }
  if (snapshot.day_index < 0) {
    return absl::InvalidArgumentError("snapshot day_index is negative");
  }
  if (snapshot.phase == Phase::kBaseline && snapshot.day_index != 0) {
    return absl::InvalidArgumentError(StrCat(
        "baseline snapshot must have day_index 0, got ", snapshot.day_index));
  }
  int last = 0;
  std::set<std::string_view> ids;
  for (const auto& v : snapshot.videos) {
    if (v.video_id.empty()) {
      return absl::InvalidArgumentError("snapshot video has empty video_id");
    }
    if (v.position <= last) {
      return absl::InvalidArgumentError(StrCat(
          "snapshot positions must be strictly increasing from 1; position ",
          v.position, " follows ", last));
    }
    last = v.position;
    if (!ids.insert(v.video_id).second) {
      return absl::InvalidArgumentError(
          StrCat("duplicate video_id ", v.video_id, " in snapshot"));
    }
  }
  return absl::OkStatus();
}

absl::Status ValidatePlan(const ExperimentPlan& plan) {
  std::set<std::string_view> ids;
  std::set<std::pair<Group, Environment>> cells;
  for (const auto& cell : plan.cells) {
    if (!cells.insert({cell.group, cell.environment}).second) {
      return absl::InvalidArgumentError(
          StrCat("duplicate plan cell (", ToString(cell.group), ", ",
                       ToString(cell.environment), ")"));
    }
    for (const auto& p : cell.puppets) {
      if (p.group != cell.group || p.environment != cell.environment) {
        return absl::InvalidArgumentError(
            StrCat("puppet ", p.puppet_id, " filed under wrong cell"));
      }
      if (!ids.insert(p.puppet_id).second) {
        return absl::InvalidArgumentError(
            StrCat("puppet ", p.puppet_id, " appears twice in plan"));
      }
    }
  }
  return absl::OkStatus();
}

}  // namespace trackaudit
