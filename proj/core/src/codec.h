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

#ifndef TRACKAUDIT_SRC_CODEC_H_
#define TRACKAUDIT_SRC_CODEC_H_

// JSON wire forms of the domain records. Field names here are the archive
// schema; see docs/archive-format.md.

#include "absl/status/statusor.h"
#include "jsonl.h"
#include "trackaudit/records.h"

namespace trackaudit::internal {

OrderedJson VisitLogToJson(const VisitLog& v);
absl::StatusOr<VisitLog> VisitLogFromJson(const Json& j, std::string puppet_id);

OrderedJson VideoToJson(const VideoRecord& v);
absl::StatusOr<VideoRecord> VideoFromJson(const Json& j);

OrderedJson SnapshotToJson(const RecommendationSnapshot& s);
absl::StatusOr<RecommendationSnapshot> SnapshotFromJson(const Json& j,
                                                        std::string puppet_id);

OrderedJson MarkerToJson(const PhaseMarker& m);
absl::StatusOr<PhaseMarker> MarkerFromJson(const Json& j, std::string puppet_id);

OrderedJson PlanToJson(const ExperimentPlan& plan);
absl::StatusOr<ExperimentPlan> PlanFromJson(const Json& j);

}  // namespace trackaudit::internal

#endif  // TRACKAUDIT_SRC_CODEC_H_
