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

#ifndef TRACKAUDIT_MATCHER_H_
#define TRACKAUDIT_MATCHER_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "trackaudit/corpus.h"
#include "trackaudit/embedder.h"
#include "trackaudit/records.h"

namespace trackaudit {

// dot(a, b) / (|a| |b|), clamped to [-1, 1].
absl::StatusOr<double> Cosine(const EmbeddingVector& a,
                              const EmbeddingVector& b);

struct SimilarityResult {
  std::string video_id;
  double max_sim = 0.0;
  double mean_sim = 0.0;
  std::string top_claim_id;
  bool used_transcript = false;
  bool operator==(const SimilarityResult&) const = default;
};

// Text a video is scored on: title, plus " " + transcript when there is
// one, cut to the first `max_tokens` words.
struct VideoText {
  std::string text;
  bool used_transcript = false;
};
VideoText MakeVideoText(const VideoRecord& video, int max_tokens);

// Claim vectors computed once and shared by every video of a run.
class ClaimIndex {
 public:
  static absl::StatusOr<ClaimIndex> Build(std::span<const ClaimRecord> claims,
                                          Embedder& embedder);
  static absl::StatusOr<ClaimIndex> FromVectors(
      std::vector<std::string> claim_ids, std::vector<EmbeddingVector> vectors);

  std::span<const std::string> ids() const { return ids_; }
  std::span<const EmbeddingVector> vectors() const { return vectors_; }
  std::size_t size() const { return ids_.size(); }

 private:
  std::vector<std::string> ids_;
  std::vector<EmbeddingVector> vectors_;
};

// Max and mean cosine of `video_vector` over all claims. Ties for the max
// go to the lexicographically smallest claim id.
absl::StatusOr<SimilarityResult> ScoreVector(std::string video_id,
                                             const EmbeddingVector& video_vector,
                                             const ClaimIndex& claims,
                                             bool used_transcript = false);

absl::StatusOr<SimilarityResult> ScoreVideo(const VideoRecord& video,
                                            const ClaimIndex& claims,
                                            Embedder& embedder);

}  // namespace trackaudit

#endif  // TRACKAUDIT_MATCHER_H_
