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

#include "trackaudit/matcher.h"

#include <algorithm>
#include <cmath>

#include "str_util.h"
#include "trackaudit/status_macros.h"

namespace trackaudit {

absl::StatusOr<double> Cosine(const EmbeddingVector& a,
                              const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    return absl::InvalidArgumentError(StrCat(
        "dimension mismatch: ", a.dimension(), " vs ", b.dimension()));
  }
  if (a.dimension() == 0) return absl::InvalidArgumentError("empty vector");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (!(na > 0.0) || !(nb > 0.0)) {
    return absl::InvalidArgumentError("cosine of a zero vector");
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

VideoText MakeVideoText(const VideoRecord& video, int max_tokens) {
  VideoText out;
  if (video.transcript.has_value() && !video.transcript->empty()) {
    out.text = TruncateWords(StrCat(video.title, " ", *video.transcript),
                             max_tokens);
    out.used_transcript = true;
  } else {
    out.text = TruncateWords(video.title, max_tokens);
  }
  return out;
}

absl::StatusOr<ClaimIndex> ClaimIndex::Build(std::span<const ClaimRecord> claims,
                                             Embedder& embedder) {
  std::vector<std::string> ids;
  std::vector<std::string> texts;
  ids.reserve(claims.size());
  texts.reserve(claims.size());
  for (const auto& c : claims) {
    ids.push_back(c.claim_id);
    texts.push_back(TruncateWords(c.text, embedder.max_tokens()));
  }
  if (ids.empty()) return absl::InvalidArgumentError("empty claim corpus");
  ASSIGN_OR_RETURN(std::vector<EmbeddingVector> vectors, embedder.Embed(texts));
  return FromVectors(std::move(ids), std::move(vectors));
}

absl::StatusOr<ClaimIndex> ClaimIndex::FromVectors(
    std::vector<std::string> claim_ids, std::vector<EmbeddingVector> vectors) {
  if (claim_ids.empty()) return absl::InvalidArgumentError("empty claim corpus");
  if (claim_ids.size() != vectors.size()) {
    return absl::InvalidArgumentError(
        StrCat(claim_ids.size(), " claim ids but ", vectors.size(), " vectors"));
  }
  ClaimIndex index;
  index.ids_ = std::move(claim_ids);
  index.vectors_ = std::move(vectors);
  return index;
}

absl::StatusOr<SimilarityResult> ScoreVector(std::string video_id,
                                             const EmbeddingVector& video_vector,
                                             const ClaimIndex& claims,
                                             bool used_transcript) {
  if (claims.size() == 0) return absl::InvalidArgumentError("empty claim corpus");
  SimilarityResult r;
  r.video_id = std::move(video_id);
  r.used_transcript = used_transcript;
  double sum = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    ASSIGN_OR_RETURN(const double s, Cosine(video_vector, claims.vectors()[i]));
    sum += s;
    const std::string& id = claims.ids()[i];
    if (first || s > r.max_sim || (s == r.max_sim && id < r.top_claim_id)) {
      r.max_sim = s;
      r.top_claim_id = id;
      first = false;
    }
  }
  // Rounding can put the mean a hair above the max when all scores agree.
  r.mean_sim = std::min(sum / static_cast<double>(claims.size()), r.max_sim);
  return r;
}

absl::StatusOr<SimilarityResult> ScoreVideo(const VideoRecord& video,
                                            const ClaimIndex& claims,
                                            Embedder& embedder) {
  if (claims.size() == 0) return absl::InvalidArgumentError("empty claim corpus");
  VideoText vt = MakeVideoText(video, embedder.max_tokens());
  const std::string texts[] = {std::move(vt.text)};
  ASSIGN_OR_RETURN(std::vector<EmbeddingVector> v, embedder.Embed(texts));
  return ScoreVector(video.video_id, v.front(), claims, vt.used_transcript);
}

}  // namespace trackaudit
