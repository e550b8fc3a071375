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

#ifndef TRACKAUDIT_EMBEDDER_H_
#define TRACKAUDIT_EMBEDDER_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace trackaudit {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dimension() const { return values.size(); }
  double Norm() const;
  bool operator==(const EmbeddingVector&) const = default;
};

// Scales `v` to unit length. Zero vectors are an error.
absl::Status Normalize(EmbeddingVector& v);

// Keeps the first `max_tokens` whitespace-separated words of `text`,
// joined by single spaces.
std::string TruncateWords(std::string_view text, int max_tokens);

class Embedder {
 public:
  virtual ~Embedder() = default;

  virtual std::string name() const = 0;
  // 0 when the backend has not reported one yet.
  virtual int dimension() const = 0;
  // Longest input, in words, the backend sees without truncating.
  virtual int max_tokens() const = 0;
  // Safe to call Embed from several threads at once.
  virtual bool thread_safe() const { return false; }

  // One unit vector per text, in order. Empty strings are rejected.
  virtual absl::StatusOr<std::vector<EmbeddingVector>> Embed(
      std::span<const std::string> texts) = 0;
};

// Bag-of-tokens signed feature hashing. Tokens are maximal runs of ASCII
// letters and digits (bytes >= 0x80 count as letters), lowercased. Each
// token adds +1 or -1 to one of `dimension` buckets, chosen by its 64-bit
// FNV-1a hash passed through the splitmix64 finalizer: bucket = h % D,
// sign = top bit set ? -1 : +1. The result is L2-normalized.
class HashEmbedder final : public Embedder {
 public:
  static constexpr int kDefaultDimension = 64;
  static constexpr int kDefaultMaxTokens = 384;

  explicit HashEmbedder(int dimension = kDefaultDimension,
                        int max_tokens = kDefaultMaxTokens);

  std::string name() const override { return "hash"; }
  int dimension() const override { return dimension_; }
  int max_tokens() const override { return max_tokens_; }
  bool thread_safe() const override { return true; }

  absl::StatusOr<std::vector<EmbeddingVector>> Embed(
      std::span<const std::string> texts) override;
  absl::StatusOr<EmbeddingVector> EmbedOne(std::string_view text) const;

  static std::vector<std::string> Tokenize(std::string_view text);

 private:
  int dimension_;
  int max_tokens_;
};

// Runs an external model. The command reads JSON lines {"text": ...} on
// stdin and writes one JSON array of numbers per line on stdout, in the
// same order. tools/embed_mpnet.py is such a command.
class ProcessEmbedder final : public Embedder {
 public:
  // Command line from $TRACKAUDIT_EMBEDDER_CMD.
  static absl::StatusOr<std::unique_ptr<ProcessEmbedder>> FromEnvironment(
      int max_tokens = 384);

  ProcessEmbedder(std::string command, int max_tokens);

  std::string name() const override { return "model"; }
  int dimension() const override { return dimension_; }
  int max_tokens() const override { return max_tokens_; }

  absl::StatusOr<std::vector<EmbeddingVector>> Embed(
      std::span<const std::string> texts) override;

 private:
  std::string command_;
  int max_tokens_;
  int dimension_ = 0;
};

}  // namespace trackaudit

#endif  // TRACKAUDIT_EMBEDDER_H_
