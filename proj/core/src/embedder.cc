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

#include "trackaudit/embedder.h"

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "jsonl.h"
#include "str_util.h"
#include "trackaudit/rng.h"

namespace trackaudit {
namespace {

bool IsTokenByte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Removes a temp file on scope exit.
struct TempFile {
  std::filesystem::path path;
  ~TempFile() {
    std::error_code ec;
    if (!path.empty()) std::filesystem::remove(path, ec);
  }
};

absl::StatusOr<std::filesystem::path> MakeTemp(std::string_view tag) {
  std::string tmpl =
      (std::filesystem::temp_directory_path() / StrCat("trackaudit-", tag, "-XXXXXX"))
          .string();
  const int fd = ::mkstemp(tmpl.data());
  if (fd < 0) return absl::UnavailableError("cannot create temp file");
  ::close(fd);
  return std::filesystem::path(tmpl);
}

}  // namespace

double EmbeddingVector::Norm() const {
  double s = 0.0;
  for (double x : values) s += x * x;
  return std::sqrt(s);
}

absl::Status Normalize(EmbeddingVector& v) {
  const double n = v.Norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    return absl::InvalidArgumentError("cannot normalize a zero vector");
  }
  for (double& x : v.values) x /= n;
  return absl::OkStatus();
}

std::string TruncateWords(std::string_view text, int max_tokens) {
  std::string out;
  int words = 0;
  std::size_t i = 0;
  while (i < text.size() && words < max_tokens) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (i > start) {
      if (!out.empty()) out.push_back(' ');
      out.append(text.substr(start, i - start));
      ++words;
    }
  }
  return out;
}

HashEmbedder::HashEmbedder(int dimension, int max_tokens)
    : dimension_(dimension > 0 ? dimension : kDefaultDimension),
      max_tokens_(max_tokens > 0 ? max_tokens : kDefaultMaxTokens) {}

std::vector<std::string> HashEmbedder::Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (IsTokenByte(c)) {
      cur.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                           : ch);
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

absl::StatusOr<EmbeddingVector> HashEmbedder::EmbedOne(
    std::string_view text) const {
  if (text.empty()) return absl::InvalidArgumentError("cannot embed empty text");
  EmbeddingVector v;
  v.values.assign(static_cast<std::size_t>(dimension_), 0.0);
  const auto dim = static_cast<std::uint64_t>(dimension_);
  for (const auto& tok : Tokenize(text)) {
    const std::uint64_t h = CounterRng::Mix(CounterRng::HashString(tok));
    v.values[h % dim] += (h >> 63) ? -1.0 : 1.0;
  }
  if (absl::Status s = Normalize(v); !s.ok()) {
    return absl::InvalidArgumentError(
        StrCat("text has no embeddable tokens: \"", TruncateWords(text, 8), "\""));
  }
  return v;
}

absl::StatusOr<std::vector<EmbeddingVector>> HashEmbedder::Embed(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    auto v = EmbedOne(t);
    if (!v.ok()) return v.status();
    out.push_back(*std::move(v));
  }
  return out;
}

absl::StatusOr<std::unique_ptr<ProcessEmbedder>> ProcessEmbedder::FromEnvironment(
    int max_tokens) {
  const char* cmd = std::getenv("TRACKAUDIT_EMBEDDER_CMD");
  if (cmd == nullptr || *cmd == '\0') {
    return absl::FailedPreconditionError(
        "the model embedder needs TRACKAUDIT_EMBEDDER_CMD, e.g. "
        "\"python3 tools/embed_mpnet.py\"");
  }
  return std::make_unique<ProcessEmbedder>(cmd, max_tokens);
}

ProcessEmbedder::ProcessEmbedder(std::string command, int max_tokens)
    : command_(std::move(command)), max_tokens_(max_tokens) {}

absl::StatusOr<std::vector<EmbeddingVector>> ProcessEmbedder::Embed(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  if (texts.empty()) return out;
  for (const auto& t : texts) {
    if (t.empty()) return absl::InvalidArgumentError("cannot embed empty text");
  }
  auto in_path = MakeTemp("in");
  if (!in_path.ok()) return in_path.status();
  TempFile in_file{*in_path};
  auto out_path = MakeTemp("out");
  if (!out_path.ok()) return out_path.status();
  TempFile out_file{*out_path};
  {
    std::ofstream in(in_file.path);
    for (const auto& t : texts) {
      internal::Json j;
      j["text"] = t;
      in << j.dump() << '\n';
    }
    if (!in) return absl::UnavailableError("cannot write embedder input");
  }
  const std::string cmd = StrCat(command_, " < '", in_file.path.string(), "' > '",
                                 out_file.path.string(), "'");
  const int rc = std::system(cmd.c_str());
  if (rc != 0) {
    return absl::UnavailableError(
        StrCat("embedder command failed (status ", rc, "): ", command_));
  }
  std::ifstream result(out_file.path);
  std::string line;
  int line_no = 0;
  while (std::getline(result, line)) {
    ++line_no;
    if (line.empty()) continue;
    internal::Json j = internal::Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_array() || j.empty()) {
      return absl::DataLossError(
          StrCat("embedder output line ", line_no, " is not a number array"));
    }
    EmbeddingVector v;
    for (const auto& x : j) {
      if (!x.is_number()) {
        return absl::DataLossError(
            StrCat("embedder output line ", line_no, " has a non-number"));
      }
      v.values.push_back(x.get<double>());
    }
    if (dimension_ == 0) dimension_ = static_cast<int>(v.dimension());
    if (static_cast<int>(v.dimension()) != dimension_) {
      return absl::DataLossError(
          StrCat("embedder returned dimension ", v.dimension(), ", expected ",
                 dimension_));
    }
    if (absl::Status s = Normalize(v); !s.ok()) {
      return absl::DataLossError(
          StrCat("embedder returned a zero vector on line ", line_no));
    }
    out.push_back(std::move(v));
  }
  if (out.size() != texts.size()) {
    return absl::DataLossError(StrCat("embedder returned ", out.size(),
                                      " vectors for ", texts.size(), " texts"));
  }
  return out;
}

}  // namespace trackaudit
