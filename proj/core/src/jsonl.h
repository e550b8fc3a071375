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

#ifndef TRACKAUDIT_SRC_JSONL_H_
#define TRACKAUDIT_SRC_JSONL_H_

#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "str_util.h"
#include "json.hpp"

namespace trackaudit::internal {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

inline absl::Status LineError(std::string_view source, int line,
                              std::string_view what) {
  return absl::InvalidArgumentError(StrCat(source, ":", line, ": ", what));
}

// Calls fn(line_number, object) for each non-blank line.
inline absl::Status ForEachJsonLine(
    std::istream& in, std::string_view source,
    const std::function<absl::Status(int, const Json&)>& fn) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json obj = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) return LineError(source, line_no, "malformed JSON");
    if (!obj.is_object()) {
      return LineError(source, line_no, "expected a JSON object");
    }
    absl::Status s = fn(line_no, obj);
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

inline absl::StatusOr<std::ifstream> OpenInput(const std::filesystem::path& p) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(p, ec)) {
    return absl::NotFoundError(StrCat("no such file: ", p.string()));
  }
  std::ifstream in(p);
  if (!in) {
    return absl::PermissionDeniedError(
        StrCat("cannot open ", p.string()));
  }
  return in;
}

inline absl::StatusOr<std::string> RequiredString(const Json& obj,
                                                  std::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    return absl::InvalidArgumentError(StrCat("missing field \"", key, "\""));
  }
  if (!it->is_string()) {
    return absl::InvalidArgumentError(
        StrCat("field \"", key, "\" must be a string"));
  }
  return it->get<std::string>();
}

// Absent or null -> nullopt; anything but a string is an error.
inline absl::StatusOr<std::optional<std::string>> OptionalString(
    const Json& obj, std::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::optional<std::string>{};
  if (!it->is_string()) {
    return absl::InvalidArgumentError(
        StrCat("field \"", key, "\" must be a string or null"));
  }
  return std::optional<std::string>{it->get<std::string>()};
}

}  // namespace trackaudit::internal

#endif  // TRACKAUDIT_SRC_JSONL_H_
