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

#ifndef TRACKAUDIT_SRC_STR_UTIL_H_
#define TRACKAUDIT_SRC_STR_UTIL_H_

#include <iterator>
#include <string>

#include "fmt/format.h"

namespace trackaudit {

// fmt-backed concatenation. The system absl is built without std::string_view
// interop, so absl::StrCat cannot take our views.
template <typename... Args>
std::string StrCat(const Args&... args) {
  std::string out;
  (fmt::format_to(std::back_inserter(out), "{}", args), ...);
  return out;
}

}  // namespace trackaudit

#endif  // TRACKAUDIT_SRC_STR_UTIL_H_
