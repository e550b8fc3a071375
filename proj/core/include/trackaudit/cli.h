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

#ifndef TRACKAUDIT_CLI_H_
#define TRACKAUDIT_CLI_H_

#include <ostream>

namespace trackaudit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitRuntimeError = 2;

// The `audit` command: validate, run, analyze.
int AuditMain(int argc, const char* const* argv, std::ostream& out,
              std::ostream& err);

}  // namespace trackaudit

#endif  // TRACKAUDIT_CLI_H_
