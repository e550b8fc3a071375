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

#ifndef TRACKAUDIT_SIMULATED_DRIVER_H_
#define TRACKAUDIT_SIMULATED_DRIVER_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "trackaudit/mockworld.h"
#include "trackaudit/session.h"

namespace trackaudit {

// Client-side browser state: what survives between sessions of a profile.
struct BrowserStorage {
  std::map<std::string, std::string> cookies;
  std::map<std::string, std::string> local_storage;
  std::optional<Timestamp> virtual_now;

  bool operator==(const BrowserStorage&) const = default;
};

// Opens in-process sessions against a MockWorld. Profiles live under
// `profiles_root` when given (so a resumed process finds them), otherwise in
// memory. Every profile's virtual clock starts at `epoch`.
class SimulatedSessionFactory final : public SessionFactory {
 public:
  SimulatedSessionFactory(MockWorld& world,
                          std::optional<std::filesystem::path> profiles_root,
                          Timestamp epoch);

  absl::StatusOr<std::unique_ptr<Session>> Open(const PuppetSpec& puppet,
                                                bool fresh) override;

  // Current stored state of a profile (empty if never opened).
  absl::StatusOr<BrowserStorage> LoadStorage(std::string_view profile_ref);
  absl::Status SaveStorage(std::string_view profile_ref,
                           const BrowserStorage& storage);

  MockWorld& world() { return world_; }

 private:
  MockWorld& world_;
  std::optional<std::filesystem::path> root_;
  Timestamp epoch_;
  std::mutex mu_;
  std::map<std::string, BrowserStorage, std::less<>> memory_;
};

// Cookie holding the platform's visitor identifier.
inline constexpr std::string_view kPlatformCookie = "platform.visitor_id";

}  // namespace trackaudit

#endif  // TRACKAUDIT_SIMULATED_DRIVER_H_
