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

#ifndef TRACKAUDIT_WEBDRIVER_DRIVER_H_
#define TRACKAUDIT_WEBDRIVER_DRIVER_H_

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "trackaudit/experiment.h"
#include "trackaudit/session.h"

namespace trackaudit {

// Real-browser adapter. Speaks the W3C WebDriver HTTP protocol to a
// chromedriver/geckodriver-style endpoint and runs the page scripts for
// consent, scrolling and homepage extraction. Not exercised against a live
// platform in CI; tests drive it with a loopback fake endpoint.
//
// Environment mapping: tracking-permissive sessions ask for default
// cookie handling; tracking-restrictive sessions add the capability
// fragment under "restrictive" in the capabilities config, which is where
// an operator configures Brave shields or a blocking extension.

struct PageScripts {
  std::string consent_js;
  std::string scroll_js;
  std::string extract_js;
  std::string consent_rules_json;  // list of ConsentRule
  std::string selectors_json;      // homepage extraction selectors
};

// Reads consent.js, scroll.js, extract.js, consent_rules.json and
// selectors.json from `dir`. The rule file is validated.
absl::StatusOr<PageScripts> LoadPageScripts(const std::filesystem::path& dir);

struct ConsentRule {
  std::string domain_pattern;  // glob, '*' and '?'
  std::vector<std::string> selector_sequence;
  int wait_ms_between = 0;
  bool operator==(const ConsentRule&) const = default;
};

// Parses and validates consent_rules.json (format "trackaudit.consent_rules",
// version 1, non-empty selector sequences).
absl::StatusOr<std::vector<ConsentRule>> ParseConsentRules(std::string_view json);
bool GlobMatch(std::string_view pattern, std::string_view text);

// One tile returned by extract.js.
struct ExtractedVideo {
  std::string video_id;
  std::string title;
  std::string channel;
  int position = 0;
};
struct ExtractionResult {
  std::vector<ExtractedVideo> videos;
  int skipped = 0;
  bool no_matches = false;
};
// Decodes extract.js output: {"videos": [...], "skipped": n, "no_matches": b}.
absl::StatusOr<ExtractionResult> ParseExtraction(std::string_view json);

// Minimal WebDriver client over HTTP.
class WebDriverClient {
 public:
  // `endpoint` like "http://127.0.0.1:9515".
  explicit WebDriverClient(std::string endpoint);
  ~WebDriverClient();

  absl::Status NewSession(std::string_view capabilities_json);
  absl::Status DeleteSession();
  absl::Status NavigateTo(std::string_view url, std::chrono::milliseconds timeout);
  // POST /execute/async with {"script", "args"}; returns the JSON "value".
  absl::StatusOr<std::string> ExecuteScript(std::string_view script,
                                            std::string_view args_json);
  absl::StatusOr<std::string> GetCookies();  // JSON list
  absl::Status AddCookie(std::string_view cookie_json);
  const std::string& session_id() const { return session_id_; }

 private:
  absl::StatusOr<std::string> Call(std::string_view method, std::string path,
                                   std::string_view body,
                                   std::chrono::milliseconds timeout);
  std::string host_;
  int port_ = 0;
  std::string base_path_;
  std::string session_id_;
};

// Sessions backed by a WebDriver endpoint. Cookies are saved to
// `<profiles_root>/<profile_ref>/cookies.json` on close and restored on
// non-fresh opens.
absl::StatusOr<std::unique_ptr<SessionFactory>> MakeWebDriverSessionFactory(
    const RealDriverConfig& config, const std::filesystem::path& profiles_root);

}  // namespace trackaudit

#endif  // TRACKAUDIT_WEBDRIVER_DRIVER_H_
