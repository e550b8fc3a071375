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

#include "trackaudit/webdriver_driver.h"

#include <fstream>
#include <sstream>

#include "httplib.h"
#include "jsonl.h"
#include "str_util.h"
#include "trackaudit/status_macros.h"

namespace trackaudit {
namespace {

using internal::Json;

absl::StatusOr<std::string> ReadText(const std::filesystem::path& p) {
  ASSIGN_OR_RETURN(std::ifstream in, internal::OpenInput(p));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// WebDriver error strings to status codes. Page loads that fail on the
// network side surface as "unknown error" with a net:: reason.
absl::Status FromWebDriverError(int http_status, const Json& value) {
  const std::string error = value.is_object() ? value.value("error", "") : "";
  const std::string message =
      value.is_object() ? value.value("message", "") : value.dump();
  const std::string text = StrCat("webdriver ", http_status, " ", error, ": ",
                                  message.substr(0, 300));
  if (error == "timeout" || error == "script timeout") {
    return absl::DeadlineExceededError(text);
  }
  if (error == "invalid session id" || error == "session not created") {
    return absl::AbortedError(text);
  }
  if (message.find("net::ERR_") != std::string::npos) {
    return absl::NotFoundError(text);
  }
  if (error == "no such element") return absl::NotFoundError(text);
  return absl::InternalError(text);
}

std::string VideoIdFromUrl(std::string_view url) {
  const auto pos = url.find("v=");
  if (pos == std::string_view::npos) return std::string(url);
  auto end = url.find_first_of("&#", pos);
  return std::string(url.substr(pos + 2, end == std::string_view::npos
                                             ? std::string_view::npos
                                             : end - pos - 2));
}

}  // namespace

bool GlobMatch(std::string_view pattern, std::string_view text) {
  // Iterative matcher with single-star backtracking.
  std::size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

absl::StatusOr<std::vector<ConsentRule>> ParseConsentRules(std::string_view json) {
  Json j = Json::parse(json, nullptr, false);
  auto bad = [](std::string_view what) {
    return absl::InvalidArgumentError(StrCat("consent rules: ", what));
  };
  if (j.is_discarded() || !j.is_object()) return bad("not a JSON object");
  if (j.value("format", "") != "trackaudit.consent_rules") {
    return bad("format must be \"trackaudit.consent_rules\"");
  }
  if (!j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != 1) {
    return bad("unsupported version (expected 1)");
  }
  if (!j.contains("rules") || !j["rules"].is_array()) return bad("missing rules list");
  std::vector<ConsentRule> rules;
  int i = 0;
  for (const auto& r : j["rules"]) {
    const std::string where = StrCat("rule ", i++);
    if (!r.is_object()) return bad(StrCat(where, " is not an object"));
    ConsentRule rule;
    if (!r.contains("domain_pattern") || !r["domain_pattern"].is_string() ||
        r["domain_pattern"].get<std::string>().empty()) {
      return bad(StrCat(where, ": domain_pattern must be a non-empty string"));
    }
    rule.domain_pattern = r["domain_pattern"].get<std::string>();
    if (!r.contains("selector_sequence") || !r["selector_sequence"].is_array() ||
        r["selector_sequence"].empty()) {
      return bad(StrCat(where, ": selector_sequence must be a non-empty list"));
    }
    for (const auto& s : r["selector_sequence"]) {
      if (!s.is_string() || s.get<std::string>().empty()) {
        return bad(StrCat(where, ": selectors must be non-empty strings"));
      }
      rule.selector_sequence.push_back(s.get<std::string>());
    }
    if (r.contains("wait_ms_between")) {
      if (!r["wait_ms_between"].is_number_integer() ||
          r["wait_ms_between"].get<int>() < 0) {
        return bad(StrCat(where, ": wait_ms_between must be a non-negative integer"));
      }
      rule.wait_ms_between = r["wait_ms_between"].get<int>();
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

absl::StatusOr<ExtractionResult> ParseExtraction(std::string_view json) {
  Json j = Json::parse(json, nullptr, false);
  auto bad = [](std::string_view what) {
    return absl::DataLossError(StrCat("homepage extraction: ", what));
  };
  if (j.is_discarded() || !j.is_object()) return bad("not a JSON object");
  ExtractionResult out;
  out.skipped = j.value("skipped", 0);
  out.no_matches = j.value("no_matches", false);
  if (!j.contains("videos") || !j["videos"].is_array()) return bad("missing videos");
  int last = 0;
  for (const auto& v : j["videos"]) {
    if (!v.is_object() || !v.contains("video_id") || !v["video_id"].is_string() ||
        !v.contains("position") || !v["position"].is_number_integer()) {
      return bad("entries need video_id and position");
    }
    ExtractedVideo e;
    e.video_id = v["video_id"].get<std::string>();
    e.title = v.value("title", "");
    e.channel = v.value("channel", "");
    e.position = v["position"].get<int>();
    if (e.position <= last) return bad("positions must increase from 1");
    last = e.position;
    out.videos.push_back(std::move(e));
  }
  return out;
}

absl::StatusOr<PageScripts> LoadPageScripts(const std::filesystem::path& dir) {
  PageScripts s;
  ASSIGN_OR_RETURN(s.consent_js, ReadText(dir / "consent.js"));
  ASSIGN_OR_RETURN(s.scroll_js, ReadText(dir / "scroll.js"));
  ASSIGN_OR_RETURN(s.extract_js, ReadText(dir / "extract.js"));
  ASSIGN_OR_RETURN(s.consent_rules_json, ReadText(dir / "consent_rules.json"));
  ASSIGN_OR_RETURN(s.selectors_json, ReadText(dir / "selectors.json"));
  RETURN_IF_ERROR(ParseConsentRules(s.consent_rules_json).status());
  Json sel = Json::parse(s.selectors_json, nullptr, false);
  if (sel.is_discarded() || !sel.is_object() || !sel.contains("tile") ||
      !sel.contains("link")) {
    return absl::InvalidArgumentError(
        StrCat((dir / "selectors.json").string(), ": needs tile and link selectors"));
  }
  return s;
}

WebDriverClient::WebDriverClient(std::string endpoint) {
  std::string_view e = endpoint;
  if (e.starts_with("http://")) e.remove_prefix(7);
  const auto slash = e.find('/');
  std::string_view hostport = e.substr(0, slash);
  base_path_ = slash == std::string_view::npos ? "" : std::string(e.substr(slash));
  while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
  const auto colon = hostport.rfind(':');
  host_ = std::string(hostport.substr(0, colon));
  port_ = 4444;
  if (colon != std::string_view::npos) {
    port_ = std::atoi(std::string(hostport.substr(colon + 1)).c_str());
  }
}

WebDriverClient::~WebDriverClient() { (void)DeleteSession(); }

absl::StatusOr<std::string> WebDriverClient::Call(
    std::string_view method, std::string path, std::string_view body,
    std::chrono::milliseconds timeout) {
  httplib::Client cli(host_, port_);
  cli.set_connection_timeout(std::chrono::seconds(5));
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout) +
                    std::chrono::seconds(5);
  cli.set_read_timeout(secs);
  cli.set_write_timeout(std::chrono::seconds(30));
  path = base_path_ + path;
  httplib::Result res;
  if (method == "GET") {
    res = cli.Get(path);
  } else if (method == "DELETE") {
    res = cli.Delete(path);
  } else {
    res = cli.Post(path, std::string(body), "application/json");
  }
  if (!res) {
    return absl::AbortedError(StrCat("webdriver endpoint ", host_, ":", port_,
                                     " unreachable: ", httplib::to_string(res.error())));
  }
  Json j = Json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("value")) {
    return absl::InternalError(
        StrCat("webdriver returned ", res->status, " with a non-protocol body"));
  }
  if (res->status >= 400) return FromWebDriverError(res->status, j["value"]);
  return j["value"].dump();
}

absl::Status WebDriverClient::NewSession(std::string_view capabilities_json) {
  Json caps = Json::parse(capabilities_json, nullptr, false);
  if (caps.is_discarded() || !caps.is_object()) {
    return absl::InvalidArgumentError("capabilities must be a JSON object");
  }
  Json body;
  body["capabilities"]["alwaysMatch"] = caps;
  ASSIGN_OR_RETURN(const std::string value,
                   Call("POST", "/session", body.dump(), std::chrono::seconds(60)));
  Json v = Json::parse(value);
  if (!v.is_object() || !v.contains("sessionId") || !v["sessionId"].is_string()) {
    return absl::InternalError("new session response lacks sessionId");
  }
  session_id_ = v["sessionId"].get<std::string>();
  return absl::OkStatus();
}

absl::Status WebDriverClient::DeleteSession() {
  if (session_id_.empty()) return absl::OkStatus();
  auto r = Call("DELETE", StrCat("/session/", session_id_), "",
                std::chrono::seconds(10));
  session_id_.clear();
  return r.status();
}

absl::Status WebDriverClient::NavigateTo(std::string_view url,
                                         std::chrono::milliseconds timeout) {
  Json t;
  t["pageLoad"] = timeout.count();
  RETURN_IF_ERROR(Call("POST", StrCat("/session/", session_id_, "/timeouts"),
                       t.dump(), std::chrono::seconds(10))
                      .status());
  Json b;
  b["url"] = std::string(url);
  return Call("POST", StrCat("/session/", session_id_, "/url"), b.dump(), timeout)
      .status();
}

absl::StatusOr<std::string> WebDriverClient::ExecuteScript(
    std::string_view script, std::string_view args_json) {
  Json args = Json::parse(args_json, nullptr, false);
  if (args.is_discarded() || !args.is_array()) {
    return absl::InvalidArgumentError("script args must be a JSON array");
  }
  Json b;
  b["script"] = std::string(script);
  b["args"] = args;
  return Call("POST", StrCat("/session/", session_id_, "/execute/async"), b.dump(),
              std::chrono::seconds(60));
}

absl::StatusOr<std::string> WebDriverClient::GetCookies() {
  return Call("GET", StrCat("/session/", session_id_, "/cookie"), "",
              std::chrono::seconds(10));
}

absl::Status WebDriverClient::AddCookie(std::string_view cookie_json) {
  Json b;
  b["cookie"] = Json::parse(cookie_json);
  return Call("POST", StrCat("/session/", session_id_, "/cookie"), b.dump(),
              std::chrono::seconds(10))
      .status();
}

namespace {

// Scripts run through /execute/async; the last argument is the callback.
constexpr std::string_view kConsentCall =
    "\nconst done = arguments[arguments.length - 1];\n"
    "trackauditAcceptConsent(arguments[0], arguments[1])"
    ".then(done, () => done('failed'));\n";
constexpr std::string_view kScrollCall =
    "\nconst done = arguments[arguments.length - 1];\n"
    "done(trackauditScroll(arguments[0]));\n";
constexpr std::string_view kExtractCall =
    "\nconst done = arguments[arguments.length - 1];\n"
    "done(trackauditExtract(arguments[0], arguments[1]));\n";

std::string Capabilities(const std::string& config_json, Environment env) {
  Json caps = Json::parse(config_json, nullptr, false);
  if (!caps.is_object()) return "{}";
  const bool split = caps.contains("common") ||
                     caps.contains("tracking-permissive") ||
                     caps.contains("tracking-restrictive");
  if (!split) return caps.dump();
  Json out = caps.value("common", Json::object());
  const Json specific = caps.value(std::string(ToString(env)), Json::object());
  out.merge_patch(specific);
  return out.dump();
}

class WebDriverBrowser final : public BrowserDriver {
 public:
  WebDriverBrowser(const RealDriverConfig& config, const PageScripts& scripts,
                   std::filesystem::path cookie_file)
      : config_(config),
        scripts_(scripts),
        cookie_file_(std::move(cookie_file)),
        client_(config.endpoint) {}

  absl::Status Start(Environment env, bool fresh) {
    RETURN_IF_ERROR(client_.NewSession(Capabilities(config_.capabilities_json, env)));
    if (fresh) {
      std::error_code ec;
      std::filesystem::remove(cookie_file_, ec);
      return absl::OkStatus();
    }
    std::ifstream in(cookie_file_);
    if (!in) return absl::OkStatus();
    Json cookies = Json::parse(in, nullptr, false);
    if (!cookies.is_array()) {
      return absl::DataLossError(StrCat("corrupt cookie jar ", cookie_file_.string()));
    }
    // WebDriver only accepts cookies for the current document's domain.
    std::map<std::string, std::vector<Json>> by_domain;
    for (auto& c : cookies) {
      std::string d = c.value("domain", "");
      while (!d.empty() && d.front() == '.') d.erase(0, 1);
      if (!d.empty()) by_domain[d].push_back(c);
    }
    for (const auto& [domain, list] : by_domain) {
      if (!client_.NavigateTo(StrCat("https://", domain, "/"), std::chrono::seconds(30))
               .ok()) {
        continue;
      }
      for (const auto& c : list) (void)client_.AddCookie(c.dump());
    }
    return absl::OkStatus();
  }

  absl::Status Navigate(std::string_view url,
                        std::chrono::milliseconds timeout) override {
    current_url_ = std::string(url);
    return client_.NavigateTo(url, timeout);
  }

  ConsentOutcome AcceptConsent(std::chrono::milliseconds timeout) override {
    Json rules = Json::parse(scripts_.consent_rules_json)["rules"];
    Json args = Json::array({rules, timeout.count()});
    auto r = client_.ExecuteScript(StrCat(scripts_.consent_js, kConsentCall),
                                   args.dump());
    if (!r.ok()) return ConsentOutcome::kFailed;
    Json v = Json::parse(*r, nullptr, false);
    if (!v.is_string()) return ConsentOutcome::kFailed;
    auto outcome = ParseConsentOutcome(v.get<std::string>());
    return outcome.ok() ? *outcome : ConsentOutcome::kFailed;
  }

  absl::StatusOr<int> Scroll(std::span<const double> fractions) override {
    Json args = Json::array({Json(std::vector<double>(fractions.begin(), fractions.end()))});
    ASSIGN_OR_RETURN(const std::string r,
                     client_.ExecuteScript(StrCat(scripts_.scroll_js, kScrollCall),
                                           args.dump()));
    Json v = Json::parse(r, nullptr, false);
    if (!v.is_number_integer()) return absl::InternalError("scroll returned no count");
    return v.get<int>();
  }

  int TrackersFired() const override { return 0; }

  absl::StatusOr<std::string> WatchVideo(std::string_view topic) override {
    auto it = config_.seed_videos.find(std::string(topic));
    if (it == config_.seed_videos.end() || it->second.empty()) {
      return absl::NotFoundError(
          StrCat("watch failed: no seed video configured for topic ", topic));
    }
    const std::string& url = it->second.front();
    RETURN_IF_ERROR(Navigate(url, std::chrono::seconds(30)));
    (void)AcceptConsent(std::chrono::seconds(10));
    clock_.SleepFor(std::chrono::milliseconds(
        static_cast<std::int64_t>(config_.watch_seconds * 1000.0)));
    return VideoIdFromUrl(url);
  }

  absl::StatusOr<std::vector<VideoRecord>> ReadHomepage() override {
    RETURN_IF_ERROR(Navigate(config_.platform_url, std::chrono::seconds(30)));
    Json args = Json::array({Json::parse(scripts_.selectors_json), 200});
    ASSIGN_OR_RETURN(const std::string r,
                     client_.ExecuteScript(StrCat(scripts_.extract_js, kExtractCall),
                                           args.dump()));
    ASSIGN_OR_RETURN(const ExtractionResult ex, ParseExtraction(r));
    std::vector<VideoRecord> out;
    for (const auto& v : ex.videos) {
      // Transcripts are not fetched in real mode; scoring uses the title.
      out.push_back(VideoRecord{v.video_id, v.title, v.channel, v.position,
                                std::nullopt});
    }
    return out;
  }

  std::optional<std::string> PlatformIdentifier() const override {
    return std::nullopt;
  }

  Clock& clock() override { return clock_; }

  absl::Status Close() override {
    absl::Status s = absl::OkStatus();
    auto cookies = client_.GetCookies();
    if (cookies.ok()) {
      std::error_code ec;
      std::filesystem::create_directories(cookie_file_.parent_path(), ec);
      std::ofstream out(cookie_file_);
      out << *cookies;
      if (!out) s = absl::UnavailableError(StrCat("cannot write ", cookie_file_.string()));
    }
    absl::Status d = client_.DeleteSession();
    return s.ok() ? d : s;
  }

  const std::string& current_url() const { return current_url_; }

 private:
  const RealDriverConfig& config_;
  const PageScripts& scripts_;
  std::filesystem::path cookie_file_;
  WebDriverClient client_;
  SystemClock clock_;
  std::string current_url_;
};

class WebDriverSessionFactory final : public SessionFactory {
 public:
  WebDriverSessionFactory(RealDriverConfig config, PageScripts scripts,
                          std::filesystem::path root)
      : config_(std::move(config)),
        scripts_(std::move(scripts)),
        root_(std::move(root)) {}

  absl::StatusOr<std::unique_ptr<Session>> Open(const PuppetSpec& puppet,
                                                bool fresh) override {
    auto browser = std::make_unique<WebDriverBrowser>(
        config_, scripts_, root_ / puppet.profile_ref / "cookies.json");
    if (absl::Status s = browser->Start(puppet.environment, fresh); !s.ok()) {
      return absl::Status(s.code(), StrCat("session open failed for ",
                                           puppet.puppet_id, ": ",
                                           std::string(s.message())));
    }
    SessionInfo info{puppet.puppet_id, puppet.environment, puppet.profile_ref,
                     DriverKind::kReal};
    return std::make_unique<Session>(std::move(info), std::move(browser));
  }

 private:
  RealDriverConfig config_;
  PageScripts scripts_;
  std::filesystem::path root_;
};

}  // namespace

absl::StatusOr<std::unique_ptr<SessionFactory>> MakeWebDriverSessionFactory(
    const RealDriverConfig& config, const std::filesystem::path& profiles_root) {
  if (config.endpoint.empty()) {
    return absl::InvalidArgumentError(
        "real driver needs real.endpoint or TRACKAUDIT_WEBDRIVER_URL");
  }
  if (!config.endpoint.starts_with("http://")) {
    return absl::InvalidArgumentError(
        StrCat("webdriver endpoint must be http://host:port, got ", config.endpoint));
  }
  ASSIGN_OR_RETURN(PageScripts scripts, LoadPageScripts(config.page_scripts_dir));
  return std::unique_ptr<SessionFactory>(
      new WebDriverSessionFactory(config, std::move(scripts), profiles_root));
}

}  // namespace trackaudit
