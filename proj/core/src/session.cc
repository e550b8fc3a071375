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

#include "trackaudit/session.h"

#include <set>
#include <thread>
#include <utility>

#include "str_util.h"
#include "trackaudit/rng.h"

namespace trackaudit {

Timestamp SystemClock::Now() const {
  return std::chrono::time_point_cast<std::chrono::milliseconds>(
      std::chrono::system_clock::now());
}

void SystemClock::SleepFor(std::chrono::milliseconds d) {
  if (d.count() > 0) std::this_thread::sleep_for(d);
}

void SystemClock::SleepUntil(Timestamp t) { std::this_thread::sleep_until(t); }

VisitBehavior PlanVisitBehavior(std::uint64_t behavior_seed) {
  CounterRng rng(CounterRng::DeriveKey(behavior_seed, "visit-behavior"));
  VisitBehavior b;
  const auto k = rng.UniformInt(kMinScrollEvents, kMaxScrollEvents);
  for (std::int64_t i = 0; i < k; ++i) {
    b.scroll_fractions.push_back(rng.UniformDouble());
  }
  // Millisecond grid keeps the value identical after a timestamp round trip.
  const auto ms = rng.UniformInt(static_cast<std::int64_t>(kMinDwellSeconds * 1000),
                                 static_cast<std::int64_t>(kMaxDwellSeconds * 1000));
  b.dwell_seconds = static_cast<double>(ms) / 1000.0;
  return b;
}

std::vector<VideoRecord> NormalizeHomepage(std::vector<VideoRecord> raw,
                                           int top_k) {
  std::stable_sort(raw.begin(), raw.end(),
                   [](const VideoRecord& a, const VideoRecord& b) {
                     return a.position < b.position;
                   });
  std::vector<VideoRecord> out;
  std::set<std::string> seen;
  for (auto& v : raw) {
    if (static_cast<int>(out.size()) >= top_k) break;
    if (v.video_id.empty() || !seen.insert(v.video_id).second) continue;
    out.push_back(std::move(v));
  }
  return out;
}

Session::Session(SessionInfo info, std::unique_ptr<BrowserDriver> driver,
                 SessionTimeouts timeouts)
    : info_(std::move(info)), driver_(std::move(driver)), timeouts_(timeouts) {}

Session::~Session() {
  if (!closed_) (void)driver_->Close();
}

absl::StatusOr<VisitLog> Session::VisitArticle(std::string_view url,
                                               std::uint64_t behavior_seed,
                                               int day_index) {
  const VisitBehavior behavior = PlanVisitBehavior(behavior_seed);
  VisitLog log;
  log.puppet_id = info_.puppet_id;
  log.day_index = day_index;
  log.url = std::string(url);
  log.started_at = clock().Now();
  absl::Status nav = driver_->Navigate(url, timeouts_.navigation);
  if (!nav.ok()) {
    return absl::Status(nav.code(), StrCat("visit failed for ", url, ": ",
                                           std::string(nav.message())));
  }
  log.consent_outcome = driver_->AcceptConsent(timeouts_.consent);
  auto scrolled = driver_->Scroll(behavior.scroll_fractions);
  log.scroll_events = scrolled.ok() ? *scrolled : 0;
  clock().SleepFor(std::chrono::milliseconds(
      static_cast<std::int64_t>(behavior.dwell_seconds * 1000.0 + 0.5)));
  log.dwell_seconds = behavior.dwell_seconds;
  log.trackers_fired = driver_->TrackersFired();
  return log;
}

absl::StatusOr<std::string> Session::WatchVideo(std::string_view topic) {
  return driver_->WatchVideo(topic);
}

absl::StatusOr<RecommendationSnapshot> Session::CaptureHomepage(int top_k) {
  if (top_k <= 0) {
    return absl::InvalidArgumentError(
        StrCat("top_k must be positive, got ", top_k));
  }
  auto raw = driver_->ReadHomepage();
  if (!raw.ok()) {
    return absl::Status(raw.status().code(),
                        StrCat("capture failed: ",
                               std::string(raw.status().message())));
  }
  RecommendationSnapshot snap;
  snap.puppet_id = info_.puppet_id;
  snap.phase = Phase::kBaseline;
  snap.day_index = 0;
  snap.captured_at = clock().Now();
  snap.videos = NormalizeHomepage(*std::move(raw), top_k);
  if (snap.videos.empty()) {
    return absl::UnavailableError(
        StrCat("capture failed: empty homepage for ", info_.puppet_id));
  }
  return snap;
}

absl::Status Session::Close() {
  if (closed_) return absl::OkStatus();
  closed_ = true;
  return driver_->Close();
}

}  // namespace trackaudit
