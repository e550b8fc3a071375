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

#ifndef TRACKAUDIT_SESSION_H_
#define TRACKAUDIT_SESSION_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "trackaudit/labels.h"
#include "trackaudit/records.h"
#include "trackaudit/time.h"

namespace trackaudit {

// Time source for one session. The simulated driver runs on a virtual clock
// so dwell and inter-day waits cost nothing.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp Now() const = 0;
  virtual void SleepFor(std::chrono::milliseconds d) = 0;
  // No-op if `t` is not in the future.
  virtual void SleepUntil(Timestamp t) = 0;
};

class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(Timestamp start) : now_(start) {}
  Timestamp Now() const override { return now_; }
  void SleepFor(std::chrono::milliseconds d) override { now_ += d; }
  void SleepUntil(Timestamp t) override {
    if (t > now_) now_ = t;
  }

 private:
  Timestamp now_;
};

class SystemClock final : public Clock {
 public:
  Timestamp Now() const override;
  void SleepFor(std::chrono::milliseconds d) override;
  void SleepUntil(Timestamp t) override;
};

struct SessionTimeouts {
  std::chrono::milliseconds navigation{30'000};
  std::chrono::milliseconds consent{10'000};
};

// Browser primitives. Scripted behaviour (what to click, how long to stay)
// lives in Session; drivers only execute.
class BrowserDriver {
 public:
  virtual ~BrowserDriver() = default;

  // Load a page. NotFound for dead URLs, DeadlineExceeded on timeout.
  virtual absl::Status Navigate(std::string_view url,
                                std::chrono::milliseconds timeout) = 0;
  virtual ConsentOutcome AcceptConsent(std::chrono::milliseconds timeout) = 0;
  // Scroll to each document fraction in turn; returns the events performed.
  virtual absl::StatusOr<int> Scroll(std::span<const double> fractions) = 0;
  // Third-party tracker requests sent by the current page.
  virtual int TrackersFired() const = 0;
  virtual absl::StatusOr<std::string> WatchVideo(std::string_view topic) = 0;
  // The homepage as rendered, in on-page order, possibly with duplicates.
  virtual absl::StatusOr<std::vector<VideoRecord>> ReadHomepage() = 0;
  // The identifier the platform stored in this browser, when observable.
  virtual std::optional<std::string> PlatformIdentifier() const = 0;
  virtual Clock& clock() = 0;
  virtual absl::Status Close() = 0;
};

// Identity of an open session; the environment never changes after open.
struct SessionInfo {
  std::string puppet_id;
  Environment environment = Environment::kTrackingPermissive;
  std::string profile_ref;
  DriverKind driver_kind = DriverKind::kSimulated;
};

// Randomised on-page behaviour for one visit, fully determined by the seed:
// 3..8 scroll events to uniform document fractions and a dwell uniform on
// [20, 60] seconds.
struct VisitBehavior {
  std::vector<double> scroll_fractions;
  double dwell_seconds = 0.0;
};

inline constexpr int kMinScrollEvents = 3;
inline constexpr int kMaxScrollEvents = 8;
inline constexpr double kMinDwellSeconds = 20.0;
inline constexpr double kMaxDwellSeconds = 60.0;

VisitBehavior PlanVisitBehavior(std::uint64_t behavior_seed);

// Keeps the first occurrence (lowest position) of each video_id, in on-page
// order, and stops after top_k distinct videos.
std::vector<VideoRecord> NormalizeHomepage(std::vector<VideoRecord> raw,
                                           int top_k);

class Session {
 public:
  Session(SessionInfo info, std::unique_ptr<BrowserDriver> driver,
          SessionTimeouts timeouts = {});
  ~Session();

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const SessionInfo& info() const { return info_; }
  BrowserDriver& driver() { return *driver_; }
  Clock& clock() { return driver_->clock(); }

  // Navigate, try the consent banner, scroll, dwell. A consent timeout is
  // recorded and the visit carries on; a navigation failure is returned.
  absl::StatusOr<VisitLog> VisitArticle(std::string_view url,
                                        std::uint64_t behavior_seed,
                                        int day_index = 0);

  absl::StatusOr<std::string> WatchVideo(std::string_view topic);

  // Snapshot with phase=baseline/day 0; callers restamp phase and day.
  absl::StatusOr<RecommendationSnapshot> CaptureHomepage(int top_k);

  absl::Status Close();

 private:
  SessionInfo info_;
  std::unique_ptr<BrowserDriver> driver_;
  SessionTimeouts timeouts_;
  bool closed_ = false;
};

class SessionFactory {
 public:
  virtual ~SessionFactory() = default;
  // fresh=true wipes the puppet's browser profile first; fresh=false resumes
  // whatever cookies and storage the profile already holds.
  virtual absl::StatusOr<std::unique_ptr<Session>> Open(
      const PuppetSpec& puppet, bool fresh) = 0;
};

}  // namespace trackaudit

#endif  // TRACKAUDIT_SESSION_H_
