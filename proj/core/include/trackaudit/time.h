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

#ifndef TRACKAUDIT_TIME_H_
#define TRACKAUDIT_TIME_H_

#include <chrono>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace trackaudit {

// Calendar date without a time zone ("YYYY-MM-DD" on the wire).
using Date = std::chrono::year_month_day;

// UTC instant with millisecond precision.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

absl::StatusOr<Date> ParseDate(std::string_view text);
std::string FormatDate(const Date& date);

// ISO-8601 UTC, always three fractional digits: 2025-11-03T09:15:02.250Z.
absl::StatusOr<Timestamp> ParseTimestamp(std::string_view text);
std::string FormatTimestamp(Timestamp ts);

// Closed interval of dates; both endpoints are inside.
struct DateRange {
  Date first;
  Date last;

  bool Contains(const Date& d) const { return first <= d && d <= last; }
};

absl::StatusOr<DateRange> MakeDateRange(std::string_view first,
                                        std::string_view last);

}  // namespace trackaudit

#endif  // TRACKAUDIT_TIME_H_
