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

#include "trackaudit/time.h"

#include <cstdio>

#include "fmt/format.h"
#include "str_util.h"

namespace trackaudit {
namespace {

bool AllDigits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return !s.empty();
}

int ToInt(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

absl::StatusOr<Date> ParseDate(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !AllDigits(text.substr(0, 4)) || !AllDigits(text.substr(5, 2)) ||
      !AllDigits(text.substr(8, 2))) {
    return absl::InvalidArgumentError(
        StrCat("expected YYYY-MM-DD date, got \"", text, "\""));
  }
  const Date d{std::chrono::year{ToInt(text.substr(0, 4))},
               std::chrono::month{static_cast<unsigned>(ToInt(text.substr(5, 2)))},
               std::chrono::day{static_cast<unsigned>(ToInt(text.substr(8, 2)))}};
  if (!d.ok()) {
    return absl::InvalidArgumentError(
        StrCat("not a calendar date: \"", text, "\""));
  }
  return d;
}

std::string FormatDate(const Date& date) {
  return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(date.year()),
                         static_cast<unsigned>(date.month()),
                         static_cast<unsigned>(date.day()));
}

absl::StatusOr<Timestamp> ParseTimestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SS.mmmZ
  if (text.size() != 24 || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || text[19] != '.' || text[23] != 'Z' ||
      !AllDigits(text.substr(11, 2)) || !AllDigits(text.substr(14, 2)) ||
      !AllDigits(text.substr(17, 2)) || !AllDigits(text.substr(20, 3))) {
    return absl::InvalidArgumentError(StrCat(
        "expected YYYY-MM-DDTHH:MM:SS.mmmZ timestamp, got \"", text, "\""));
  }
  auto date = ParseDate(text.substr(0, 10));
  if (!date.ok()) return date.status();
  const int h = ToInt(text.substr(11, 2));
  const int m = ToInt(text.substr(14, 2));
  const int s = ToInt(text.substr(17, 2));
  if (h > 23 || m > 59 || s > 59) {
    return absl::InvalidArgumentError(
        StrCat("time of day out of range in \"", text, "\""));
  }
  using std::chrono::hours;
  using std::chrono::milliseconds;
  using std::chrono::minutes;
  using std::chrono::seconds;
  return Timestamp{std::chrono::sys_days{*date}} + hours{h} + minutes{m} +
         seconds{s} + milliseconds{ToInt(text.substr(20, 3))};
}

std::string FormatTimestamp(Timestamp ts) {
  const auto day = std::chrono::floor<std::chrono::days>(ts);
  const Date date{day};
  const std::chrono::hh_mm_ss tod{ts - day};
  return fmt::format("{}T{:02}:{:02}:{:02}.{:03}Z", FormatDate(date),
                         tod.hours().count(), tod.minutes().count(),
                         tod.seconds().count(), tod.subseconds().count());
}

absl::StatusOr<DateRange> MakeDateRange(std::string_view first,
                                        std::string_view last) {
  auto a = ParseDate(first);
  if (!a.ok()) return a.status();
  auto b = ParseDate(last);
  if (!b.ok()) return b.status();
  if (*b < *a) {
    return absl::InvalidArgumentError(
        StrCat("date range ends before it starts: ", first, "..", last));
  }
  return DateRange{*a, *b};
}

}  // namespace trackaudit
