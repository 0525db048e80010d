/*
 * Copyright 2026 The Consortium Archive Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace archive {

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::year_month_day;

/// Injectable wall clock; tests substitute a manual one.
using Clock = std::function<Timestamp()>;

Clock system_clock();

/// "2026-10-18T09:30:00Z"
std::string format_timestamp(Timestamp t);
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// "2026-10-18"
std::string format_date(Date d);
std::optional<Date> parse_date(std::string_view text);

Date date_of(Timestamp t);

/// Truncates to the start of the containing hour.
Timestamp truncate_to_hour(Timestamp t);

/// Manually advanced clock for tests and simulations.
class ManualClock {
 public:
  explicit ManualClock(Timestamp start) : now_(start) {}
  Timestamp now() const { return now_; }
  void advance(std::chrono::seconds by) { now_ += by; }
  void set(Timestamp t) { now_ = t; }
  Clock as_clock() {
    return [this] { return now_; };
  }

 private:
  Timestamp now_;
};

}  // namespace archive
