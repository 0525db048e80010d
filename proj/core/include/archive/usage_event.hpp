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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "archive/time.hpp"

namespace archive {

enum class EventType { view, download };

inline std::string_view to_string(EventType t) { return t == EventType::view ? "view" : "download"; }

/// Persisted, anonymized usage event. There is deliberately no field for a
/// raw user id or address.
struct UsageEvent {
  std::int64_t id = 0;
  EventType type = EventType::view;
  std::string version_id;
  std::string record_id;
  std::string file_name;  // downloads only
  std::string visitor_hash;
  std::string country;
  std::string referrer_domain;
  std::int64_t period_id = 0;
  Timestamp occurred_at{};  // truncated to the hour
};

struct SaltState {
  std::vector<std::uint8_t> value;
  Timestamp period_start{};
  std::int64_t period_id = 0;
};

}  // namespace archive
