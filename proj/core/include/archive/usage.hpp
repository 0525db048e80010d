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

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "archive/store.hpp"
#include "archive/time.hpp"
#include "archive/usage_event.hpp"

namespace archive {

/// Who generated a usage event. Lives only for the duration of an ingest call.
struct RequesterContext {
  /// User id if authenticated, otherwise the remote address.
  std::string personal_identifier;
  std::string remote_address;
  std::optional<std::string> referrer;
};

inline constexpr std::size_t kSaltBytes = 32;

/// Hex SHA-256 of salt || identifier (64 characters).
std::string anonymize(std::string_view identifier, std::span<const std::uint8_t> salt);

/// Registrable domain of a URL's host ("https://sub.example.org/x" -> "example.org").
/// Empty for IP literals, unparsable input, or bare public suffixes.
std::string registrable_domain(std::string_view url);

/// Static CIDR -> ISO-3166 alpha-2 table with longest-prefix matching.
class CountryTable {
 public:
  CountryTable() = default;

  /// One `CIDR<TAB>CC` per line; blank lines and '#' comments are skipped.
  static CountryTable parse(std::string_view text);
  static CountryTable load(const std::filesystem::path& path);

  void add(std::string_view cidr, std::string_view country);
  /// "ZZ" when no prefix matches or the address is unparsable.
  std::string lookup(std::string_view address) const;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::array<std::uint8_t, 16> prefix{};
    int bits = 0;
    bool v4 = false;
    std::string country;
  };
  std::vector<Entry> entries_;
};

struct UsageAggregate {
  std::int64_t unique_views = 0;
  std::int64_t unique_downloads = 0;
  std::map<std::string, std::int64_t> views_by_country;
  std::map<std::string, std::int64_t> downloads_by_country;
  std::map<std::string, std::int64_t> downloads_by_file;
  /// Sorted by count descending, then domain; at most kTopReferrers entries.
  std::vector<std::pair<std::string, std::int64_t>> top_referrer_domains;

  bool operator==(const UsageAggregate&) const = default;
};

inline constexpr std::size_t kTopReferrers = 10;

/// Deduplicated counts for one version's events: a view or download counts
/// once per distinct (visitor_hash, period_id).
UsageAggregate aggregate_events(const std::vector<UsageEvent>& events);

/// Element-wise sum (referrer ranking is recomputed over the summed counts).
UsageAggregate sum_aggregates(const std::vector<UsageAggregate>& parts);

nlohmann::json aggregate_to_json(const UsageAggregate& a);

/// Salt lifecycle, ingestion and aggregation over the primary store.
class UsageTracker {
 public:
  UsageTracker(PrimaryStore& store, CountryTable countries, Clock clock,
               std::chrono::seconds salt_period = std::chrono::hours{24});

  /// Replaces the salt iff `now >= period_start + period`; returns the active salt.
  SaltState rotate_salt(Timestamp now);
  SaltState rotate_salt() { return rotate_salt(clock_()); }

  void ingest_view(const std::string& record_id, const std::string& version_id, const RequesterContext& ctx);
  void ingest_download(const std::string& record_id, const std::string& version_id, const std::string& file_name,
                       const RequesterContext& ctx);

  UsageAggregate stats_for_version(const std::string& version_id);
  UsageAggregate stats_cumulative(const std::vector<std::string>& version_ids);

  const CountryTable& countries() const { return countries_; }

 private:
  SaltState rotate_in(PrimaryStore::Tx& tx, Timestamp now);
  void ingest(EventType type, const std::string& record_id, const std::string& version_id,
              const std::string& file_name, const RequesterContext& ctx);

  PrimaryStore& store_;
  CountryTable countries_;
  Clock clock_;
  std::chrono::seconds period_;
};

}  // namespace archive
