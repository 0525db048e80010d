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

#include "archive/usage.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "archive/crypto.hpp"
#include "archive/error.hpp"

namespace archive {

using nlohmann::json;

std::string anonymize(std::string_view identifier, std::span<const std::uint8_t> salt) {
  crypto::Sha256 h;
  h.update(salt);
  h.update(identifier);
  return h.finish_hex();
}

// ---------------------------------------------------------------------------
// referrer domains

namespace {

// Multi-label public suffixes; any single trailing label is treated as a
// public suffix as well.
constexpr std::array<std::string_view, 32> kMultiLabelSuffixes = {
    "co.uk",  "ac.uk",  "org.uk", "gov.uk", "me.uk",  "com.au", "edu.au", "org.au",
    "net.au", "gov.au", "co.jp",  "ac.jp",  "ne.jp",  "or.jp",  "co.nz",  "ac.nz",
    "com.br", "com.cn", "edu.cn", "ac.cn",  "co.in",  "ac.in",  "co.za",  "ac.za",
    "co.at",  "ac.at",  "co.kr",  "ac.kr",  "com.tw", "edu.tw", "github.io", "gv.at",
};

std::string_view host_of(std::string_view url) {
  if (auto p = url.find("://"); p != std::string_view::npos) url.remove_prefix(p + 3);
  else if (url.starts_with("//")) url.remove_prefix(2);
  url = url.substr(0, url.find_first_of("/?#"));
  if (auto at = url.rfind('@'); at != std::string_view::npos) url.remove_prefix(at + 1);
  if (url.starts_with('[')) return {};  // IPv6 literal
  return url.substr(0, url.find(':'));
}

bool is_ipv4_literal(std::string_view host) {
  in_addr addr{};
  return inet_pton(AF_INET, std::string(host).c_str(), &addr) == 1;
}

}  // namespace

std::string registrable_domain(std::string_view url) {
  std::string host(host_of(url));
  std::transform(host.begin(), host.end(), host.begin(), [](unsigned char c) { return std::tolower(c); });
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (host.empty() || is_ipv4_literal(host)) return {};
  for (char c : host) {
    if (std::isalnum(static_cast<unsigned char>(c)) == 0 && c != '-' && c != '.') return {};
  }

  std::size_t suffix_labels = 1;
  for (auto suffix : kMultiLabelSuffixes) {
    if (host == suffix) return {};
    if (host.size() > suffix.size() && host.ends_with(suffix) && host[host.size() - suffix.size() - 1] == '.') {
      suffix_labels = std::max<std::size_t>(suffix_labels, std::count(suffix.begin(), suffix.end(), '.') + 1);
    }
  }
  // Keep suffix_labels + 1 trailing labels.
  std::size_t pos = host.size();
  for (std::size_t i = 0; i < suffix_labels + 1; ++i) {
    auto dot = host.rfind('.', pos == 0 ? 0 : pos - 1);
    if (dot == std::string::npos || pos == 0) {
      return i == suffix_labels ? host : std::string{};
    }
    pos = dot;
  }
  return host.substr(pos + 1);
}

// ---------------------------------------------------------------------------
// country table

namespace {

struct ParsedAddress {
  std::array<std::uint8_t, 16> bytes{};
  bool v4 = false;
};

std::optional<ParsedAddress> parse_address(std::string_view text) {
  ParsedAddress out;
  std::string s(text);
  in_addr v4{};
  if (inet_pton(AF_INET, s.c_str(), &v4) == 1) {
    out.v4 = true;
    std::memcpy(out.bytes.data(), &v4, 4);
    return out;
  }
  in6_addr v6{};
  if (inet_pton(AF_INET6, s.c_str(), &v6) == 1) {
    std::memcpy(out.bytes.data(), &v6, 16);
    static constexpr std::array<std::uint8_t, 12> kMapped = {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0xff, 0xff};
    if (std::equal(kMapped.begin(), kMapped.end(), out.bytes.begin())) {
      std::array<std::uint8_t, 16> b{};
      std::copy(out.bytes.begin() + 12, out.bytes.end(), b.begin());
      out.bytes = b;
      out.v4 = true;
    }
    return out;
  }
  return std::nullopt;
}

bool prefix_matches(const std::array<std::uint8_t, 16>& a, const std::array<std::uint8_t, 16>& b, int bits) {
  int full = bits / 8;
  if (!std::equal(a.begin(), a.begin() + full, b.begin())) return false;
  int rest = bits % 8;
  if (rest == 0) return true;
  const std::uint8_t mask = static_cast<std::uint8_t>(0xff << (8 - rest));
  return (a[full] & mask) == (b[full] & mask);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) s.remove_suffix(1);
  return s;
}

}  // namespace

void CountryTable::add(std::string_view cidr, std::string_view country) {
  auto slash = cidr.find('/');
  auto addr = parse_address(cidr.substr(0, slash));
  if (!addr) throw Error(ErrorCode::bad_request, "bad-cidr", "invalid CIDR " + std::string(cidr));
  // IPv4-mapped IPv6 networks are stored as IPv4 with the prefix shifted.
  const bool mapped = addr->v4 && cidr.substr(0, slash).find(':') != std::string_view::npos;
  int bits = addr->v4 ? 32 : 128;
  if (slash != std::string_view::npos) {
    auto len = cidr.substr(slash + 1);
    auto [p, ec] = std::from_chars(len.data(), len.data() + len.size(), bits);
    if (mapped) bits -= 96;
    if (ec != std::errc{} || p != len.data() + len.size() || bits < 0 || bits > (addr->v4 ? 32 : 128)) {
      throw Error(ErrorCode::bad_request, "bad-cidr", "invalid prefix length in " + std::string(cidr));
    }
  }
  if (country.size() != 2) throw Error(ErrorCode::bad_request, "bad-cidr", "country must be alpha-2");
  std::string cc(country);
  std::transform(cc.begin(), cc.end(), cc.begin(), [](unsigned char c) { return std::toupper(c); });
  entries_.push_back({addr->bytes, bits, addr->v4, std::move(cc)});
}

CountryTable CountryTable::parse(std::string_view text) {
  CountryTable table;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    auto line = trim(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (!line.empty() && line.front() != '#') {
      auto tab = line.find('\t');
      if (tab == std::string_view::npos) {
        throw Error(ErrorCode::bad_request, "bad-cidr", "expected CIDR<TAB>CC: " + std::string(line));
      }
      table.add(trim(line.substr(0, tab)), trim(line.substr(tab + 1)));
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return table;
}

CountryTable CountryTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::bad_request, "cidr-unreadable", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string CountryTable::lookup(std::string_view address) const {
  auto addr = parse_address(address);
  if (!addr) return "ZZ";
  const Entry* best = nullptr;
  for (const auto& e : entries_) {
    if (e.v4 != addr->v4) continue;
    if (prefix_matches(e.prefix, addr->bytes, e.bits) && (best == nullptr || e.bits > best->bits)) best = &e;
  }
  return best != nullptr ? best->country : "ZZ";
}

// ---------------------------------------------------------------------------
// aggregation

namespace {

using VisitKey = std::pair<std::string, std::int64_t>;  // (visitor_hash, period_id)

std::vector<std::pair<std::string, std::int64_t>> top_referrers(const std::map<std::string, std::int64_t>& counts) {
  std::vector<std::pair<std::string, std::int64_t>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (out.size() > kTopReferrers) out.resize(kTopReferrers);
  return out;
}

}  // namespace

UsageAggregate aggregate_events(const std::vector<UsageEvent>& events) {
  UsageAggregate agg;
  std::set<VisitKey> views, downloads;
  std::map<std::string, std::set<VisitKey>> file_visits, referrer_visits;
  for (const auto& e : events) {
    VisitKey key{e.visitor_hash, e.period_id};
    if (e.type == EventType::view) {
      // The first event of a visit decides its country.
      if (views.insert(key).second) ++agg.views_by_country[e.country];
    } else {
      if (downloads.insert(key).second) ++agg.downloads_by_country[e.country];
      file_visits[e.file_name].insert(key);
    }
    if (!e.referrer_domain.empty()) referrer_visits[e.referrer_domain].insert(key);
  }
  agg.unique_views = static_cast<std::int64_t>(views.size());
  agg.unique_downloads = static_cast<std::int64_t>(downloads.size());
  for (const auto& [file, visits] : file_visits) agg.downloads_by_file[file] = static_cast<std::int64_t>(visits.size());
  std::map<std::string, std::int64_t> referrers;
  for (const auto& [domain, visits] : referrer_visits) referrers[domain] = static_cast<std::int64_t>(visits.size());
  agg.top_referrer_domains = top_referrers(referrers);
  return agg;
}

UsageAggregate sum_aggregates(const std::vector<UsageAggregate>& parts) {
  UsageAggregate total;
  std::map<std::string, std::int64_t> referrers;
  for (const auto& p : parts) {
    total.unique_views += p.unique_views;
    total.unique_downloads += p.unique_downloads;
    for (const auto& [k, v] : p.views_by_country) total.views_by_country[k] += v;
    for (const auto& [k, v] : p.downloads_by_country) total.downloads_by_country[k] += v;
    for (const auto& [k, v] : p.downloads_by_file) total.downloads_by_file[k] += v;
    for (const auto& [k, v] : p.top_referrer_domains) referrers[k] += v;
  }
  total.top_referrer_domains = top_referrers(referrers);
  return total;
}

json aggregate_to_json(const UsageAggregate& a) {
  json referrers = json::array();
  for (const auto& [domain, count] : a.top_referrer_domains) referrers.push_back({{"domain", domain}, {"count", count}});
  return json{
      {"unique_views", a.unique_views},
      {"unique_downloads", a.unique_downloads},
      {"views_by_country", a.views_by_country},
      {"downloads_by_country", a.downloads_by_country},
      {"downloads_by_file", a.downloads_by_file},
      {"top_referrer_domains", std::move(referrers)},
  };
}

// ---------------------------------------------------------------------------

UsageTracker::UsageTracker(PrimaryStore& store, CountryTable countries, Clock clock, std::chrono::seconds salt_period)
    : store_(store), countries_(std::move(countries)), clock_(std::move(clock)), period_(salt_period) {}

SaltState UsageTracker::rotate_in(PrimaryStore::Tx& tx, Timestamp now) {
  auto active = tx.active_salt();
  if (active && now < active->period_start + period_) return *active;
  SaltState next{crypto::random_bytes(kSaltBytes), now, active ? active->period_id + 1 : 1};
  tx.replace_salt(next);
  return next;
}

SaltState UsageTracker::rotate_salt(Timestamp now) {
  return store_.transact([&](PrimaryStore::Tx& tx) { return rotate_in(tx, now); });
}

void UsageTracker::ingest(EventType type, const std::string& record_id, const std::string& version_id,
                          const std::string& file_name, const RequesterContext& ctx) {
  const Timestamp now = clock_();
  UsageEvent e;
  e.type = type;
  e.version_id = version_id;
  e.record_id = record_id;
  e.file_name = file_name;
  e.country = countries_.lookup(ctx.remote_address);
  e.referrer_domain = ctx.referrer ? registrable_domain(*ctx.referrer) : std::string{};
  e.occurred_at = truncate_to_hour(now);
  store_.transact([&](PrimaryStore::Tx& tx) {
    const auto salt = rotate_in(tx, now);
    e.visitor_hash = anonymize(ctx.personal_identifier, salt.value);
    e.period_id = salt.period_id;
    tx.insert_event(e);
  });
}

void UsageTracker::ingest_view(const std::string& record_id, const std::string& version_id,
                               const RequesterContext& ctx) {
  ingest(EventType::view, record_id, version_id, {}, ctx);
}

void UsageTracker::ingest_download(const std::string& record_id, const std::string& version_id,
                                   const std::string& file_name, const RequesterContext& ctx) {
  ingest(EventType::download, record_id, version_id, file_name, ctx);
}

UsageAggregate UsageTracker::stats_for_version(const std::string& version_id) {
  return aggregate_events(store_.transact([&](PrimaryStore::Tx& tx) { return tx.events_for_version(version_id); }));
}

UsageAggregate UsageTracker::stats_cumulative(const std::vector<std::string>& version_ids) {
  std::vector<UsageAggregate> parts;
  parts.reserve(version_ids.size());
  for (const auto& id : version_ids) parts.push_back(stats_for_version(id));
  return sum_aggregates(parts);
}

}  // namespace archive
