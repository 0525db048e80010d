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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Every threshold is a named constant
// below.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "archive/archive.hpp"
#include "archive/crypto.hpp"
#include "archive/error.hpp"
#include "archive/export.hpp"
#include "archive/rest_server.hpp"
#include "archive/usage.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "permission_oracle.hpp"
#include "permission_world.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace archive;
using namespace std::chrono_literals;

namespace {

// -- pinned tolerances -----------------------------------------------------------
constexpr auto kPermissionBudget = 10s;
constexpr auto kStatsBudget = 10s;
constexpr auto kCliBudget = 60s;
constexpr int kStatsEvents = 1000;
constexpr int kStatsVisitors = 100;
constexpr int kStatsPeriods = 3;
constexpr std::uint64_t kQuotaLimit = 10ull << 20;
constexpr std::uint64_t kMiB = 1ull << 20;
constexpr int kMutationAttempts = 500;
constexpr int kSearchRecords = 50;
constexpr int kSearchUsers = 10;
constexpr int kSearchTrials = 20;
constexpr int kExportRecords = 100;
constexpr int kPublishFiles = 3;
constexpr int kExitChecksum = 5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream out;
  out.precision(2);
  out << std::fixed << s << "s";
  return out.str();
}

// -- subprocess helpers ------------------------------------------------------------

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

struct CliResult {
  int exit_code = -1;
  std::string out;
};

// Runs the command-line client with a clean environment apart from `env`.
CliResult run_cli(const std::vector<std::string>& args, const std::map<std::string, std::string>& env) {
  std::string cmd = "env -i PATH=/usr/bin:/bin HOME=/nonexistent ARCHIVE_CONFIG=/nonexistent";
  for (const auto& [k, v] : env) cmd += " " + k + "=" + shell_quote(v);
  cmd += " " + shell_quote(ARCHIVE_CLI_PATH);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>/dev/null";
  CliResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

int free_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

// An archive served over HTTP on a loopback port whose base URL is its own address.
struct LiveArchive {
  testing::TempDir dir;
  std::unique_ptr<Archive> archive;
  std::unique_ptr<RestServer> server;
  std::string url;

  LiveArchive() {
    const int port = free_port();
    url = "http://127.0.0.1:" + std::to_string(port);
    auto cfg = testing::test_config(dir.path() / "data");
    cfg.base_url = url;
    archive = std::make_unique<Archive>(cfg);
    archive->start_background_indexing();
    server = std::make_unique<RestServer>(*archive);
    server->start("127.0.0.1", port);
  }
  ~LiveArchive() {
    server->stop();
    archive->stop_background_indexing();
  }
};

void write_file(const fs::path& p, const std::string& bytes) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << bytes;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// -- 1: permission matrix -----------------------------------------------------------

Outcome permission_matrix() {
  const auto start = Clock::now();
  testing::PermissionWorld world;
  int cells = 0, mismatches = 0;
  std::string first_mismatch;
  for (auto who : oracle::kAllWho) {
    for (auto where : oracle::kAllWhere) {
      const auto row = oracle::expected(who, where);
      const auto& version = world.versions.at(where);
      for (std::size_t a = 0; a < kAllActions.size(); ++a) {
        const bool got = world.archive->evaluate(world.caller(who, where), kAllActions[a], version).allowed;
        ++cells;
        if (got != (row[a] == 'Y')) {
          if (mismatches++ == 0) {
            first_mismatch = std::string(oracle::name(who)) + "/" + std::string(oracle::name(where)) + "/" +
                             std::string(to_string(kAllActions[a]));
          }
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  const bool fast = elapsed < std::chrono::duration<double>(kPermissionBudget).count();
  std::string detail = std::to_string(cells) + " cells, " + std::to_string(mismatches) + " mismatches, " +
                       fmt_seconds(elapsed);
  if (!first_mismatch.empty()) detail += ", first " + first_mismatch;
  return {mismatches == 0 && cells == 9 * 3 * 8 && fast, detail};
}

// -- 2: usage deduplication ------------------------------------------------------------

// Addresses with their expected country under tests/data/countries.tsv.
const std::vector<std::pair<std::string, std::string>> kAddresses = {
    {"10.9.9.9", "DK"},     {"10.1.9.9", "SE"},        {"10.1.2.3", "NO"},  {"192.168.4.4", "CH"},
    {"172.20.0.1", "DE"},   {"203.0.113.7", "FR"},     {"198.51.100.9", "IT"}, {"2001:db8:5::1", "NL"},
    {"2001:db8:1::9", "BE"}, {"::ffff:100.64.1.1", "US"}, {"8.8.8.8", "ZZ"},
};

Outcome stats_dedup() {
  const auto start = Clock::now();
  PrimaryStore store{":memory:"};
  const Timestamp t0 = *parse_timestamp("2025-01-06T00:00:00Z");
  ManualClock clock{t0};
  UsageTracker tracker{store, CountryTable::load(testing::test_data_dir() / "countries.tsv"), clock.as_clock(),
                       std::chrono::hours{24}};

  std::mt19937_64 rng(2024);
  const std::vector<std::string> versions = {"rec0000000-v1", "rec0000000-v2", "rec0000000-v3"};
  const std::vector<std::string> files = {"a.csv", "b.csv"};
  struct Visitor {
    std::string id;
    std::string address;
    std::string country;
  };
  std::vector<Visitor> visitors;
  for (int i = 0; i < kStatsVisitors; ++i) {
    const auto& [addr, cc] = kAddresses[static_cast<std::size_t>(i) % kAddresses.size()];
    visitors.push_back({"visitor-" + std::to_string(i) + "@example.org", addr, cc});
  }

  // Event offsets over 2.5 days so that three salt periods occur.
  std::vector<std::int64_t> offsets(kStatsEvents);
  std::uniform_int_distribution<std::int64_t> when(1, 60 * 3600 - 1);
  for (auto& o : offsets) o = when(rng);
  offsets[0] = 0;
  std::sort(offsets.begin(), offsets.end());

  // Reference model: periods restart at the first event at or past the end
  // of the current one.
  std::int64_t period_start = 0;
  int period = 0;
  std::map<std::string, std::set<std::pair<int, int>>> views, downloads;
  std::map<std::string, std::map<std::string, std::set<std::pair<int, int>>>> per_file;
  std::map<std::string, std::map<std::string, std::int64_t>> view_countries;
  std::set<std::string> raw_ids;

  for (int i = 0; i < kStatsEvents; ++i) {
    if (offsets[static_cast<std::size_t>(i)] >= period_start + 24 * 3600) {
      period_start = offsets[static_cast<std::size_t>(i)];
      ++period;
    }
    clock.set(t0 + std::chrono::seconds(offsets[static_cast<std::size_t>(i)]));
    const int who = static_cast<int>(rng() % visitors.size());
    const auto& visitor = visitors[static_cast<std::size_t>(who)];
    const std::string& version = versions[rng() % versions.size()];
    const RequesterContext ctx{visitor.id, visitor.address, std::nullopt};
    raw_ids.insert(visitor.id);
    if (rng() % 3 == 0) {
      const std::string& file = files[rng() % files.size()];
      tracker.ingest_download("rec0000000", version, file, ctx);
      downloads[version].insert({who, period});
      per_file[version][file].insert({who, period});
    } else {
      tracker.ingest_view("rec0000000", version, ctx);
      if (views[version].insert({who, period}).second) ++view_countries[version][visitor.country];
    }
  }

  int mismatches = 0;
  std::int64_t expected_total = 0;
  for (const auto& v : versions) {
    const auto agg = tracker.stats_for_version(v);
    expected_total += static_cast<std::int64_t>(views[v].size());
    if (agg.unique_views != static_cast<std::int64_t>(views[v].size())) ++mismatches;
    if (agg.unique_downloads != static_cast<std::int64_t>(downloads[v].size())) ++mismatches;
    if (agg.views_by_country != view_countries[v]) ++mismatches;
    for (const auto& f : files) {
      const auto it = agg.downloads_by_file.find(f);
      const std::int64_t got = it == agg.downloads_by_file.end() ? 0 : it->second;
      if (got != static_cast<std::int64_t>(per_file[v][f].size())) ++mismatches;
    }
  }
  if (tracker.stats_cumulative(versions).unique_views != expected_total) ++mismatches;

  const std::string dump = store.dump_all_rows();
  int leaks = 0;
  for (const auto& id : raw_ids) leaks += dump.find(id) != std::string::npos;
  for (const auto& [addr, _] : kAddresses) leaks += dump.find(addr) != std::string::npos;

  const double elapsed = seconds_since(start);
  const bool fast = elapsed < std::chrono::duration<double>(kStatsBudget).count();
  return {mismatches == 0 && leaks == 0 && period + 1 == kStatsPeriods && fast,
          std::to_string(kStatsEvents) + " events, " + std::to_string(period + 1) + " periods, " +
              std::to_string(mismatches) + " count mismatches, " + std::to_string(leaks) + " raw identifiers stored, " +
              fmt_seconds(elapsed)};
}

// -- 3: salt rotation -------------------------------------------------------------------

Outcome salt_rotation() {
  PrimaryStore store{":memory:"};
  const Timestamp t0 = *parse_timestamp("2025-02-01T12:00:00Z");
  ManualClock clock{t0};
  UsageTracker tracker{store, CountryTable{}, clock.as_clock(), std::chrono::hours{24}};
  const RequesterContext ctx{"same-visitor", "10.0.0.1", std::nullopt};

  tracker.ingest_view("r", "r-v1", ctx);
  clock.set(t0 + 24h - 1s);
  tracker.ingest_view("r", "r-v1", ctx);
  const auto before = tracker.stats_for_version("r-v1").unique_views;
  clock.set(t0 + 24h);
  tracker.ingest_view("r", "r-v1", ctx);
  const auto after = tracker.stats_for_version("r-v1").unique_views;
  return {before == 1 && after == 2,
          "unique views " + std::to_string(before) + " within the period, " + std::to_string(after) +
              " after rotation"};
}

// -- 4: quota ------------------------------------------------------------------------------

Outcome quota() {
  testing::TempDir dir;
  auto cfg = testing::test_config(dir.path());
  cfg.record_quota = kQuotaLimit;
  Archive archive(cfg);
  const Caller alice = Caller::user("alice");
  const auto id = archive.create_draft(alice, testing::sample_metadata("Quota")).record_id;
  archive.attach_bytes(alice, id, "one", std::string(4 * kMiB, '1'));
  archive.attach_bytes(alice, id, "two", std::string(4 * kMiB, '2'));
  bool rejected = false;
  try {
    archive.attach_bytes(alice, id, "three", std::string(4 * kMiB, '3'));
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::quota_exceeded;
  }
  bool boundary_ok = false;
  try {
    archive.attach_bytes(alice, id, "four", std::string(2 * kMiB, '4'));
    boundary_ok = true;
  } catch (const Error&) {
  }
  const auto total = archive.read_version(alice, id, std::nullopt).total_size();
  return {rejected && boundary_ok && total == kQuotaLimit,
          std::string("4+4+4 MiB ") + (rejected ? "rejected" : "accepted") + ", 4+4+2 MiB " +
              (boundary_ok ? "accepted" : "rejected") + ", stored " + std::to_string(total) + " bytes"};
}

// -- 5: immutability ------------------------------------------------------------------------

// Digest of a version's file list. Metadata of a shared version stays editable
// by its owner, so it is deliberately left out.
std::string manifest_hash(const RecordVersion& v) {
  std::vector<FileEntry> files = v.files;
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  std::string text;
  for (const auto& f : files) text += f.name + " " + std::to_string(f.size) + " " + f.checksum + "\n";
  return crypto::sha256_hex(text);
}

Outcome immutability() {
  testing::TempDir dir;
  Archive archive(testing::test_config(dir.path()));
  const Caller alice = Caller::user("alice");
  const auto id = archive.create_draft(alice, testing::sample_metadata("Frozen")).record_id;
  archive.attach_bytes(alice, id, "data.bin", "original bytes");
  archive.share(alice, id, Tier::community, "alpha");
  const auto edit_token = archive.mint_share_link(alice, id, LinkPermission::edit).token;

  std::map<int, std::string> frozen;  // version index -> manifest when first shared
  frozen[1] = manifest_hash(archive.read_version(alice, id, 1));

  const std::vector<Caller> callers = {alice, Caller::user("bob"), Caller{"bob", edit_token}, Caller::user("carol"),
                                       Caller::anonymous(), Caller::link(edit_token)};
  std::mt19937_64 rng(77);
  int accepted = 0;
  for (int i = 0; i < kMutationAttempts; ++i) {
    const Caller& c = callers[rng() % callers.size()];
    const std::optional<int> target =
        rng() % 2 == 0 ? std::optional<int>(1 + static_cast<int>(rng() % frozen.size())) : std::nullopt;
    try {
      switch (rng() % 7) {
        case 0: archive.attach_bytes(c, id, "f" + std::to_string(i), "payload " + std::to_string(i)); break;
        case 1: archive.remove_file(c, id, "data.bin"); break;
        case 2: archive.update_metadata(c, id, target, testing::sample_metadata("Edit " + std::to_string(i))); break;
        case 3: archive.new_version(c, id, rng() % 2 == 0); break;
        case 4: {
          const auto v = archive.share(c, id, Tier::community, "alpha");
          frozen.emplace(v.version_index, manifest_hash(v));
          break;
        }
        case 5: archive.discard_draft(c, id); break;
        case 6: {
          const auto v = archive.share(c, id, Tier::consortium, std::nullopt);
          frozen.emplace(v.version_index, manifest_hash(v));
          break;
        }
      }
      ++accepted;
    } catch (const Error&) {
    }
  }

  const auto versions = archive.list_versions(alice, id);
  bool chain_ok = !versions.empty();
  for (std::size_t i = 0; i < versions.size(); ++i) chain_ok &= versions[i].version_index == static_cast<int>(i + 1);
  int changed = 0;
  for (const auto& [index, hash] : frozen) {
    const auto v = archive.read_version(alice, id, index);
    if (v.state != VersionState::shared || manifest_hash(v) != hash) ++changed;
  }
  const bool v1_bytes =
      read_file(archive.open_file(Caller::user("bob"), id, 1, "data.bin").path) == "original bytes";
  if (!v1_bytes) ++changed;
  return {changed == 0 && chain_ok,
          std::to_string(kMutationAttempts) + " attempts, " + std::to_string(accepted) + " accepted, " +
              std::to_string(versions.size()) + " versions" + (chain_ok ? " in an unbroken chain" : " with a gap") +
              ", " + std::to_string(frozen.size()) + " shared manifests checked, " + std::to_string(changed) +
              " changed"};
}

// -- 6: search equivalence -----------------------------------------------------------------

const std::vector<std::string> kVocabulary = {"lithium", "sulfide", "cathode", "anode",   "impedance",
                                              "spectra", "sodium",  "polymer", "solvent", "interface"};

std::vector<std::string> words_of(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) != 0) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Brute force over the primary store, independent of the index and of the
// library's permission code.
std::set<std::string> reference_search(PrimaryStore& store, const std::optional<std::string>& user,
                                       const SearchQuery& q, const std::string& umbrella) {
  std::set<std::string> out;
  if (!user) return out;
  store.transact([&](PrimaryStore::Tx& tx) {
    const auto account = tx.find_user(*user);
    if (!account || !account->email_confirmed) return;
    for (const auto& vid : tx.shared_version_ids()) {
      const auto v = tx.load_version(vid);
      if (!v) continue;
      const std::string community = v->tier == Tier::consortium ? umbrella : v->shared_with.value_or("");
      const bool readable = v->owner == *user || (v->tier == Tier::consortium
                                                       ? !account->memberships.empty()
                                                       : account->memberships.contains(community));
      if (!readable) continue;
      if (q.community && *q.community != community) continue;
      bool keywords_ok = true;
      for (const auto& k : q.keywords) {
        keywords_ok &= std::find(v->metadata.keywords.begin(), v->metadata.keywords.end(), k) !=
                       v->metadata.keywords.end();
      }
      if (!keywords_ok) continue;
      if (!q.text.empty()) {
        std::set<std::string> haystack;
        for (const auto& w : words_of(v->metadata.title)) haystack.insert(w);
        for (const auto& k : v->metadata.keywords) {
          for (const auto& w : words_of(k)) haystack.insert(w);
        }
        bool hit = false;
        for (const auto& w : words_of(q.text)) hit |= haystack.contains(w);
        if (!hit) continue;
      }
      out.insert(vid);
    }
  });
  return out;
}

Outcome search_equivalence() {
  testing::TempDir dir;
  Archive archive(testing::test_config(dir.path()));
  std::vector<std::string> users = {"alice", "bob", "carol", "dave", "mallory", "erin"};
  const std::vector<std::string> projects = {"alpha", "beta", "gamma"};
  std::mt19937_64 rng(5150);
  for (int i = static_cast<int>(users.size()); i < kSearchUsers; ++i) {
    UserSeed seed{"user" + std::to_string(i), "user" + std::to_string(i) + "@example.org", true, {}};
    if (rng() % 4 != 0) seed.memberships.insert(projects[rng() % projects.size()]);
    archive.upsert_user(seed);
    users.push_back(seed.user_id);
  }

  auto pick = [&](const std::vector<std::string>& from) { return from[rng() % from.size()]; };
  int created = 0;
  while (created < kSearchRecords) {
    const std::string owner = pick(users);
    const auto account = archive.user(owner);
    if (!account.email_confirmed) continue;
    std::vector<std::string> own_projects;
    for (const auto& m : account.memberships) {
      if (m != "consortium") own_projects.push_back(m);
    }
    auto m = testing::sample_metadata(pick(kVocabulary) + " " + pick(kVocabulary) + " study " +
                                      std::to_string(created));
    m.keywords = {pick(kVocabulary)};
    if (const auto second = pick(kVocabulary); second != m.keywords[0]) m.keywords.push_back(second);
    const Caller c = Caller::user(owner);
    const auto id = archive.create_draft(c, m).record_id;
    ++created;
    const auto roll = rng() % 10;
    if (roll < 2) continue;  // stays a draft
    if (roll < 6 && !own_projects.empty()) {
      archive.share(c, id, Tier::community, pick(own_projects));
    } else {
      archive.share(c, id, Tier::consortium, std::nullopt);
    }
    if (rng() % 3 == 0) {
      archive.new_version(c, id, false);
      m.title = pick(kVocabulary) + " revision";
      archive.update_metadata(c, id, std::nullopt, m);
      if (rng() % 2 == 0) archive.share(c, id, Tier::consortium, std::nullopt);
    }
  }
  archive.flush_index();

  std::vector<std::optional<std::string>> askers(users.begin(), users.end());
  askers.push_back(std::nullopt);
  int mismatches = 0;
  std::string first_mismatch;
  std::int64_t hits_seen = 0;
  for (int trial = 0; trial < kSearchTrials; ++trial) {
    const auto asker = askers[rng() % askers.size()];
    SearchQuery q;
    if (rng() % 3 != 0) q.text = pick(kVocabulary);
    if (rng() % 3 == 0) q.community = rng() % 4 == 0 ? std::string("consortium") : pick(projects);
    if (rng() % 4 == 0) q.keywords = {pick(kVocabulary)};
    q.page_size = 7;

    std::set<std::string> got;
    std::int64_t total = 0;
    for (q.page = 1;; ++q.page) {
      const auto page = archive.search(asker ? Caller::user(*asker) : Caller::anonymous(), q);
      total = page.total;
      for (const auto& h : page.hits) got.insert(h.doc.version_id);
      if (page.hits.empty() || static_cast<std::int64_t>(q.page) * q.page_size >= page.total) break;
    }
    const auto expected = reference_search(archive.store(), asker, q, "consortium");
    if (got != expected || total != static_cast<std::int64_t>(expected.size())) {
      if (mismatches++ == 0) {
        first_mismatch = "asker " + asker.value_or("anonymous") + " q='" + q.text + "' community=" +
                         q.community.value_or("-") + " keyword=" + (q.keywords.empty() ? "-" : q.keywords[0]);
        for (const auto& id : got) {
          if (!expected.contains(id)) first_mismatch += " extra:" + id;
        }
        for (const auto& id : expected) {
          if (!got.contains(id)) first_mismatch += " missing:" + id;
        }
      }
    }
    hits_seen += total;
  }
  const bool consistent = archive.verify_consistency().empty();
  return {mismatches == 0 && consistent && hits_seen > 0,
          std::to_string(kSearchTrials) + " queries over " + std::to_string(kSearchRecords) + " records, " +
              std::to_string(hits_seen) + " hits, " + std::to_string(mismatches) + " mismatches, index " +
              (consistent ? "consistent" : "INCONSISTENT") +
              (first_mismatch.empty() ? "" : ", first " + first_mismatch)};
}

// -- 7: metadata export ----------------------------------------------------------------------

Outcome exports() {
  testing::TempDir dir;
  Archive archive(testing::test_config(dir.path()));
  const Caller alice = Caller::user("alice");
  std::mt19937_64 rng(31337);
  int malformed = 0, lossy = 0, unstable = 0;
  for (int i = 0; i < kExportRecords; ++i) {
    const auto m = testing::random_metadata(rng);
    const auto id = archive.create_draft(alice, m).record_id;
    archive.share(alice, id, Tier::consortium, std::nullopt);
    for (auto format : {ExportFormat::datacite_xml, ExportFormat::dublincore_xml, ExportFormat::json_ld,
                        ExportFormat::json}) {
      const auto doc = archive.export_record(Caller::user("dave"), id, std::nullopt, format);
      if (doc.body != archive.export_record(Caller::user("dave"), id, std::nullopt, format).body) ++unstable;
      try {
        if (format == ExportFormat::datacite_xml || format == ExportFormat::dublincore_xml) {
          std::istringstream in(doc.body);
          boost::property_tree::ptree tree;
          boost::property_tree::read_xml(in, tree);
        } else if (format == ExportFormat::json_ld) {
          if (!json::parse(doc.body).contains("@context")) ++malformed;
        } else if (import_json_export(doc.body) != m) {
          ++lossy;
        }
      } catch (const std::exception&) {
        ++malformed;
      }
    }
  }
  return {malformed == 0 && lossy == 0 && unstable == 0,
          std::to_string(kExportRecords) + " records x 4 formats, " + std::to_string(malformed) + " malformed, " +
              std::to_string(lossy) + " lossy round trips, " + std::to_string(unstable) + " non-deterministic"};
}

// -- 8: command-line round trip -------------------------------------------------------------------

Outcome cli_round_trip() {
  const auto start = Clock::now();
  LiveArchive live;
  const std::string token = live.archive->mint_api_token("alice", "cli");
  const std::map<std::string, std::string> env = {{"ARCHIVE_URL", live.url}, {"ARCHIVE_TOKEN", token}};
  testing::TempDir work;
  std::mt19937_64 rng(8);

  write_file(work.path() / "meta.json", metadata_to_json(testing::sample_metadata("Command line upload")).dump());
  const std::map<std::string, std::string> payload = {{"table.csv", "x,y\n1,2\n"},
                                                      {"raw.bin", testing::random_bytes_string(rng, 200000)}};
  std::vector<std::string> args = {"upload", "--metadata", (work.path() / "meta.json").string(), "--share", "alpha"};
  for (const auto& [name, bytes] : payload) {
    write_file(work.path() / "in" / name, bytes);
    args.push_back("--file");
    args.push_back((work.path() / "in" / name).string());
  }
  const auto up = run_cli(args, env);
  if (up.exit_code != 0) return {false, "upload exited " + std::to_string(up.exit_code)};
  const std::string id = first_line(up.out);

  const auto link = run_cli({"link", id, "--permission", "view"}, env);
  if (link.exit_code != 0) return {false, "link exited " + std::to_string(link.exit_code)};
  const std::string url = first_line(link.out);

  // Anonymous: no token at all, only the share-link URL.
  const auto down = run_cli({"download", url, "--dest", (work.path() / "out").string()}, {});
  if (down.exit_code != 0) return {false, "anonymous download exited " + std::to_string(down.exit_code)};
  int differing = 0;
  for (const auto& [name, bytes] : payload) differing += read_file(work.path() / "out" / name) != bytes;

  const fs::path snapshot = work.path() / "snapshot";
  write_file(snapshot / "log.txt", "first run\n");
  const auto b1 = run_cli({"backup", snapshot.string(), "--record-label", "Nightly snapshot"}, env);
  write_file(snapshot / "log.txt", "second run\n");
  write_file(snapshot / "sub" / "extra.txt", "added later\n");
  const auto b2 = run_cli({"backup", snapshot.string(), "--record-label", "Nightly snapshot"}, env);
  if (b1.exit_code != 0 || b2.exit_code != 0) {
    return {false, "backup exited " + std::to_string(b1.exit_code) + "/" + std::to_string(b2.exit_code)};
  }
  const std::string v1 = first_line(b1.out), v2 = first_line(b2.out);
  const std::string backup_id = v1.substr(0, v1.find("-v"));
  const auto versions = live.archive->list_versions(Caller::user("alice"), backup_id);
  const bool chain = v1 == backup_id + "-v1" && v2 == backup_id + "-v2" && versions.size() == 2 &&
                     versions[0].files.size() == 1 && versions[1].files.size() == 1 &&
                     versions[0].files[0].checksum != versions[1].files[0].checksum;

  const double elapsed = seconds_since(start);
  const bool fast = elapsed < std::chrono::duration<double>(kCliBudget).count();
  return {differing == 0 && chain && fast,
          std::to_string(payload.size()) + " files downloaded anonymously, " + std::to_string(differing) +
              " differing, backups " + v1 + " then " + v2 + (chain ? "" : " (unexpected)") + ", " +
              fmt_seconds(elapsed)};
}

// -- 9: publish between archives -----------------------------------------------------------------

Outcome publish() {
  LiveArchive source, target;
  const Caller alice = Caller::user("alice");
  const std::map<std::string, std::string> env = {{"ARCHIVE_URL", source.url},
                                                  {"ARCHIVE_TOKEN", source.archive->mint_api_token("alice", "src")}};
  const std::string target_token = target.archive->mint_api_token("alice", "dst");
  std::mt19937_64 rng(99);

  auto make_record = [&](const std::string& title) {
    const auto id = source.archive->create_draft(alice, testing::sample_metadata(title)).record_id;
    for (int i = 0; i < kPublishFiles; ++i) {
      source.archive->attach_bytes(alice, id, "part" + std::to_string(i) + ".dat",
                                   testing::random_bytes_string(rng, 50000 + 1000 * static_cast<std::size_t>(i)));
    }
    return source.archive->share(alice, id, Tier::consortium, std::nullopt);
  };

  const auto good = make_record("Publish me");
  const auto ok = run_cli({"publish", good.record_id, "--target-url", target.url, "--target-token", target_token}, env);
  if (ok.exit_code != 0) return {false, "publish exited " + std::to_string(ok.exit_code)};
  const auto remote = target.archive->read_version(alice, first_line(ok.out), std::nullopt);
  auto checksums = [](const RecordVersion& v) {
    std::map<std::string, std::string> out;
    for (const auto& f : v.files) out[f.name] = f.checksum;
    return out;
  };
  const bool copied = checksums(remote) == checksums(good) && remote.metadata == good.metadata &&
                      remote.state == VersionState::draft && remote.files.size() == kPublishFiles;

  // Corrupt one stored blob of a second record behind the source's back.
  const auto bad = make_record("Corrupted");
  const fs::path blob = source.archive->files().path_for(bad.files[1].content_ref);
  fs::permissions(blob, fs::perms::owner_write, fs::perm_options::add);
  std::string bytes = read_file(blob);
  bytes[bytes.size() / 2] ^= 0x5a;
  write_file(blob, bytes);
  const auto failed = run_cli({"publish", bad.record_id, "--target-url", target.url, "--target-token", target_token},
                              env);
  const auto remote_records =
      target.archive->store().transact([](PrimaryStore::Tx& tx) { return tx.record_ids_owned_by("alice"); });
  const bool cleaned = remote_records.size() == 1;
  return {copied && failed.exit_code == kExitChecksum && cleaned,
          std::string("copy ") + (copied ? "matches" : "DIFFERS") + " (" + std::to_string(remote.files.size()) +
              " files), corrupted source exit " + std::to_string(failed.exit_code) + ", " +
              std::to_string(remote_records.size()) + " record(s) left on target"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"permission matrix matches reference table", permission_matrix},
      {"usage counts match brute-force deduplication", stats_dedup},
      {"salt rotation splits one visitor into two", salt_rotation},
      {"record quota boundary is inclusive", quota},
      {"shared file manifests never change", immutability},
      {"search equals brute force over primary store", search_equivalence},
      {"metadata exports are well-formed and stable", exports},
      {"command-line upload, link, download, backup", cli_round_trip},
      {"publish copies to a second archive and cleans up", publish},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << (i + 1) << "] " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
