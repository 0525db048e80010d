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

#include "archive/store.hpp"

#include <sqlite3.h>

#include "archive/error.hpp"

namespace archive {

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS users (
  user_id TEXT PRIMARY KEY,
  email TEXT NOT NULL,
  email_confirmed INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS communities (
  slug TEXT PRIMARY KEY,
  display_name TEXT NOT NULL,
  kind TEXT NOT NULL CHECK (kind IN ('project', 'umbrella'))
);
CREATE UNIQUE INDEX IF NOT EXISTS one_umbrella ON communities(kind) WHERE kind = 'umbrella';
CREATE TABLE IF NOT EXISTS memberships (
  user_id TEXT NOT NULL REFERENCES users(user_id),
  slug TEXT NOT NULL REFERENCES communities(slug),
  PRIMARY KEY (user_id, slug)
);
CREATE TABLE IF NOT EXISTS records (
  record_id TEXT PRIMARY KEY,
  owner TEXT NOT NULL REFERENCES users(user_id),
  created_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS versions (
  version_id TEXT PRIMARY KEY,
  record_id TEXT NOT NULL REFERENCES records(record_id),
  version_index INTEGER NOT NULL CHECK (version_index >= 1),
  state TEXT NOT NULL CHECK (state IN ('draft', 'shared')),
  tier TEXT NOT NULL CHECK (tier IN ('none', 'community', 'consortium')),
  shared_with TEXT,
  owner TEXT NOT NULL,
  metadata TEXT NOT NULL,
  created_at INTEGER NOT NULL,
  shared_at INTEGER,
  UNIQUE (record_id, version_index),
  CHECK ((state = 'draft') = (tier = 'none')),
  CHECK ((state = 'draft') = (shared_at IS NULL)),
  CHECK ((tier = 'community') = (shared_with IS NOT NULL))
);
CREATE TABLE IF NOT EXISTS files (
  version_id TEXT NOT NULL REFERENCES versions(version_id),
  name TEXT NOT NULL,
  size INTEGER NOT NULL,
  checksum TEXT NOT NULL,
  content_ref TEXT NOT NULL,
  position INTEGER NOT NULL,
  PRIMARY KEY (version_id, name)
);
CREATE INDEX IF NOT EXISTS files_by_content ON files(content_ref);
CREATE TABLE IF NOT EXISTS share_links (
  token_hash TEXT PRIMARY KEY,
  record_id TEXT NOT NULL REFERENCES records(record_id),
  permission TEXT NOT NULL CHECK (permission IN ('view', 'edit')),
  created_by TEXT NOT NULL,
  created_at INTEGER NOT NULL,
  expires_at INTEGER,
  revoked INTEGER NOT NULL DEFAULT 0
);
CREATE TABLE IF NOT EXISTS api_tokens (
  token_hash TEXT PRIMARY KEY,
  user_id TEXT NOT NULL REFERENCES users(user_id),
  label TEXT NOT NULL,
  created_at INTEGER NOT NULL,
  revoked INTEGER NOT NULL DEFAULT 0
);
CREATE TABLE IF NOT EXISTS usage_events (
  id INTEGER PRIMARY KEY AUTOINCREMENT,
  event_type TEXT NOT NULL,
  version_id TEXT NOT NULL,
  record_id TEXT NOT NULL,
  file_name TEXT NOT NULL,
  visitor_hash TEXT NOT NULL,
  country TEXT NOT NULL,
  referrer_domain TEXT NOT NULL,
  period_id INTEGER NOT NULL,
  occurred_at INTEGER NOT NULL
);
CREATE INDEX IF NOT EXISTS usage_by_version ON usage_events(version_id);
CREATE TABLE IF NOT EXISTS salt (
  id INTEGER PRIMARY KEY CHECK (id = 1),
  value BLOB NOT NULL,
  period_id INTEGER NOT NULL,
  period_start INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS index_tasks (
  id INTEGER PRIMARY KEY AUTOINCREMENT,
  version_id TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS record_quota (
  record_id TEXT PRIMARY KEY,
  limit_bytes INTEGER NOT NULL
);
)sql";

[[noreturn]] void fail(sqlite3* db, int rc, const std::string& what) {
  const std::string msg = what + ": " + (db != nullptr ? sqlite3_errmsg(db) : sqlite3_errstr(rc));
  const int primary = rc & 0xff;
  if (primary == SQLITE_CONSTRAINT) throw Error(ErrorCode::constraint, "constraint-violation", msg);
  if (primary == SQLITE_BUSY || primary == SQLITE_LOCKED) throw Error(ErrorCode::conflict, "conflict", msg);
  throw Error(ErrorCode::internal, "storage", msg);
}

void exec(sqlite3* db, const char* sql) {
  char* err = nullptr;
  const int rc = sqlite3_exec(db, sql, nullptr, nullptr, &err);
  if (rc != SQLITE_OK) {
    std::string msg = err != nullptr ? err : "";
    sqlite3_free(err);
    fail(db, rc, msg);
  }
}

/// Prepared statement with positional binding.
class Stmt {
 public:
  Stmt(sqlite3* db, const char* sql) : db_(db) {
    const int rc = sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr);
    if (rc != SQLITE_OK) fail(db, rc, sql);
  }
  ~Stmt() { sqlite3_finalize(stmt_); }
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  Stmt& bind(const std::string& v) {
    sqlite3_bind_text(stmt_, ++pos_, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
    return *this;
  }
  Stmt& bind(const char* v) { return bind(std::string(v)); }
  Stmt& bind(std::int64_t v) {
    sqlite3_bind_int64(stmt_, ++pos_, v);
    return *this;
  }
  Stmt& bind(Timestamp t) { return bind(static_cast<std::int64_t>(t.time_since_epoch().count())); }
  Stmt& bind(const std::optional<std::string>& v) {
    if (v) return bind(*v);
    sqlite3_bind_null(stmt_, ++pos_);
    return *this;
  }
  Stmt& bind(const std::optional<Timestamp>& v) {
    if (v) return bind(*v);
    sqlite3_bind_null(stmt_, ++pos_);
    return *this;
  }
  Stmt& bind_blob(const std::vector<std::uint8_t>& v) {
    sqlite3_bind_blob(stmt_, ++pos_, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
    return *this;
  }

  /// True while rows remain.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    fail(db_, rc, sqlite3_sql(stmt_));
  }
  void run() {
    while (step()) {
    }
  }

  std::string text(int col) const {
    const auto* p = sqlite3_column_text(stmt_, col);
    return p != nullptr ? std::string(reinterpret_cast<const char*>(p), sqlite3_column_bytes(stmt_, col)) : "";
  }
  std::optional<std::string> opt_text(int col) const {
    if (sqlite3_column_type(stmt_, col) == SQLITE_NULL) return std::nullopt;
    return text(col);
  }
  std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }
  Timestamp time(int col) const { return Timestamp{std::chrono::seconds{integer(col)}}; }
  std::optional<Timestamp> opt_time(int col) const {
    if (sqlite3_column_type(stmt_, col) == SQLITE_NULL) return std::nullopt;
    return time(col);
  }
  std::vector<std::uint8_t> blob(int col) const {
    const auto* p = static_cast<const std::uint8_t*>(sqlite3_column_blob(stmt_, col));
    return p != nullptr ? std::vector<std::uint8_t>(p, p + sqlite3_column_bytes(stmt_, col))
                        : std::vector<std::uint8_t>{};
  }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
  int pos_ = 0;
};

constexpr const char* kVersionColumns =
    "version_id, record_id, version_index, state, tier, shared_with, owner, metadata, created_at, shared_at";

RecordVersion version_from_row(const Stmt& s) {
  RecordVersion v;
  v.version_id = s.text(0);
  v.record_id = s.text(1);
  v.version_index = static_cast<int>(s.integer(2));
  v.state = parse_version_state(s.text(3)).value_or(VersionState::draft);
  v.tier = parse_tier(s.text(4)).value_or(Tier::none);
  v.shared_with = s.opt_text(5);
  v.owner = s.text(6);
  v.metadata = metadata_from_json(nlohmann::json::parse(s.text(7)));
  v.created_at = s.time(8);
  v.shared_at = s.opt_time(9);
  return v;
}

ShareLink link_from_row(const Stmt& s) {
  ShareLink l;
  l.token_hash = s.text(0);
  l.record_id = s.text(1);
  l.permission = parse_link_permission(s.text(2)).value_or(LinkPermission::view);
  l.created_by = s.text(3);
  l.created_at = s.time(4);
  l.expires_at = s.opt_time(5);
  l.revoked = s.integer(6) != 0;
  return l;
}

ApiToken token_from_row(const Stmt& s) {
  return ApiToken{s.text(0), s.text(1), s.text(2), s.time(3), s.integer(4) != 0};
}

UsageEvent event_from_row(const Stmt& s) {
  UsageEvent e;
  e.id = s.integer(0);
  e.type = s.text(1) == "view" ? EventType::view : EventType::download;
  e.version_id = s.text(2);
  e.record_id = s.text(3);
  e.file_name = s.text(4);
  e.visitor_hash = s.text(5);
  e.country = s.text(6);
  e.referrer_domain = s.text(7);
  e.period_id = s.integer(8);
  e.occurred_at = s.time(9);
  return e;
}

constexpr const char* kEventColumns =
    "id, event_type, version_id, record_id, file_name, visitor_hash, country, referrer_domain, period_id, "
    "occurred_at";

}  // namespace

PrimaryStore::PrimaryStore(const std::filesystem::path& path) {
  if (path != ":memory:" && path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const int rc = sqlite3_open_v2(path.c_str(), &db_,
                                 SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX, nullptr);
  if (rc != SQLITE_OK) {
    sqlite3_close(db_);
    db_ = nullptr;
    fail(nullptr, rc, "open " + path.string());
  }
  sqlite3_busy_timeout(db_, 5000);
  exec(db_, "PRAGMA foreign_keys = ON; PRAGMA secure_delete = ON;");
  if (path != ":memory:") exec(db_, "PRAGMA journal_mode = WAL; PRAGMA synchronous = NORMAL;");
  exec(db_, kSchema);
}

PrimaryStore::~PrimaryStore() { sqlite3_close(db_); }

void PrimaryStore::begin() { exec(db_, "BEGIN IMMEDIATE"); }
void PrimaryStore::commit() { exec(db_, "COMMIT"); }
void PrimaryStore::rollback() {
  if (sqlite3_get_autocommit(db_) == 0) sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
}

void PrimaryStore::notify(const Tx& tx) {
  if (tx.enqueued_ && listener_) listener_();
}

void PrimaryStore::set_index_listener(std::function<void()> listener) {
  std::lock_guard lock(mutex_);
  listener_ = std::move(listener);
}

std::string PrimaryStore::dump_all_rows() {
  std::lock_guard lock(mutex_);
  std::string out;
  std::vector<std::string> tables;
  {
    Stmt s(db_, "SELECT name FROM sqlite_master WHERE type = 'table' ORDER BY name");
    while (s.step()) tables.push_back(s.text(0));
  }
  for (const auto& t : tables) {
    const std::string sql = "SELECT * FROM \"" + t + "\"";
    sqlite3_stmt* stmt = nullptr;
    if (sqlite3_prepare_v2(db_, sql.c_str(), -1, &stmt, nullptr) != SQLITE_OK) continue;
    while (sqlite3_step(stmt) == SQLITE_ROW) {
      out += t;
      for (int c = 0; c < sqlite3_column_count(stmt); ++c) {
        out += '\t';
        const auto* p = sqlite3_column_blob(stmt, c);
        if (p != nullptr) out.append(static_cast<const char*>(p), sqlite3_column_bytes(stmt, c));
      }
      out += '\n';
    }
    sqlite3_finalize(stmt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// users & communities

void PrimaryStore::Tx::upsert_user(const UserAccount& user) {
  Stmt(db_,
       "INSERT INTO users(user_id, email, email_confirmed) VALUES (?, ?, ?) "
       "ON CONFLICT(user_id) DO UPDATE SET email = excluded.email, email_confirmed = excluded.email_confirmed")
      .bind(user.user_id)
      .bind(user.email)
      .bind(std::int64_t{user.email_confirmed ? 1 : 0})
      .run();
}

std::optional<UserAccount> PrimaryStore::Tx::find_user(const std::string& user_id) {
  Stmt s(db_, "SELECT user_id, email, email_confirmed FROM users WHERE user_id = ?");
  s.bind(user_id);
  if (!s.step()) return std::nullopt;
  UserAccount u{s.text(0), s.text(1), s.integer(2) != 0, {}};
  Stmt m(db_, "SELECT slug FROM memberships WHERE user_id = ?");
  m.bind(user_id);
  while (m.step()) u.memberships.insert(m.text(0));
  return u;
}

std::vector<std::string> PrimaryStore::Tx::list_user_ids() {
  std::vector<std::string> out;
  Stmt s(db_, "SELECT user_id FROM users ORDER BY user_id");
  while (s.step()) out.push_back(s.text(0));
  return out;
}

void PrimaryStore::Tx::add_membership(const std::string& user_id, const std::string& slug) {
  Stmt(db_, "INSERT OR IGNORE INTO memberships(user_id, slug) VALUES (?, ?)").bind(user_id).bind(slug).run();
}

void PrimaryStore::Tx::remove_membership(const std::string& user_id, const std::string& slug) {
  Stmt(db_, "DELETE FROM memberships WHERE user_id = ? AND slug = ?").bind(user_id).bind(slug).run();
}

void PrimaryStore::Tx::upsert_community(const Community& c) {
  Stmt(db_,
       "INSERT INTO communities(slug, display_name, kind) VALUES (?, ?, ?) "
       "ON CONFLICT(slug) DO UPDATE SET display_name = excluded.display_name, kind = excluded.kind")
      .bind(c.slug)
      .bind(c.display_name)
      .bind(std::string(to_string(c.kind)))
      .run();
}

std::optional<Community> PrimaryStore::Tx::find_community(const std::string& slug) {
  Stmt s(db_, "SELECT slug, display_name, kind FROM communities WHERE slug = ?");
  s.bind(slug);
  if (!s.step()) return std::nullopt;
  return Community{s.text(0), s.text(1), parse_community_kind(s.text(2)).value_or(CommunityKind::project)};
}

std::vector<Community> PrimaryStore::Tx::list_communities() {
  std::vector<Community> out;
  Stmt s(db_, "SELECT slug, display_name, kind FROM communities ORDER BY slug");
  while (s.step()) {
    out.push_back({s.text(0), s.text(1), parse_community_kind(s.text(2)).value_or(CommunityKind::project)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// records, versions, files

void PrimaryStore::Tx::insert_record(const std::string& record_id, const std::string& owner, Timestamp created_at) {
  Stmt(db_, "INSERT INTO records(record_id, owner, created_at) VALUES (?, ?, ?)")
      .bind(record_id)
      .bind(owner)
      .bind(created_at)
      .run();
}

bool PrimaryStore::Tx::record_exists(const std::string& record_id) {
  Stmt s(db_, "SELECT 1 FROM records WHERE record_id = ?");
  s.bind(record_id);
  return s.step();
}

void PrimaryStore::Tx::delete_record(const std::string& record_id) {
  Stmt(db_, "DELETE FROM share_links WHERE record_id = ?").bind(record_id).run();
  Stmt(db_, "DELETE FROM record_quota WHERE record_id = ?").bind(record_id).run();
  Stmt(db_, "DELETE FROM records WHERE record_id = ?").bind(record_id).run();
}

std::optional<Record> PrimaryStore::Tx::load_record(const std::string& record_id) {
  Record r;
  {
    Stmt s(db_, "SELECT record_id, owner FROM records WHERE record_id = ?");
    s.bind(record_id);
    if (!s.step()) return std::nullopt;
    r.record_id = s.text(0);
    r.owner = s.text(1);
  }
  const std::string sql =
      std::string("SELECT ") + kVersionColumns + " FROM versions WHERE record_id = ? ORDER BY version_index";
  Stmt s(db_, sql.c_str());
  s.bind(record_id);
  while (s.step()) r.versions.push_back(version_from_row(s));
  for (auto& v : r.versions) v.files = files_of(v.version_id);
  return r;
}

std::vector<std::string> PrimaryStore::Tx::record_ids_owned_by(const std::string& owner) {
  std::vector<std::string> out;
  Stmt s(db_, "SELECT record_id FROM records WHERE owner = ? ORDER BY created_at, record_id");
  s.bind(owner);
  while (s.step()) out.push_back(s.text(0));
  return out;
}

std::vector<std::string> PrimaryStore::Tx::all_record_ids() {
  std::vector<std::string> out;
  Stmt s(db_, "SELECT record_id FROM records ORDER BY created_at, record_id");
  while (s.step()) out.push_back(s.text(0));
  return out;
}

void PrimaryStore::Tx::insert_version(const RecordVersion& v) {
  const std::string sql = std::string("INSERT INTO versions(") + kVersionColumns +
                          ") VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)";
  Stmt(db_, sql.c_str())
      .bind(v.version_id)
      .bind(v.record_id)
      .bind(std::int64_t{v.version_index})
      .bind(std::string(to_string(v.state)))
      .bind(std::string(to_string(v.tier)))
      .bind(v.shared_with)
      .bind(v.owner)
      .bind(metadata_to_json(v.metadata).dump())
      .bind(v.created_at)
      .bind(v.shared_at)
      .run();
  for (const auto& f : v.files) insert_file(v.version_id, f);
}

std::optional<RecordVersion> PrimaryStore::Tx::load_version(const std::string& version_id) {
  const std::string sql = std::string("SELECT ") + kVersionColumns + " FROM versions WHERE version_id = ?";
  Stmt s(db_, sql.c_str());
  s.bind(version_id);
  if (!s.step()) return std::nullopt;
  auto v = version_from_row(s);
  v.files = files_of(version_id);
  return v;
}

void PrimaryStore::Tx::update_metadata(const std::string& version_id, const MetadataDocument& m) {
  Stmt(db_, "UPDATE versions SET metadata = ? WHERE version_id = ?")
      .bind(metadata_to_json(m).dump())
      .bind(version_id)
      .run();
}

bool PrimaryStore::Tx::mark_shared(const std::string& version_id, Tier tier,
                                   const std::optional<std::string>& community, Timestamp shared_at) {
  Stmt(db_,
       "UPDATE versions SET state = 'shared', tier = ?, shared_with = ?, shared_at = ? "
       "WHERE version_id = ? AND state = 'draft'")
      .bind(std::string(to_string(tier)))
      .bind(community)
      .bind(shared_at)
      .bind(version_id)
      .run();
  return sqlite3_changes(db_) == 1;
}

bool PrimaryStore::Tx::promote_tier(const std::string& version_id, Tier from, Tier to,
                                    const std::optional<std::string>& community) {
  Stmt(db_, "UPDATE versions SET tier = ?, shared_with = ? WHERE version_id = ? AND state = 'shared' AND tier = ?")
      .bind(std::string(to_string(to)))
      .bind(community)
      .bind(version_id)
      .bind(std::string(to_string(from)))
      .run();
  return sqlite3_changes(db_) == 1;
}

void PrimaryStore::Tx::delete_version(const std::string& version_id) {
  Stmt(db_, "DELETE FROM files WHERE version_id = ?").bind(version_id).run();
  Stmt(db_, "DELETE FROM versions WHERE version_id = ?").bind(version_id).run();
}

std::vector<std::string> PrimaryStore::Tx::shared_version_ids() {
  std::vector<std::string> out;
  Stmt s(db_, "SELECT version_id FROM versions WHERE state = 'shared' ORDER BY version_id");
  while (s.step()) out.push_back(s.text(0));
  return out;
}

void PrimaryStore::Tx::insert_file(const std::string& version_id, const FileEntry& f) {
  Stmt(db_,
       "INSERT INTO files(version_id, name, size, checksum, content_ref, position) "
       "VALUES (?, ?, ?, ?, ?, (SELECT COALESCE(MAX(position), 0) + 1 FROM files WHERE version_id = ?))")
      .bind(version_id)
      .bind(f.name)
      .bind(static_cast<std::int64_t>(f.size))
      .bind(f.checksum)
      .bind(f.content_ref)
      .bind(version_id)
      .run();
}

bool PrimaryStore::Tx::delete_file(const std::string& version_id, const std::string& name) {
  Stmt(db_, "DELETE FROM files WHERE version_id = ? AND name = ?").bind(version_id).bind(name).run();
  return sqlite3_changes(db_) == 1;
}

std::int64_t PrimaryStore::Tx::content_references(const std::string& content_ref) {
  Stmt s(db_, "SELECT COUNT(*) FROM files WHERE content_ref = ?");
  s.bind(content_ref);
  s.step();
  return s.integer(0);
}

std::vector<FileEntry> PrimaryStore::Tx::files_of(const std::string& version_id) {
  std::vector<FileEntry> out;
  Stmt s(db_, "SELECT name, size, checksum, content_ref FROM files WHERE version_id = ? ORDER BY position");
  s.bind(version_id);
  while (s.step()) {
    out.push_back({s.text(0), static_cast<std::uint64_t>(s.integer(1)), s.text(2), s.text(3)});
  }
  return out;
}

std::vector<FileEntry> PrimaryStore::Tx::all_files() {
  std::vector<FileEntry> out;
  Stmt s(db_, "SELECT name, size, checksum, content_ref FROM files ORDER BY version_id, position");
  while (s.step()) {
    out.push_back({s.text(0), static_cast<std::uint64_t>(s.integer(1)), s.text(2), s.text(3)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// links & tokens

void PrimaryStore::Tx::insert_link(const ShareLink& l) {
  Stmt(db_,
       "INSERT INTO share_links(token_hash, record_id, permission, created_by, created_at, expires_at, revoked) "
       "VALUES (?, ?, ?, ?, ?, ?, ?)")
      .bind(l.token_hash)
      .bind(l.record_id)
      .bind(std::string(to_string(l.permission)))
      .bind(l.created_by)
      .bind(l.created_at)
      .bind(l.expires_at)
      .bind(std::int64_t{l.revoked ? 1 : 0})
      .run();
}

std::optional<ShareLink> PrimaryStore::Tx::find_link(const std::string& token_hash) {
  Stmt s(db_,
         "SELECT token_hash, record_id, permission, created_by, created_at, expires_at, revoked "
         "FROM share_links WHERE token_hash = ?");
  s.bind(token_hash);
  if (!s.step()) return std::nullopt;
  return link_from_row(s);
}

void PrimaryStore::Tx::set_link_revoked(const std::string& token_hash) {
  Stmt(db_, "UPDATE share_links SET revoked = 1 WHERE token_hash = ?").bind(token_hash).run();
}

void PrimaryStore::Tx::insert_token(const ApiToken& t) {
  Stmt(db_, "INSERT INTO api_tokens(token_hash, user_id, label, created_at, revoked) VALUES (?, ?, ?, ?, ?)")
      .bind(t.token_hash)
      .bind(t.user_id)
      .bind(t.label)
      .bind(t.created_at)
      .bind(std::int64_t{t.revoked ? 1 : 0})
      .run();
}

std::optional<ApiToken> PrimaryStore::Tx::find_token(const std::string& token_hash) {
  Stmt s(db_, "SELECT token_hash, user_id, label, created_at, revoked FROM api_tokens WHERE token_hash = ?");
  s.bind(token_hash);
  if (!s.step()) return std::nullopt;
  return token_from_row(s);
}

std::vector<ApiToken> PrimaryStore::Tx::tokens_of(const std::string& user_id) {
  std::vector<ApiToken> out;
  Stmt s(db_,
         "SELECT token_hash, user_id, label, created_at, revoked FROM api_tokens WHERE user_id = ? "
         "ORDER BY created_at, label");
  s.bind(user_id);
  while (s.step()) out.push_back(token_from_row(s));
  return out;
}

bool PrimaryStore::Tx::revoke_token(const std::string& user_id, const std::string& token_hash) {
  Stmt(db_, "UPDATE api_tokens SET revoked = 1 WHERE user_id = ? AND token_hash = ?")
      .bind(user_id)
      .bind(token_hash)
      .run();
  return sqlite3_changes(db_) == 1;
}

// ---------------------------------------------------------------------------
// usage

void PrimaryStore::Tx::insert_event(const UsageEvent& e) {
  Stmt(db_,
       "INSERT INTO usage_events(event_type, version_id, record_id, file_name, visitor_hash, country, "
       "referrer_domain, period_id, occurred_at) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)")
      .bind(std::string(to_string(e.type)))
      .bind(e.version_id)
      .bind(e.record_id)
      .bind(e.file_name)
      .bind(e.visitor_hash)
      .bind(e.country)
      .bind(e.referrer_domain)
      .bind(e.period_id)
      .bind(e.occurred_at)
      .run();
}

std::vector<UsageEvent> PrimaryStore::Tx::events_for_version(const std::string& version_id) {
  std::vector<UsageEvent> out;
  const std::string sql = std::string("SELECT ") + kEventColumns + " FROM usage_events WHERE version_id = ? ORDER BY id";
  Stmt s(db_, sql.c_str());
  s.bind(version_id);
  while (s.step()) out.push_back(event_from_row(s));
  return out;
}

std::vector<UsageEvent> PrimaryStore::Tx::all_events() {
  std::vector<UsageEvent> out;
  const std::string sql = std::string("SELECT ") + kEventColumns + " FROM usage_events ORDER BY id";
  Stmt s(db_, sql.c_str());
  while (s.step()) out.push_back(event_from_row(s));
  return out;
}

std::optional<SaltState> PrimaryStore::Tx::active_salt() {
  Stmt s(db_, "SELECT value, period_start, period_id FROM salt WHERE id = 1");
  if (!s.step()) return std::nullopt;
  return SaltState{s.blob(0), s.time(1), s.integer(2)};
}

void PrimaryStore::Tx::replace_salt(const SaltState& salt) {
  // secure_delete overwrites the previous value's pages.
  Stmt(db_,
       "INSERT INTO salt(id, value, period_id, period_start) VALUES (1, ?, ?, ?) "
       "ON CONFLICT(id) DO UPDATE SET value = excluded.value, period_id = excluded.period_id, "
       "period_start = excluded.period_start")
      .bind_blob(salt.value)
      .bind(salt.period_id)
      .bind(salt.period_start)
      .run();
}

// ---------------------------------------------------------------------------
// index queue & quota

void PrimaryStore::Tx::enqueue_index_task(const std::string& version_id) {
  Stmt(db_, "INSERT INTO index_tasks(version_id) VALUES (?)").bind(version_id).run();
  enqueued_ = true;
}

std::vector<IndexTask> PrimaryStore::Tx::pending_index_tasks(std::size_t limit) {
  std::vector<IndexTask> out;
  Stmt s(db_, "SELECT id, version_id FROM index_tasks ORDER BY id LIMIT ?");
  s.bind(static_cast<std::int64_t>(limit));
  while (s.step()) out.push_back({s.integer(0), s.text(1)});
  return out;
}

void PrimaryStore::Tx::delete_index_task(std::int64_t id) {
  Stmt(db_, "DELETE FROM index_tasks WHERE id = ?").bind(id).run();
}

std::int64_t PrimaryStore::Tx::pending_index_count() {
  Stmt s(db_, "SELECT COUNT(*) FROM index_tasks");
  s.step();
  return s.integer(0);
}

void PrimaryStore::Tx::set_record_quota(const std::string& record_id, std::uint64_t bytes) {
  Stmt(db_,
       "INSERT INTO record_quota(record_id, limit_bytes) VALUES (?, ?) "
       "ON CONFLICT(record_id) DO UPDATE SET limit_bytes = excluded.limit_bytes")
      .bind(record_id)
      .bind(static_cast<std::int64_t>(bytes))
      .run();
}

std::optional<std::uint64_t> PrimaryStore::Tx::record_quota(const std::string& record_id) {
  Stmt s(db_, "SELECT limit_bytes FROM record_quota WHERE record_id = ?");
  s.bind(record_id);
  if (!s.step()) return std::nullopt;
  return static_cast<std::uint64_t>(s.integer(0));
}

}  // namespace archive
