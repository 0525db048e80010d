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
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "archive/access.hpp"
#include "archive/model.hpp"
#include "archive/usage_event.hpp"

struct sqlite3;

namespace archive {

struct IndexTask {
  std::int64_t id = 0;
  std::string version_id;
};

/// Transactional primary store (SQLite). All reads and writes happen inside
/// `transact`, which serializes callers and commits all-or-nothing.
class PrimaryStore {
 public:
  /// `path` may be ":memory:".
  explicit PrimaryStore(const std::filesystem::path& path);
  ~PrimaryStore();
  PrimaryStore(const PrimaryStore&) = delete;
  PrimaryStore& operator=(const PrimaryStore&) = delete;

  /// Typed operations available inside a transaction.
  class Tx {
   public:
    // users & communities
    void upsert_user(const UserAccount& user);
    std::optional<UserAccount> find_user(const std::string& user_id);
    std::vector<std::string> list_user_ids();
    void add_membership(const std::string& user_id, const std::string& slug);
    void remove_membership(const std::string& user_id, const std::string& slug);
    void upsert_community(const Community& c);
    std::optional<Community> find_community(const std::string& slug);
    std::vector<Community> list_communities();

    // records, versions, files
    void insert_record(const std::string& record_id, const std::string& owner, Timestamp created_at);
    bool record_exists(const std::string& record_id);
    void delete_record(const std::string& record_id);
    std::optional<Record> load_record(const std::string& record_id);
    std::vector<std::string> record_ids_owned_by(const std::string& owner);
    std::vector<std::string> all_record_ids();

    void insert_version(const RecordVersion& v);
    std::optional<RecordVersion> load_version(const std::string& version_id);
    void update_metadata(const std::string& version_id, const MetadataDocument& m);
    /// Check-and-set draft -> shared. False if the version was not a draft.
    bool mark_shared(const std::string& version_id, Tier tier, const std::optional<std::string>& community,
                     Timestamp shared_at);
    /// Check-and-set of the tier of an already shared version.
    bool promote_tier(const std::string& version_id, Tier from, Tier to, const std::optional<std::string>& community);
    void delete_version(const std::string& version_id);
    std::vector<std::string> shared_version_ids();

    void insert_file(const std::string& version_id, const FileEntry& f);
    bool delete_file(const std::string& version_id, const std::string& name);
    std::int64_t content_references(const std::string& content_ref);
    std::vector<FileEntry> all_files();

    // links & tokens
    void insert_link(const ShareLink& link);
    std::optional<ShareLink> find_link(const std::string& token_hash);
    void set_link_revoked(const std::string& token_hash);
    void insert_token(const ApiToken& token);
    std::optional<ApiToken> find_token(const std::string& token_hash);
    std::vector<ApiToken> tokens_of(const std::string& user_id);
    bool revoke_token(const std::string& user_id, const std::string& token_hash);

    // usage
    void insert_event(const UsageEvent& e);
    std::vector<UsageEvent> events_for_version(const std::string& version_id);
    std::vector<UsageEvent> all_events();
    std::optional<SaltState> active_salt();
    void replace_salt(const SaltState& salt);

    // index queue
    void enqueue_index_task(const std::string& version_id);
    std::vector<IndexTask> pending_index_tasks(std::size_t limit);
    void delete_index_task(std::int64_t id);
    std::int64_t pending_index_count();

    // quota
    void set_record_quota(const std::string& record_id, std::uint64_t bytes);
    std::optional<std::uint64_t> record_quota(const std::string& record_id);

   private:
    friend class PrimaryStore;
    explicit Tx(sqlite3* db) : db_(db) {}
    std::vector<FileEntry> files_of(const std::string& version_id);

    sqlite3* db_;
    bool enqueued_ = false;
  };

  template <typename F>
  auto transact(F&& fn) -> decltype(fn(std::declval<Tx&>())) {
    std::unique_lock lock(mutex_);
    Tx tx(db_);
    begin();
    try {
      if constexpr (std::is_void_v<decltype(fn(tx))>) {
        fn(tx);
        commit();
        lock.unlock();
        notify(tx);
      } else {
        auto result = fn(tx);
        commit();
        lock.unlock();
        notify(tx);
        return result;
      }
    } catch (...) {
      rollback();
      throw;
    }
  }

  /// Invoked (outside the lock) after a commit that enqueued index tasks.
  void set_index_listener(std::function<void()> listener);

  /// Raw SQL dump of every row of every table; used by anonymity checks.
  std::string dump_all_rows();

 private:
  void begin();
  void commit();
  void rollback();
  void notify(const Tx& tx);

  sqlite3* db_ = nullptr;
  std::mutex mutex_;
  std::function<void()> listener_;
};

}  // namespace archive
