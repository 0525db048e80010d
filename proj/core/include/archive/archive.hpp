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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "archive/access.hpp"
#include "archive/config.hpp"
#include "archive/export.hpp"
#include "archive/file_store.hpp"
#include "archive/model.hpp"
#include "archive/search_index.hpp"
#include "archive/store.hpp"
#include "archive/usage.hpp"

namespace archive {

/// The identity behind a request: an authenticated user id, a share-link
/// token, both, or neither (anonymous).
struct Caller {
  std::optional<std::string> user_id;
  std::optional<std::string> link_token;

  static Caller user(std::string id) { return {std::move(id), std::nullopt}; }
  static Caller link(std::string token) { return {std::nullopt, std::move(token)}; }
  static Caller anonymous() { return {}; }
};

struct MintedLink {
  ShareLink link;
  /// Plaintext token; only ever returned here.
  std::string token;
  std::string url;
};

/// Public view of an API token: never carries the secret or its digest.
struct ApiTokenInfo {
  std::string id;
  std::string label;
  Timestamp created_at{};
  bool revoked = false;
};

struct FileHandle {
  RecordVersion version;
  FileEntry entry;
  std::filesystem::path path;
};

struct RecordStats {
  UsageAggregate cumulative;
  std::vector<std::pair<RecordVersion, UsageAggregate>> versions;
};

/// The archive service: record lifecycle, sharing, links, search, usage
/// statistics and export, on top of the primary store, file store and index.
class Archive {
 public:
  explicit Archive(DeploymentConfig config, Clock clock = system_clock());
  ~Archive();
  Archive(const Archive&) = delete;
  Archive& operator=(const Archive&) = delete;

  const DeploymentConfig& config() const { return config_; }
  PrimaryStore& store() { return *store_; }
  const FileStore& files() const { return files_; }
  SearchIndex& index() { return index_; }
  UsageTracker& usage() { return *usage_; }
  Timestamp now() const { return clock_(); }

  // -- index maintenance ----------------------------------------------------
  void start_background_indexing();
  void stop_background_indexing();
  /// Applies all pending index tasks synchronously.
  std::size_t flush_index();
  ConsistencyReport verify_consistency();
  void reindex_all();

  // -- users, tokens, membership -------------------------------------------
  void upsert_user(const UserSeed& seed);
  UserAccount user(const std::string& user_id);
  std::string mint_api_token(const std::string& user_id, const std::string& label);
  std::vector<ApiTokenInfo> list_api_tokens(const std::string& user_id);
  void revoke_api_token(const std::string& user_id, const std::string& token_id);
  /// Resolves a Bearer secret. Throws Error{unauthenticated}.
  UserAccount authenticate(std::string_view bearer);

  std::vector<Community> communities();
  void add_member(const std::string& manager, const std::string& slug, const std::string& user_id);
  void remove_member(const std::string& manager, const std::string& slug, const std::string& user_id);

  // -- record lifecycle -----------------------------------------------------
  RecordVersion create_draft(const Caller& caller, const MetadataDocument& metadata);

  /// Pre-flight for an upload of `declared_size` bytes into the open draft.
  void check_upload(const Caller& caller, const std::string& record_id, const std::string& name,
                    std::uint64_t declared_size);
  FileEntry attach_file(const Caller& caller, const std::string& record_id, const std::string& name,
                        const StoredBlob& blob);
  FileEntry attach_bytes(const Caller& caller, const std::string& record_id, const std::string& name,
                         std::string_view bytes);
  void remove_file(const Caller& caller, const std::string& record_id, const std::string& name);

  /// Targets `version_index`, or the open draft, or the latest version.
  RecordVersion update_metadata(const Caller& caller, const std::string& record_id, std::optional<int> version_index,
                                const MetadataDocument& metadata);
  RecordVersion share(const Caller& caller, const std::string& record_id, Tier tier,
                      const std::optional<std::string>& community);
  RecordVersion new_version(const Caller& caller, const std::string& record_id, bool import_files);
  /// Deletes the open draft; a record whose only version is that draft is deleted entirely.
  void discard_draft(const Caller& caller, const std::string& record_id);

  std::vector<RecordVersion> list_versions(const Caller& caller, const std::string& record_id);
  /// The requested version, or the latest version the caller can read.
  RecordVersion read_version(const Caller& caller, const std::string& record_id, std::optional<int> version_index);
  FileHandle open_file(const Caller& caller, const std::string& record_id, std::optional<int> version_index,
                       const std::string& name);

  Subject resolve(const Caller& caller, const std::string& record_id);
  PermissionDecision evaluate(const Caller& caller, Action action, const RecordVersion& version);

  // -- quota ------------------------------------------------------------------
  std::uint64_t quota_for(const std::string& record_id);
  void set_record_quota(const std::string& record_id, std::uint64_t bytes);
  bool enforce_quota(const RecordVersion& version, std::uint64_t incoming_size);

  // -- share links ------------------------------------------------------------
  MintedLink mint_share_link(const Caller& caller, const std::string& record_id, LinkPermission permission,
                             std::optional<Timestamp> expires_at = std::nullopt);
  LinkGrant redeem_share_link(const std::string& token, const std::optional<std::string>& user_id);
  void revoke_share_link(const Caller& caller, const std::string& token);

  // -- search -------------------------------------------------------------------
  SearchPage search(const Caller& caller, const SearchQuery& query);

  // -- usage ----------------------------------------------------------------------
  /// Reads a version and records exactly one view event for it.
  RecordVersion view_record(const Caller& caller, const std::string& record_id, std::optional<int> version_index,
                            const RequesterContext& ctx);
  void record_download(const FileHandle& file, const RequesterContext& ctx);
  UsageAggregate version_stats(const Caller& caller, const std::string& record_id, int version_index);
  RecordStats record_stats(const Caller& caller, const std::string& record_id);

  // -- export -------------------------------------------------------------------
  ExportContext export_context() const;
  ExportedDocument export_record(const Caller& caller, const std::string& record_id, std::optional<int> version_index,
                                 ExportFormat format);

 private:
  void seed();
  Subject resolve_in(PrimaryStore::Tx& tx, const Caller& caller, const std::string& record_id);
  Record load_readable(PrimaryStore::Tx& tx, const Subject& subject, const std::string& record_id);
  void require(const Subject& subject, Action action, const RecordVersion& v);
  std::uint64_t quota_in(PrimaryStore::Tx& tx, const std::string& record_id);
  std::set<std::string> project_communities(const std::set<std::string>& slugs) const;
  std::string require_user(const Caller& caller) const;

  DeploymentConfig config_;
  Clock clock_;
  std::unique_ptr<PrimaryStore> store_;
  FileStore files_;
  SearchIndex index_;
  std::unique_ptr<IndexWorker> worker_;
  std::unique_ptr<UsageTracker> usage_;
};

}  // namespace archive
