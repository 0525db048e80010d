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

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "archive/access.hpp"
#include "archive/model.hpp"
#include "archive/store.hpp"

namespace archive {

/// Searchable projection of a version. Carries no file bytes and no tokens.
struct IndexDocument {
  std::string version_id;
  std::string record_id;
  int version_index = 1;
  std::string title;
  std::vector<std::string> keywords;
  std::vector<std::string> authors;
  /// Community the version is visible in; the umbrella slug for consortium tier.
  std::string community;
  Tier tier = Tier::none;
  VersionState state = VersionState::draft;
  ResourceType resource_type = ResourceType::dataset;
  std::optional<Timestamp> shared_at;
  Timestamp created_at{};
  std::string owner;

  bool operator==(const IndexDocument&) const = default;
};

IndexDocument project(const RecordVersion& v, const std::string& umbrella_slug);
VersionAccess access_of(const IndexDocument& doc);
nlohmann::json index_document_to_json(const IndexDocument& doc);

enum class SortOrder { newest, oldest, best_match };
std::optional<SortOrder> parse_sort_order(std::string_view s);

inline constexpr int kDefaultPageSize = 20;
inline constexpr int kMaxPageSize = 100;

struct SearchQuery {
  std::string text;
  std::optional<std::string> community;
  std::vector<std::string> keywords;
  std::optional<ResourceType> resource_type;
  bool owner_me = false;
  /// Defaults to best_match for non-empty text, newest otherwise.
  std::optional<SortOrder> sort;
  int page = 1;
  int page_size = kDefaultPageSize;
};

struct SearchHit {
  IndexDocument doc;
  int score = 0;
};

struct SearchPage {
  std::int64_t total = 0;
  int page = 1;
  int page_size = kDefaultPageSize;
  std::vector<SearchHit> hits;
};

/// Throws Error{bad_request} on out-of-range paging.
void check_query(const SearchQuery& q);

/// Title matches count twice, keyword matches once.
int match_score(const IndexDocument& doc, const std::vector<std::string>& query_tokens);
std::vector<std::string> tokenize(std::string_view text);

/// Applies text match, filters, ordering and paging to an already
/// permission-filtered candidate list.
SearchPage rank_and_page(const std::vector<IndexDocument>& candidates, const SearchQuery& q);

/// Embedded secondary index keyed by version id. Upserts are idempotent.
class SearchIndex {
 public:
  void upsert(IndexDocument doc);
  void remove(const std::string& version_id);
  void clear();
  std::optional<IndexDocument> find(const std::string& version_id) const;
  std::vector<IndexDocument> all() const;
  std::size_t size() const;

  /// Documents readable by `user` (anonymous callers get nothing), then ranked.
  SearchPage search(const std::optional<Principal>& user, const SearchQuery& q) const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, IndexDocument> docs_;
};

struct ConsistencyReport {
  std::vector<std::string> missing_in_index;
  std::vector<std::string> stale_in_index;
  std::vector<std::string> orphaned_in_index;

  bool empty() const { return missing_in_index.empty() && stale_in_index.empty() && orphaned_in_index.empty(); }
};

/// Drains the persisted index task queue into the search index. One logical
/// worker per deployment; replaying a task is harmless.
class IndexWorker {
 public:
  IndexWorker(PrimaryStore& store, SearchIndex& index, std::string umbrella_slug);
  ~IndexWorker();
  IndexWorker(const IndexWorker&) = delete;
  IndexWorker& operator=(const IndexWorker&) = delete;

  /// Processes every pending task; returns how many were applied.
  std::size_t drain();

  void start();
  void stop();
  void wake();

  ConsistencyReport verify_consistency();
  void reindex_all();

 private:
  void apply(const IndexTask& task);
  void run();

  PrimaryStore& store_;
  SearchIndex& index_;
  std::string umbrella_;
  std::mutex drain_mutex_;

  std::mutex wake_mutex_;
  std::condition_variable wake_cv_;
  bool pending_ = false;
  bool stopping_ = false;
  std::thread thread_;
};

}  // namespace archive
