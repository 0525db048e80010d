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

#include "archive/search_index.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "archive/error.hpp"

namespace archive {

using nlohmann::json;

IndexDocument project(const RecordVersion& v, const std::string& umbrella_slug) {
  IndexDocument d;
  d.version_id = v.version_id;
  d.record_id = v.record_id;
  d.version_index = v.version_index;
  d.title = v.metadata.title;
  d.keywords = v.metadata.keywords;
  for (const auto& a : v.metadata.authors) d.authors.push_back(a.name);
  if (v.tier == Tier::consortium) {
    d.community = umbrella_slug;
  } else if (v.shared_with) {
    d.community = *v.shared_with;
  }
  d.tier = v.tier;
  d.state = v.state;
  d.resource_type = v.metadata.resource_type;
  d.shared_at = v.shared_at;
  d.created_at = v.created_at;
  d.owner = v.owner;
  return d;
}

VersionAccess access_of(const IndexDocument& doc) {
  VersionAccess a{doc.record_id, doc.owner, doc.state, doc.tier, std::nullopt};
  if (doc.tier == Tier::community) a.community = doc.community;
  return a;
}

json index_document_to_json(const IndexDocument& d) {
  json out{
      {"version_id", d.version_id},
      {"record_id", d.record_id},
      {"version_index", d.version_index},
      {"title", d.title},
      {"keywords", d.keywords},
      {"authors", d.authors},
      {"community", d.community},
      {"tier", to_string(d.tier)},
      {"state", to_string(d.state)},
      {"resource_type", to_string(d.resource_type)},
      {"created_at", format_timestamp(d.created_at)},
      {"owner", d.owner},
  };
  if (d.shared_at) out["shared_at"] = format_timestamp(*d.shared_at);
  return out;
}

std::optional<SortOrder> parse_sort_order(std::string_view s) {
  if (s == "newest") return SortOrder::newest;
  if (s == "oldest") return SortOrder::oldest;
  if (s == "best-match" || s == "bestmatch") return SortOrder::best_match;
  return std::nullopt;
}

void check_query(const SearchQuery& q) {
  if (q.page < 1) throw Error(ErrorCode::bad_request, "bad-filter", "page must be >= 1");
  if (q.page_size < 1 || q.page_size > kMaxPageSize) {
    throw Error(ErrorCode::bad_request, "bad-filter", "size must be between 1 and 100");
  }
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c) != 0 || c >= 0x80) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

int match_score(const IndexDocument& doc, const std::vector<std::string>& query_tokens) {
  const auto title_tokens = tokenize(doc.title);
  std::vector<std::string> keyword_tokens;
  for (const auto& k : doc.keywords) {
    auto t = tokenize(k);
    keyword_tokens.insert(keyword_tokens.end(), t.begin(), t.end());
  }
  int score = 0;
  for (const auto& q : query_tokens) {
    score += 2 * static_cast<int>(std::count(title_tokens.begin(), title_tokens.end(), q));
    score += static_cast<int>(std::count(keyword_tokens.begin(), keyword_tokens.end(), q));
  }
  return score;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

Timestamp recency(const IndexDocument& d) { return d.shared_at.value_or(d.created_at); }

}  // namespace

SearchPage rank_and_page(const std::vector<IndexDocument>& candidates, const SearchQuery& q) {
  check_query(q);
  const auto query_tokens = tokenize(q.text);
  std::set<std::string> wanted_keywords;
  for (const auto& k : q.keywords) wanted_keywords.insert(lower(k));

  std::vector<SearchHit> hits;
  for (const auto& doc : candidates) {
    if (q.community && doc.community != *q.community) continue;
    if (q.resource_type && doc.resource_type != *q.resource_type) continue;
    if (!wanted_keywords.empty()) {
      std::set<std::string> have;
      for (const auto& k : doc.keywords) have.insert(lower(k));
      if (!std::includes(have.begin(), have.end(), wanted_keywords.begin(), wanted_keywords.end())) continue;
    }
    int score = 0;
    if (!query_tokens.empty()) {
      score = match_score(doc, query_tokens);
      if (score == 0) continue;
    }
    hits.push_back({doc, score});
  }

  const SortOrder order = q.sort.value_or(query_tokens.empty() ? SortOrder::newest : SortOrder::best_match);
  std::sort(hits.begin(), hits.end(), [order](const SearchHit& a, const SearchHit& b) {
    if (order == SortOrder::best_match && a.score != b.score) return a.score > b.score;
    const auto ra = recency(a.doc), rb = recency(b.doc);
    if (ra != rb) return order == SortOrder::oldest ? ra < rb : ra > rb;
    return a.doc.version_id < b.doc.version_id;
  });

  SearchPage page;
  page.total = static_cast<std::int64_t>(hits.size());
  page.page = q.page;
  page.page_size = q.page_size;
  const std::size_t begin = static_cast<std::size_t>(q.page - 1) * static_cast<std::size_t>(q.page_size);
  for (std::size_t i = begin; i < hits.size() && i < begin + static_cast<std::size_t>(q.page_size); ++i) {
    page.hits.push_back(std::move(hits[i]));
  }
  return page;
}

// ---------------------------------------------------------------------------

void SearchIndex::upsert(IndexDocument doc) {
  std::unique_lock lock(mutex_);
  auto id = doc.version_id;
  docs_.insert_or_assign(std::move(id), std::move(doc));
}

void SearchIndex::remove(const std::string& version_id) {
  std::unique_lock lock(mutex_);
  docs_.erase(version_id);
}

void SearchIndex::clear() {
  std::unique_lock lock(mutex_);
  docs_.clear();
}

std::optional<IndexDocument> SearchIndex::find(const std::string& version_id) const {
  std::shared_lock lock(mutex_);
  auto it = docs_.find(version_id);
  if (it == docs_.end()) return std::nullopt;
  return it->second;
}

std::vector<IndexDocument> SearchIndex::all() const {
  std::shared_lock lock(mutex_);
  std::vector<IndexDocument> out;
  out.reserve(docs_.size());
  for (const auto& [_, d] : docs_) out.push_back(d);
  return out;
}

std::size_t SearchIndex::size() const {
  std::shared_lock lock(mutex_);
  return docs_.size();
}

SearchPage SearchIndex::search(const std::optional<Principal>& user, const SearchQuery& q) const {
  check_query(q);
  std::vector<IndexDocument> readable;
  if (user) {
    const Subject subject{user, std::nullopt};
    std::shared_lock lock(mutex_);
    for (const auto& [_, doc] : docs_) {
      if (evaluate(subject, Action::read_metadata, access_of(doc)).allowed) readable.push_back(doc);
    }
  }
  return rank_and_page(readable, q);
}

// ---------------------------------------------------------------------------

IndexWorker::IndexWorker(PrimaryStore& store, SearchIndex& index, std::string umbrella_slug)
    : store_(store), index_(index), umbrella_(std::move(umbrella_slug)) {}

IndexWorker::~IndexWorker() { stop(); }

void IndexWorker::apply(const IndexTask& task) {
  auto version = store_.transact([&](PrimaryStore::Tx& tx) { return tx.load_version(task.version_id); });
  if (version && version->state == VersionState::shared) {
    index_.upsert(project(*version, umbrella_));
  } else {
    index_.remove(task.version_id);
  }
  store_.transact([&](PrimaryStore::Tx& tx) { tx.delete_index_task(task.id); });
}

std::size_t IndexWorker::drain() {
  std::lock_guard lock(drain_mutex_);
  std::size_t applied = 0;
  for (;;) {
    auto tasks = store_.transact([](PrimaryStore::Tx& tx) { return tx.pending_index_tasks(64); });
    if (tasks.empty()) return applied;
    for (const auto& t : tasks) {
      apply(t);
      ++applied;
    }
  }
}

void IndexWorker::start() {
  if (thread_.joinable()) return;
  {
    std::lock_guard lock(wake_mutex_);
    stopping_ = false;
    pending_ = true;
  }
  thread_ = std::thread([this] { run(); });
}

void IndexWorker::stop() {
  {
    std::lock_guard lock(wake_mutex_);
    stopping_ = true;
  }
  wake_cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

void IndexWorker::wake() {
  {
    std::lock_guard lock(wake_mutex_);
    pending_ = true;
  }
  wake_cv_.notify_all();
}

void IndexWorker::run() {
  for (;;) {
    {
      std::unique_lock lock(wake_mutex_);
      wake_cv_.wait(lock, [this] { return pending_ || stopping_; });
      if (stopping_) return;
      pending_ = false;
    }
    try {
      drain();
    } catch (const std::exception&) {
      // Tasks stay queued and are retried on the next wake-up.
    }
  }
}

ConsistencyReport IndexWorker::verify_consistency() {
  std::map<std::string, IndexDocument> expected;
  store_.transact([&](PrimaryStore::Tx& tx) {
    for (const auto& id : tx.shared_version_ids()) {
      if (auto v = tx.load_version(id)) expected.emplace(id, project(*v, umbrella_));
    }
  });
  ConsistencyReport report;
  std::set<std::string> seen;
  for (const auto& doc : index_.all()) {
    seen.insert(doc.version_id);
    auto it = expected.find(doc.version_id);
    if (it == expected.end()) {
      report.orphaned_in_index.push_back(doc.version_id);
    } else if (!(it->second == doc)) {
      report.stale_in_index.push_back(doc.version_id);
    }
  }
  for (const auto& [id, _] : expected) {
    if (!seen.contains(id)) report.missing_in_index.push_back(id);
  }
  return report;
}

void IndexWorker::reindex_all() {
  std::lock_guard lock(drain_mutex_);
  std::vector<IndexDocument> docs;
  store_.transact([&](PrimaryStore::Tx& tx) {
    for (const auto& id : tx.shared_version_ids()) {
      if (auto v = tx.load_version(id)) docs.push_back(project(*v, umbrella_));
    }
  });
  index_.clear();
  for (auto& d : docs) index_.upsert(std::move(d));
}

}  // namespace archive
