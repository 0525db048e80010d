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

#include "archive/archive.hpp"

#include <algorithm>

#include "archive/crypto.hpp"
#include "archive/error.hpp"
#include "archive/validation.hpp"

namespace archive {

namespace {

constexpr std::size_t kTokenIdLength = 16;

[[noreturn]] void deny(const PermissionDecision& d) {
  throw Error(ErrorCode::permission_denied, d.reason, "permission denied: " + d.reason);
}

Error validation_error(std::string field, std::string reason) {
  return Error(ErrorCode::validation, "invalid-request", field + ": " + reason, {{std::move(field), std::move(reason)}});
}

CountryTable load_countries(const DeploymentConfig& cfg) {
  return cfg.cidr_table.empty() ? CountryTable{} : CountryTable::load(cfg.cidr_table);
}

}  // namespace

Archive::Archive(DeploymentConfig config, Clock clock)
    : config_(std::move(config)),
      clock_(std::move(clock)),
      store_(std::make_unique<PrimaryStore>(config_.data_dir / "archive.db")),
      files_(config_.data_dir / "files") {
  config_.check();
  worker_ = std::make_unique<IndexWorker>(*store_, index_, config_.umbrella().slug);
  usage_ = std::make_unique<UsageTracker>(*store_, load_countries(config_), clock_, config_.salt_period);
  seed();
  // The embedded index is rebuilt from the primary store on every start.
  worker_->reindex_all();
  worker_->drain();
}

Archive::~Archive() { stop_background_indexing(); }

void Archive::seed() {
  store_->transact([&](PrimaryStore::Tx& tx) {
    for (const auto& c : config_.communities) tx.upsert_community(c.community);
  });
  for (const auto& u : config_.users) upsert_user(u);
}

// ---------------------------------------------------------------------------
// index maintenance

void Archive::start_background_indexing() {
  store_->set_index_listener([w = worker_.get()] { w->wake(); });
  worker_->start();
}

void Archive::stop_background_indexing() {
  store_->set_index_listener(nullptr);
  if (worker_) worker_->stop();
}

std::size_t Archive::flush_index() { return worker_->drain(); }
ConsistencyReport Archive::verify_consistency() { return worker_->verify_consistency(); }
void Archive::reindex_all() { worker_->reindex_all(); }

// ---------------------------------------------------------------------------
// users, tokens, membership

std::set<std::string> Archive::project_communities(const std::set<std::string>& slugs) const {
  std::set<std::string> out;
  for (const auto& s : slugs) {
    const auto* c = config_.find_community(s);
    if (c != nullptr && c->community.kind == CommunityKind::project) out.insert(s);
  }
  return out;
}

void Archive::upsert_user(const UserSeed& seed) {
  const std::string umbrella = config_.umbrella().slug;
  store_->transact([&](PrimaryStore::Tx& tx) {
    const bool existed = tx.find_user(seed.user_id).has_value();
    tx.upsert_user(UserAccount{seed.user_id, seed.email, seed.email_confirmed, {}});
    if (existed) return;
    for (const auto& slug : seed.memberships) tx.add_membership(seed.user_id, slug);
    if (!project_communities(seed.memberships).empty()) tx.add_membership(seed.user_id, umbrella);
  });
}

UserAccount Archive::user(const std::string& user_id) {
  auto u = store_->transact([&](PrimaryStore::Tx& tx) { return tx.find_user(user_id); });
  if (!u) throw Error(ErrorCode::not_found, "unknown-user", "unknown user " + user_id);
  return *u;
}

std::string Archive::mint_api_token(const std::string& user_id, const std::string& label) {
  const auto account = user(user_id);
  if (!account.email_confirmed) {
    throw Error(ErrorCode::unauthenticated, "email-unconfirmed", "email address not confirmed");
  }
  std::string secret = crypto::random_token(32);
  ApiToken token{crypto::sha256_hex(secret), user_id, label, clock_(), false};
  store_->transact([&](PrimaryStore::Tx& tx) { tx.insert_token(token); });
  return secret;
}

std::vector<ApiTokenInfo> Archive::list_api_tokens(const std::string& user_id) {
  auto tokens = store_->transact([&](PrimaryStore::Tx& tx) { return tx.tokens_of(user_id); });
  std::vector<ApiTokenInfo> out;
  for (const auto& t : tokens) {
    out.push_back({t.token_hash.substr(0, kTokenIdLength), t.label, t.created_at, t.revoked});
  }
  return out;
}

void Archive::revoke_api_token(const std::string& user_id, const std::string& token_id) {
  store_->transact([&](PrimaryStore::Tx& tx) {
    for (const auto& t : tx.tokens_of(user_id)) {
      if (token_id.size() == kTokenIdLength && t.token_hash.starts_with(token_id)) {
        tx.revoke_token(user_id, t.token_hash);
        return;
      }
    }
    throw_not_found("token");
  });
}

UserAccount Archive::authenticate(std::string_view bearer) {
  const std::string hash = crypto::sha256_hex(bearer);
  return store_->transact([&](PrimaryStore::Tx& tx) {
    auto token = tx.find_token(hash);
    if (!token || token->revoked) {
      throw Error(ErrorCode::unauthenticated, "invalid-token", "unknown or revoked token");
    }
    auto account = tx.find_user(token->user_id);
    if (!account) throw Error(ErrorCode::unauthenticated, "invalid-token", "token owner no longer exists");
    if (!account->email_confirmed) {
      throw Error(ErrorCode::unauthenticated, "email-unconfirmed", "email address not confirmed");
    }
    return *account;
  });
}

std::vector<Community> Archive::communities() {
  return store_->transact([](PrimaryStore::Tx& tx) { return tx.list_communities(); });
}

void Archive::add_member(const std::string& manager, const std::string& slug, const std::string& user_id) {
  const auto* community = config_.find_community(slug);
  if (community == nullptr) throw_not_found("community");
  if (!config_.is_manager(manager, slug)) deny(PermissionDecision::deny("not-manager"));
  const std::string umbrella = config_.umbrella().slug;
  store_->transact([&](PrimaryStore::Tx& tx) {
    if (!tx.find_user(user_id)) throw Error(ErrorCode::not_found, "unknown-user", "unknown user " + user_id);
    tx.add_membership(user_id, slug);
    if (community->community.kind == CommunityKind::project) tx.add_membership(user_id, umbrella);
  });
}

void Archive::remove_member(const std::string& manager, const std::string& slug, const std::string& user_id) {
  const auto* community = config_.find_community(slug);
  if (community == nullptr) throw_not_found("community");
  if (!config_.is_manager(manager, slug)) deny(PermissionDecision::deny("not-manager"));
  const std::string umbrella = config_.umbrella().slug;
  store_->transact([&](PrimaryStore::Tx& tx) {
    auto account = tx.find_user(user_id);
    if (!account) throw Error(ErrorCode::not_found, "unknown-user", "unknown user " + user_id);
    if (community->community.kind == CommunityKind::umbrella) {
      if (!project_communities(account->memberships).empty()) {
        throw_conflict("member-of-project", "user still belongs to a project community");
      }
      tx.remove_membership(user_id, slug);
      return;
    }
    tx.remove_membership(user_id, slug);
  });
}

// ---------------------------------------------------------------------------
// permission plumbing

std::string Archive::require_user(const Caller& caller) const {
  if (!caller.user_id) throw Error(ErrorCode::unauthenticated, "unauthenticated", "authentication required");
  return *caller.user_id;
}

Subject Archive::resolve_in(PrimaryStore::Tx& tx, const Caller& caller, const std::string& record_id) {
  (void)record_id;
  Subject subject;
  if (caller.user_id) {
    if (auto account = tx.find_user(*caller.user_id); account && account->email_confirmed) {
      subject.user = Principal{account->user_id, account->memberships};
    }
  }
  if (caller.link_token) {
    auto link = tx.find_link(crypto::sha256_hex(*caller.link_token));
    std::set<std::string> owner_projects;
    if (link) {
      if (auto rec = tx.load_record(link->record_id)) {
        if (auto owner = tx.find_user(rec->owner)) owner_projects = project_communities(owner->memberships);
      }
    }
    subject.link = redeem_link(link, subject.user, owner_projects, clock_());
  }
  return subject;
}

Subject Archive::resolve(const Caller& caller, const std::string& record_id) {
  return store_->transact([&](PrimaryStore::Tx& tx) { return resolve_in(tx, caller, record_id); });
}

PermissionDecision Archive::evaluate(const Caller& caller, Action action, const RecordVersion& version) {
  return archive::evaluate(resolve(caller, version.record_id), action, VersionAccess::of(version));
}

Record Archive::load_readable(PrimaryStore::Tx& tx, const Subject& subject, const std::string& record_id) {
  auto record = tx.load_record(record_id);
  if (!record) throw_not_found("record");
  const bool readable = std::any_of(record->versions.begin(), record->versions.end(), [&](const RecordVersion& v) {
    return archive::evaluate(subject, Action::read_metadata, VersionAccess::of(v)).allowed;
  });
  if (!readable) throw_not_found("record");
  return *record;
}

void Archive::require(const Subject& subject, Action action, const RecordVersion& v) {
  const auto access = VersionAccess::of(v);
  if (!archive::evaluate(subject, Action::read_metadata, access).allowed) throw_not_found("record");
  if (action == Action::read_metadata) return;
  auto decision = archive::evaluate(subject, action, access);
  if (!decision.allowed) deny(decision);
}

// ---------------------------------------------------------------------------
// quota

std::uint64_t Archive::quota_in(PrimaryStore::Tx& tx, const std::string& record_id) {
  if (auto q = tx.record_quota(record_id)) return *q;
  if (auto it = config_.record_quota_overrides.find(record_id); it != config_.record_quota_overrides.end()) {
    return it->second;
  }
  return config_.record_quota;
}

std::uint64_t Archive::quota_for(const std::string& record_id) {
  return store_->transact([&](PrimaryStore::Tx& tx) { return quota_in(tx, record_id); });
}

void Archive::set_record_quota(const std::string& record_id, std::uint64_t bytes) {
  store_->transact([&](PrimaryStore::Tx& tx) {
    if (!tx.record_exists(record_id)) throw_not_found("record");
    tx.set_record_quota(record_id, bytes);
  });
}

bool Archive::enforce_quota(const RecordVersion& version, std::uint64_t incoming_size) {
  const std::uint64_t limit = quota_for(version.record_id);
  const std::uint64_t current = version.total_size();
  return current <= limit && incoming_size <= limit - current;
}

// ---------------------------------------------------------------------------
// lifecycle

RecordVersion Archive::create_draft(const Caller& caller, const MetadataDocument& metadata) {
  const std::string owner = require_user(caller);
  require_valid(metadata, config_.licenses);
  return store_->transact([&](PrimaryStore::Tx& tx) {
    auto account = tx.find_user(owner);
    if (!account) throw Error(ErrorCode::not_found, "unknown-user", "unknown owner " + owner);
    if (!account->email_confirmed) {
      throw Error(ErrorCode::unauthenticated, "email-unconfirmed", "email address not confirmed");
    }
    std::string record_id;
    do {
      record_id = crypto::random_id(10);
    } while (tx.record_exists(record_id));

    const Timestamp now = clock_();
    RecordVersion v;
    v.record_id = record_id;
    v.version_index = 1;
    v.version_id = make_version_id(record_id, 1);
    v.owner = owner;
    v.metadata = metadata;
    v.created_at = now;
    tx.insert_record(record_id, owner, now);
    tx.insert_version(v);
    return v;
  });
}

void Archive::check_upload(const Caller& caller, const std::string& record_id, const std::string& name,
                           std::uint64_t declared_size) {
  store_->transact([&](PrimaryStore::Tx& tx) {
    const Subject subject = resolve_in(tx, caller, record_id);
    const Record record = load_readable(tx, subject, record_id);
    const RecordVersion* target = record.open_draft() != nullptr ? record.open_draft() : record.latest();
    require(subject, Action::modify_draft_files, *target);
    if (!is_valid_file_name(name)) throw validation_error("name", "invalid file name");
    if (target->find_file(name) != nullptr) throw_conflict("duplicate-name", "file " + name + " already exists");
    const std::uint64_t limit = quota_in(tx, record_id);
    const std::uint64_t current = target->total_size();
    if (current > limit || declared_size > limit - current) {
      throw Error(ErrorCode::quota_exceeded, "quota-exceeded", "upload would exceed the record storage limit");
    }
  });
}

FileEntry Archive::attach_file(const Caller& caller, const std::string& record_id, const std::string& name,
                               const StoredBlob& blob) {
  return store_->transact([&](PrimaryStore::Tx& tx) {
    const Subject subject = resolve_in(tx, caller, record_id);
    const Record record = load_readable(tx, subject, record_id);
    const RecordVersion* target = record.open_draft() != nullptr ? record.open_draft() : record.latest();
    require(subject, Action::modify_draft_files, *target);
    if (!is_valid_file_name(name)) throw validation_error("name", "invalid file name");
    if (target->find_file(name) != nullptr) throw_conflict("duplicate-name", "file " + name + " already exists");
    const std::uint64_t limit = quota_in(tx, record_id);
    const std::uint64_t current = target->total_size();
    if (current > limit || blob.size > limit - current) {
      throw Error(ErrorCode::quota_exceeded, "quota-exceeded", "upload would exceed the record storage limit");
    }
    if (files_.size_of(blob.digest) != blob.size) {
      throw Error(ErrorCode::internal, "blob-missing", "stored content does not match upload");
    }
    FileEntry entry{name, blob.size, crypto::tagged_checksum(blob.digest), blob.digest};
    tx.insert_file(target->version_id, entry);
    return entry;
  });
}

FileEntry Archive::attach_bytes(const Caller& caller, const std::string& record_id, const std::string& name,
                                std::string_view bytes) {
  check_upload(caller, record_id, name, bytes.size());
  // TODO: garbage-collect blobs left unreferenced when the attach below fails.
  return attach_file(caller, record_id, name, files_.put(bytes));
}

void Archive::remove_file(const Caller& caller, const std::string& record_id, const std::string& name) {
  store_->transact([&](PrimaryStore::Tx& tx) {
    const Subject subject = resolve_in(tx, caller, record_id);
    const Record record = load_readable(tx, subject, record_id);
    const RecordVersion* target = record.open_draft() != nullptr ? record.open_draft() : record.latest();
    require(subject, Action::modify_draft_files, *target);
    if (!tx.delete_file(target->version_id, name)) throw_not_found("file");
  });
}

RecordVersion Archive::update_metadata(const Caller& caller, const std::string& record_id,
                                       std::optional<int> version_index, const MetadataDocument& metadata) {
  return store_->transact([&](PrimaryStore::Tx& tx) {
    const Subject subject = resolve_in(tx, caller, record_id);
    const Record record = load_readable(tx, subject, record_id);
    const RecordVersion* target = nullptr;
    if (version_index) {
      target = record.version(*version_index);
      if (target == nullptr) throw_not_found("version");
    } else {
      target = record.latest();
    }
    require(subject, Action::edit_metadata, *target);
    require_valid(metadata, config_.licenses);
    tx.update_metadata(target->version_id, metadata);
    if (target->state == VersionState::shared) tx.enqueue_index_task(target->version_id);
    RecordVersion updated = *target;
    updated.metadata = metadata;
    return updated;
  });
}

RecordVersion Archive::share(const Caller& caller, const std::string& record_id, Tier tier,
                             const std::optional<std::string>& community) {
  return store_->transact([&](PrimaryStore::Tx& tx) {
    const Subject subject = resolve_in(tx, caller, record_id);
    const Record record = load_readable(tx, subject, record_id);
    const RecordVersion* target = record.latest();
    require(subject, Action::share, *target);

    const std::string umbrella = config_.umbrella().slug;
    std::optional<std::string> shared_with;
    if (tier == Tier::none) throw validation_error("tier", "must be community or consortium");
    if (tier == Tier::community) {
      if (!community || community->empty()) throw validation_error("community", "required for community tier");
      const auto* c = config_.find_community(*community);
      if (c == nullptr) throw validation_error("community", "unknown community");
      if (c->community.kind == CommunityKind::umbrella) {
        throw validation_error("community", "use the consortium tier for the umbrella community");
      }
      if (!subject.user || !subject.user->memberships.contains(*community)) {
        deny(PermissionDecision::deny(reason::not_member));
      }
      shared_with = *community;
    } else if (community && !community->empty() && *community != umbrella) {
      throw validation_error("community", "consortium tier targets the umbrella community");
    }

    if (target->state == VersionState::draft) {
      if (!tx.mark_shared(target->version_id, tier, shared_with, clock_())) {
        throw_conflict("already-shared", "version is already shared");
      }
    } else if (target->tier == Tier::community && tier == Tier::consortium) {
      if (!tx.promote_tier(target->version_id, Tier::community, Tier::consortium, std::nullopt)) {
        throw_conflict("already-shared", "version is already shared");
      }
    } else {
      throw_conflict("already-shared", "version is already shared");
    }
    tx.enqueue_index_task(target->version_id);
    return *tx.load_version(target->version_id);
  });
}

RecordVersion Archive::new_version(const Caller& caller, const std::string& record_id, bool import_files) {
  return store_->transact([&](PrimaryStore::Tx& tx) {
    const Subject subject = resolve_in(tx, caller, record_id);
    const Record record = load_readable(tx, subject, record_id);
    const RecordVersion* latest = record.latest();
    require(subject, Action::create_version, *latest);
    if (latest->state == VersionState::draft) throw_conflict("draft-exists", "record already has an open draft");

    RecordVersion v;
    v.record_id = record_id;
    v.version_index = latest->version_index + 1;
    v.version_id = make_version_id(record_id, v.version_index);
    v.owner = record.owner;
    v.metadata = latest->metadata;
    v.created_at = clock_();
    if (import_files) v.files = latest->files;
    tx.insert_version(v);
    return v;
  });
}

void Archive::discard_draft(const Caller& caller, const std::string& record_id) {
  store_->transact([&](PrimaryStore::Tx& tx) {
    const Subject subject = resolve_in(tx, caller, record_id);
    const Record record = load_readable(tx, subject, record_id);
    const RecordVersion* draft = record.open_draft();
    if (draft == nullptr) throw_conflict("no-draft", "record has no open draft");
    require(subject, Action::modify_draft_files, *draft);
    tx.delete_version(draft->version_id);
    if (record.versions.size() == 1) tx.delete_record(record_id);
  });
}

std::vector<RecordVersion> Archive::list_versions(const Caller& caller, const std::string& record_id) {
  return store_->transact([&](PrimaryStore::Tx& tx) {
    const Subject subject = resolve_in(tx, caller, record_id);
    const Record record = load_readable(tx, subject, record_id);
    std::vector<RecordVersion> out;
    for (const auto& v : record.versions) {
      if (archive::evaluate(subject, Action::read_metadata, VersionAccess::of(v)).allowed) out.push_back(v);
    }
    return out;
  });
}

RecordVersion Archive::read_version(const Caller& caller, const std::string& record_id,
                                    std::optional<int> version_index) {
  return store_->transact([&](PrimaryStore::Tx& tx) {
    const Subject subject = resolve_in(tx, caller, record_id);
    const Record record = load_readable(tx, subject, record_id);
    if (version_index) {
      const auto* v = record.version(*version_index);
      if (v == nullptr) throw_not_found("version");
      require(subject, Action::read_metadata, *v);
      return *v;
    }
    for (auto it = record.versions.rbegin(); it != record.versions.rend(); ++it) {
      if (archive::evaluate(subject, Action::read_metadata, VersionAccess::of(*it)).allowed) return *it;
    }
    throw_not_found("record");
  });
}

FileHandle Archive::open_file(const Caller& caller, const std::string& record_id, std::optional<int> version_index,
                              const std::string& name) {
  return store_->transact([&](PrimaryStore::Tx& tx) {
    const Subject subject = resolve_in(tx, caller, record_id);
    const Record record = load_readable(tx, subject, record_id);
    const RecordVersion* v = nullptr;
    if (version_index) {
      v = record.version(*version_index);
      if (v == nullptr) throw_not_found("version");
    } else {
      for (auto it = record.versions.rbegin(); it != record.versions.rend() && v == nullptr; ++it) {
        if (archive::evaluate(subject, Action::read_metadata, VersionAccess::of(*it)).allowed) v = &*it;
      }
    }
    require(subject, Action::download_files, *v);
    const FileEntry* entry = v->find_file(name);
    if (entry == nullptr) throw_not_found("file");
    return FileHandle{*v, *entry, files_.path_for(entry->content_ref)};
  });
}

// ---------------------------------------------------------------------------
// share links

MintedLink Archive::mint_share_link(const Caller& caller, const std::string& record_id, LinkPermission permission,
                                    std::optional<Timestamp> expires_at) {
  return store_->transact([&](PrimaryStore::Tx& tx) {
    const Subject subject = resolve_in(tx, caller, record_id);
    const Record record = load_readable(tx, subject, record_id);
    require(subject, Action::mint_link, *record.latest());
    const std::string user_id = require_user(caller);
    MintedLink minted;
    minted.token = crypto::random_token(32);
    minted.link = ShareLink{crypto::sha256_hex(minted.token), record_id, permission, user_id, clock_(), expires_at, false};
    minted.url = share_link_url(config_.base_url, record_id, minted.token);
    tx.insert_link(minted.link);
    return minted;
  });
}

LinkGrant Archive::redeem_share_link(const std::string& token, const std::optional<std::string>& user_id) {
  return store_->transact([&](PrimaryStore::Tx& tx) {
    Caller caller{user_id, token};
    return *resolve_in(tx, caller, {}).link;
  });
}

void Archive::revoke_share_link(const Caller& caller, const std::string& token) {
  const std::string user_id = require_user(caller);
  store_->transact([&](PrimaryStore::Tx& tx) {
    auto link = tx.find_link(crypto::sha256_hex(token));
    if (!link) throw Error(ErrorCode::not_found, "unknown-token", "unknown share link");
    auto record = tx.load_record(link->record_id);
    const bool allowed = link->created_by == user_id || (record && record->owner == user_id);
    if (!allowed) deny(PermissionDecision::deny(reason::not_owner));
    tx.set_link_revoked(link->token_hash);
  });
}

// ---------------------------------------------------------------------------
// search

SearchPage Archive::search(const Caller& caller, const SearchQuery& query) {
  check_query(query);
  if (query.community && config_.find_community(*query.community) == nullptr) {
    throw Error(ErrorCode::bad_request, "bad-filter", "unknown community " + *query.community);
  }
  std::optional<Principal> principal;
  if (caller.user_id) {
    auto account = store_->transact([&](PrimaryStore::Tx& tx) { return tx.find_user(*caller.user_id); });
    if (account && account->email_confirmed) principal = Principal{account->user_id, account->memberships};
  }
  if (query.owner_me) {
    if (!principal) throw Error(ErrorCode::unauthenticated, "unauthenticated", "owner=me requires authentication");
    // The personal workspace comes from the primary store and includes drafts.
    std::vector<IndexDocument> own;
    const std::string umbrella = config_.umbrella().slug;
    store_->transact([&](PrimaryStore::Tx& tx) {
      for (const auto& id : tx.record_ids_owned_by(principal->user_id)) {
        if (auto rec = tx.load_record(id)) {
          for (const auto& v : rec->versions) own.push_back(project(v, umbrella));
        }
      }
    });
    return rank_and_page(own, query);
  }
  return index_.search(principal, query);
}

// ---------------------------------------------------------------------------
// usage

RecordVersion Archive::view_record(const Caller& caller, const std::string& record_id,
                                   std::optional<int> version_index, const RequesterContext& ctx) {
  auto v = read_version(caller, record_id, version_index);
  usage_->ingest_view(v.record_id, v.version_id, ctx);
  return v;
}

void Archive::record_download(const FileHandle& file, const RequesterContext& ctx) {
  usage_->ingest_download(file.version.record_id, file.version.version_id, file.entry.name, ctx);
}

UsageAggregate Archive::version_stats(const Caller& caller, const std::string& record_id, int version_index) {
  auto v = store_->transact([&](PrimaryStore::Tx& tx) {
    const Subject subject = resolve_in(tx, caller, record_id);
    const Record record = load_readable(tx, subject, record_id);
    const auto* version = record.version(version_index);
    if (version == nullptr) throw_not_found("version");
    require(subject, Action::view_stats, *version);
    return *version;
  });
  return usage_->stats_for_version(v.version_id);
}

RecordStats Archive::record_stats(const Caller& caller, const std::string& record_id) {
  auto visible = store_->transact([&](PrimaryStore::Tx& tx) {
    const Subject subject = resolve_in(tx, caller, record_id);
    const Record record = load_readable(tx, subject, record_id);
    std::vector<RecordVersion> out;
    for (const auto& v : record.versions) {
      if (archive::evaluate(subject, Action::view_stats, VersionAccess::of(v)).allowed) out.push_back(v);
    }
    if (out.empty()) deny(PermissionDecision::deny(reason::not_member));
    return out;
  });
  RecordStats stats;
  std::vector<UsageAggregate> parts;
  for (auto& v : visible) {
    auto agg = usage_->stats_for_version(v.version_id);
    parts.push_back(agg);
    stats.versions.emplace_back(std::move(v), std::move(agg));
  }
  stats.cumulative = sum_aggregates(parts);
  return stats;
}

// ---------------------------------------------------------------------------
// export

ExportContext Archive::export_context() const {
  return ExportContext{config_.display_name, config_.base_url, &config_.licenses};
}

ExportedDocument Archive::export_record(const Caller& caller, const std::string& record_id,
                                        std::optional<int> version_index, ExportFormat format) {
  return export_version(read_version(caller, record_id, version_index), format, export_context());
}

}  // namespace archive
