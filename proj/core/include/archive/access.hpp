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
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "archive/model.hpp"
#include "archive/time.hpp"

namespace archive {

enum class Action {
  read_metadata,
  download_files,
  edit_metadata,
  modify_draft_files,
  create_version,
  share,
  mint_link,
  view_stats,
};

inline constexpr std::array kAllActions = {
    Action::read_metadata, Action::download_files, Action::edit_metadata, Action::modify_draft_files,
    Action::create_version, Action::share,         Action::mint_link,     Action::view_stats,
};

std::string_view to_string(Action a);

/// Denial reason codes carried by PermissionDecision and link redemption.
namespace reason {
inline constexpr std::string_view not_member = "not-member";
inline constexpr std::string_view not_owner = "not-owner";
inline constexpr std::string_view not_authenticated = "not-authenticated";
inline constexpr std::string_view draft_private = "draft-private";
inline constexpr std::string_view immutable_files = "immutable-files";
inline constexpr std::string_view view_only = "view-only";
inline constexpr std::string_view link_expired = "link-expired";
inline constexpr std::string_view revoked = "revoked";
inline constexpr std::string_view unknown_token = "unknown-token";
}  // namespace reason

struct PermissionDecision {
  bool allowed = false;
  /// Set iff !allowed.
  std::string reason;

  static PermissionDecision allow() { return {true, {}}; }
  static PermissionDecision deny(std::string_view why) { return {false, std::string(why)}; }
};

enum class LinkPermission { view, edit };
std::string_view to_string(LinkPermission p);
std::optional<LinkPermission> parse_link_permission(std::string_view s);

/// Persisted share link. Only the digest of the token is stored.
struct ShareLink {
  std::string token_hash;
  std::string record_id;
  LinkPermission permission = LinkPermission::view;
  std::string created_by;
  Timestamp created_at{};
  std::optional<Timestamp> expires_at;
  bool revoked = false;
};

struct ApiToken {
  std::string token_hash;
  std::string user_id;
  std::string label;
  Timestamp created_at{};
  bool revoked = false;
};

enum class Capability { read, edit, denied };

/// Outcome of redeeming a share link token.
struct LinkGrant {
  std::string record_id;
  Capability capability = Capability::denied;
  std::string reason;
};

/// An authenticated user together with their community memberships.
struct Principal {
  std::string user_id;
  std::set<std::string> memberships;
};

/// Who is asking: an optional authenticated user and an optional redeemed link.
/// Both unset means anonymous.
struct Subject {
  std::optional<Principal> user;
  std::optional<LinkGrant> link;

  bool anonymous() const { return !user && !link; }
};

/// The slice of a version that access decisions depend on. Index documents
/// project onto it as well, so search filtering uses the same rules.
struct VersionAccess {
  std::string record_id;
  std::string owner;
  VersionState state = VersionState::draft;
  Tier tier = Tier::none;
  std::optional<std::string> community;

  static VersionAccess of(const RecordVersion& v);
};

/// Permission matrix for tiered community sharing plus link capabilities.
PermissionDecision evaluate(const Subject& subject, Action action, const VersionAccess& version);

/// Redeems a link. `owner_projects` are the owner's project-community slugs;
/// edit capability needs the actor to share at least one of them.
LinkGrant redeem_link(const std::optional<ShareLink>& link, const std::optional<Principal>& actor,
                      const std::set<std::string>& owner_projects, Timestamp now);

/// Share-link URL: `<base>/records/<record_id>?token=<token>`.
std::string share_link_url(std::string_view base_url, std::string_view record_id, std::string_view token);

}  // namespace archive
