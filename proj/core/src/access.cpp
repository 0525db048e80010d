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

#include "archive/access.hpp"

namespace archive {

std::string_view to_string(Action a) {
  switch (a) {
    case Action::read_metadata: return "read_metadata";
    case Action::download_files: return "download_files";
    case Action::edit_metadata: return "edit_metadata";
    case Action::modify_draft_files: return "modify_draft_files";
    case Action::create_version: return "create_version";
    case Action::share: return "share";
    case Action::mint_link: return "mint_link";
    case Action::view_stats: return "view_stats";
  }
  return "unknown";
}

std::string_view to_string(LinkPermission p) { return p == LinkPermission::view ? "view" : "edit"; }

std::optional<LinkPermission> parse_link_permission(std::string_view s) {
  if (s == "view") return LinkPermission::view;
  if (s == "edit") return LinkPermission::edit;
  return std::nullopt;
}

VersionAccess VersionAccess::of(const RecordVersion& v) {
  return {v.record_id, v.owner, v.state, v.tier, v.shared_with};
}

namespace {

bool is_read_action(Action a) {
  return a == Action::read_metadata || a == Action::download_files || a == Action::view_stats;
}

PermissionDecision owner_decision(Action action, const VersionAccess& v) {
  if (v.state == VersionState::draft) return PermissionDecision::allow();
  if (action == Action::modify_draft_files) return PermissionDecision::deny(reason::immutable_files);
  return PermissionDecision::allow();
}

PermissionDecision user_decision(const std::optional<Principal>& user, Action action, const VersionAccess& v) {
  if (user && user->user_id == v.owner) return owner_decision(action, v);
  if (v.state == VersionState::draft) return PermissionDecision::deny(reason::draft_private);
  if (!user) return PermissionDecision::deny(reason::not_authenticated);

  const bool reader = v.tier == Tier::consortium
                          ? !user->memberships.empty()
                          : v.community.has_value() && user->memberships.contains(*v.community);
  if (!reader) return PermissionDecision::deny(reason::not_member);
  if (is_read_action(action)) return PermissionDecision::allow();
  if (action == Action::modify_draft_files) return PermissionDecision::deny(reason::immutable_files);
  return PermissionDecision::deny(reason::not_owner);
}

PermissionDecision link_decision(const LinkGrant& link, Action action, const VersionAccess& v) {
  switch (link.capability) {
    case Capability::denied:
      return PermissionDecision::deny(link.reason);
    case Capability::read:
      // View links cover shared versions only.
      if (v.state == VersionState::draft) return PermissionDecision::deny(reason::draft_private);
      if (is_read_action(action)) return PermissionDecision::allow();
      if (action == Action::modify_draft_files) return PermissionDecision::deny(reason::immutable_files);
      return PermissionDecision::deny(reason::view_only);
    case Capability::edit:
      if (action == Action::share || action == Action::mint_link) return PermissionDecision::deny(reason::not_owner);
      if (action == Action::modify_draft_files && v.state == VersionState::shared) {
        return PermissionDecision::deny(reason::immutable_files);
      }
      return PermissionDecision::allow();
  }
  return PermissionDecision::deny(reason::unknown_token);
}

}  // namespace

PermissionDecision evaluate(const Subject& subject, Action action, const VersionAccess& version) {
  auto by_user = user_decision(subject.user, action, version);
  if (by_user.allowed) return by_user;
  if (subject.link && subject.link->record_id == version.record_id) {
    return link_decision(*subject.link, action, version);
  }
  return by_user;
}

LinkGrant redeem_link(const std::optional<ShareLink>& link, const std::optional<Principal>& actor,
                      const std::set<std::string>& owner_projects, Timestamp now) {
  if (!link) return {"", Capability::denied, std::string(reason::unknown_token)};
  LinkGrant grant{link->record_id, Capability::denied, {}};
  if (link->revoked) {
    grant.reason = reason::revoked;
  } else if (link->expires_at && now >= *link->expires_at) {
    grant.reason = reason::link_expired;
  } else if (link->permission == LinkPermission::view) {
    grant.capability = Capability::read;
  } else {
    bool shares_project = false;
    if (actor) {
      for (const auto& slug : owner_projects) {
        if (actor->memberships.contains(slug)) {
          shares_project = true;
          break;
        }
      }
    }
    if (shares_project) {
      grant.capability = Capability::edit;
    } else {
      grant.reason = reason::not_member;
    }
  }
  return grant;
}

std::string share_link_url(std::string_view base_url, std::string_view record_id, std::string_view token) {
  std::string base(base_url);
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base + "/records/" + std::string(record_id) + "?token=" + std::string(token);
}

}  // namespace archive
