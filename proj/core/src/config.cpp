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

#include "archive/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "archive/error.hpp"

namespace archive {

std::filesystem::path default_license_text_dir() {
  if (const char* dir = std::getenv("ARCHIVE_DATA_DIR"); dir != nullptr && *dir != '\0') {
    return std::filesystem::path(dir) / "licenses";
  }
  return std::filesystem::path(ARCHIVE_DATA_DIR) / "licenses";
}

using nlohmann::json;

const CommunityConfig* DeploymentConfig::find_community(const std::string& slug) const {
  auto it = std::find_if(communities.begin(), communities.end(),
                         [&](const CommunityConfig& c) { return c.community.slug == slug; });
  return it == communities.end() ? nullptr : &*it;
}

const Community& DeploymentConfig::umbrella() const {
  for (const auto& c : communities) {
    if (c.community.kind == CommunityKind::umbrella) return c.community;
  }
  throw Error(ErrorCode::constraint, "no-umbrella", "deployment has no umbrella community");
}

bool DeploymentConfig::is_manager(const std::string& user_id, const std::string& slug) const {
  const auto* c = find_community(slug);
  return c != nullptr && c->managers.contains(user_id);
}

void DeploymentConfig::check() const {
  int umbrellas = 0;
  std::set<std::string> slugs;
  for (const auto& c : communities) {
    const auto& slug = c.community.slug;
    const bool lower = !slug.empty() && std::all_of(slug.begin(), slug.end(), [](char ch) {
      return (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '-' || ch == '_';
    });
    if (!lower) throw Error(ErrorCode::constraint, "bad-slug", "invalid community slug '" + slug + "'");
    if (!slugs.insert(slug).second) {
      throw Error(ErrorCode::constraint, "duplicate-slug", "duplicate community slug '" + slug + "'");
    }
    if (c.community.kind == CommunityKind::umbrella) ++umbrellas;
  }
  if (umbrellas != 1) {
    throw Error(ErrorCode::constraint, "umbrella-count", "exactly one umbrella community is required");
  }
  for (const auto& u : users) {
    for (const auto& m : u.memberships) {
      if (!slugs.contains(m)) {
        throw Error(ErrorCode::constraint, "unknown-community", "user " + u.user_id + " references unknown community " + m);
      }
    }
  }
}

DeploymentConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };

  DeploymentConfig cfg;
  cfg.display_name = j.value("display_name", cfg.display_name);
  cfg.base_url = j.value("base_url", cfg.base_url);
  cfg.listen_host = j.value("listen_host", cfg.listen_host);
  cfg.listen_port = j.value("listen_port", cfg.listen_port);
  if (j.contains("data_dir")) cfg.data_dir = resolve(j.at("data_dir").get<std::string>());
  cfg.record_quota = j.value("record_quota_bytes", cfg.record_quota);
  if (j.contains("record_quota_overrides")) {
    cfg.record_quota_overrides = j.at("record_quota_overrides").get<std::map<std::string, std::uint64_t>>();
  }
  if (j.contains("salt_period_hours")) cfg.salt_period = std::chrono::hours{j.at("salt_period_hours").get<int>()};
  if (j.contains("cidr_table")) cfg.cidr_table = resolve(j.at("cidr_table").get<std::string>());

  for (const auto& c : j.value("communities", json::array())) {
    CommunityConfig cc;
    cc.community.slug = c.at("slug").get<std::string>();
    cc.community.display_name = c.value("display_name", cc.community.slug);
    auto kind = parse_community_kind(c.value("kind", "project"));
    if (!kind) throw Error(ErrorCode::constraint, "bad-kind", "community kind must be project or umbrella");
    cc.community.kind = *kind;
    cc.managers = c.value("managers", std::set<std::string>{});
    cfg.communities.push_back(std::move(cc));
  }

  for (const auto& u : j.value("users", json::array())) {
    UserSeed seed;
    seed.user_id = u.at("user_id").get<std::string>();
    seed.email = u.value("email", "");
    seed.email_confirmed = u.value("email_confirmed", true);
    seed.memberships = u.value("memberships", std::set<std::string>{});
    cfg.users.push_back(std::move(seed));
  }

  if (j.contains("licenses") || j.contains("license_text_dir")) {
    std::filesystem::path text_dir =
        j.contains("license_text_dir") ? resolve(j.at("license_text_dir").get<std::string>())
                                       : default_license_text_dir();
    if (j.contains("licenses")) {
      cfg.licenses = LicenseRegistry(j.at("licenses").get<std::vector<License>>(), text_dir);
    } else {
      cfg.licenses = LicenseRegistry::defaults(text_dir);
    }
  }

  cfg.check();
  return cfg;
}

DeploymentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::bad_request, "config-unreadable", "cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::bad_request, "config-invalid", "config " + path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

}  // namespace archive
