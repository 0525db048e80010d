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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "archive/licenses.hpp"
#include "archive/model.hpp"

namespace archive {

inline constexpr std::uint64_t kDefaultRecordQuota = 100ULL * 1000 * 1000 * 1000;  // 100 GB

/// Directory holding bundled license texts.
std::filesystem::path default_license_text_dir();

struct CommunityConfig {
  Community community;
  /// Users holding the community-manager role.
  std::set<std::string> managers;
};

struct UserSeed {
  std::string user_id;
  std::string email;
  bool email_confirmed = true;
  std::set<std::string> memberships;
};

/// Deployment configuration. See config/archive.example.json for the file format.
struct DeploymentConfig {
  std::string display_name = "Consortium Archive";
  std::string base_url = "http://127.0.0.1:8080";
  std::string listen_host = "127.0.0.1";
  int listen_port = 8080;
  std::filesystem::path data_dir = "data";

  std::uint64_t record_quota = kDefaultRecordQuota;
  std::map<std::string, std::uint64_t> record_quota_overrides;

  std::chrono::seconds salt_period{std::chrono::hours{24}};
  std::filesystem::path cidr_table;

  std::vector<CommunityConfig> communities;
  std::vector<UserSeed> users;

  LicenseRegistry licenses = LicenseRegistry::defaults(default_license_text_dir());

  const CommunityConfig* find_community(const std::string& slug) const;
  const Community& umbrella() const;
  bool is_manager(const std::string& user_id, const std::string& slug) const;

  /// Throws Error{constraint} unless exactly one umbrella community exists and
  /// slugs are unique lowercase identifiers.
  void check() const;
};

/// Parses the JSON configuration. Relative paths resolve against `base_dir`.
DeploymentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
DeploymentConfig load_config(const std::filesystem::path& path);

}  // namespace archive
