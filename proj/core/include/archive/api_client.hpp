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
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace archive::client {

struct ClientConfig {
  std::string server_url;
  std::string bearer_token;
  std::optional<std::string> default_community;
};

/// Failure talking to a server. `kind` drives the command-line exit code.
class ClientError : public std::runtime_error {
 public:
  enum class Kind { local, http, network, checksum };

  ClientError(Kind kind, std::string message, int status = 0, std::string code = {},
              nlohmann::json field_errors = nlohmann::json::array());

  Kind kind() const noexcept { return kind_; }
  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }
  const nlohmann::json& field_errors() const noexcept { return field_errors_; }

 private:
  Kind kind_;
  int status_;
  std::string code_;
  nlohmann::json field_errors_;
};

/// 0 ok, 1 validation or local, 2 authentication, 3 network,
/// 4 permission / quota / conflict / not found, 5 checksum mismatch.
int exit_code_for(const ClientError& e);

struct SearchParams {
  std::string text;
  std::optional<std::string> community;
  std::optional<std::string> resource_type;
  bool owner_me = false;
  std::optional<std::string> sort;
  int page = 1;
  int size = 20;
};

struct DownloadResult {
  std::filesystem::path path;
  std::uint64_t size = 0;
  std::string checksum;
};

/// Pieces of a share-link URL: `<base>/records/<id>?token=<token>`.
struct ShareLinkParts {
  std::string base_url;
  std::string record_id;
  std::string token;
};
std::optional<ShareLinkParts> parse_share_link(std::string_view url);

/// Percent-encodes everything outside the unreserved URI character set.
std::string encode_path_segment(std::string_view s);

/// Tagged SHA-256 of a file's bytes ("sha-256:<hex>").
std::string file_checksum(const std::filesystem::path& path);

/// Thin synchronous client for the /api surface.
class ApiClient {
 public:
  explicit ApiClient(ClientConfig config);
  ~ApiClient();
  ApiClient(ApiClient&&) noexcept;
  ApiClient& operator=(ApiClient&&) noexcept;

  const ClientConfig& config() const { return config_; }
  /// Share-link token sent as `?token=` on record reads and downloads.
  void set_link_token(std::optional<std::string> token) { link_token_ = std::move(token); }

  nlohmann::json health();
  nlohmann::json communities();

  nlohmann::json create_record(const nlohmann::json& metadata);
  nlohmann::json get_record(const std::string& id, std::optional<int> version = std::nullopt);
  nlohmann::json list_versions(const std::string& id);
  nlohmann::json update_draft(const std::string& id, const nlohmann::json& metadata,
                              std::optional<int> version = std::nullopt);
  void discard_draft(const std::string& id);

  nlohmann::json upload_file(const std::string& id, const std::string& name, const std::filesystem::path& path);
  nlohmann::json upload_bytes(const std::string& id, const std::string& name, std::string_view bytes);
  void remove_file(const std::string& id, const std::string& name);
  /// Streams a file to `dest`, hashing as it goes. Does not compare checksums.
  DownloadResult download_file(const std::string& id, const std::string& name, const std::filesystem::path& dest,
                               std::optional<int> version = std::nullopt);

  nlohmann::json share(const std::string& id, const std::string& tier, const std::optional<std::string>& community);
  nlohmann::json new_version(const std::string& id, bool import_files);
  nlohmann::json mint_link(const std::string& id, const std::string& permission,
                           const std::optional<std::string>& expires_at = std::nullopt);
  void revoke_link(const std::string& token);

  std::string export_record(const std::string& id, const std::string& format,
                            std::optional<int> version = std::nullopt);
  nlohmann::json record_stats(const std::string& id);
  nlohmann::json version_stats(const std::string& id, int version);
  nlohmann::json search(const SearchParams& params);

 private:
  struct Impl;
  std::string path(const std::string& p, std::optional<int> version = std::nullopt) const;

  ClientConfig config_;
  std::optional<std::string> link_token_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace archive::client
