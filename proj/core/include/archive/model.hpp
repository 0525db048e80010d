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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "archive/error.hpp"
#include "archive/time.hpp"

namespace archive {

enum class ResourceType { dataset, software, publication, other };
enum class VersionState { draft, shared };
enum class Tier { none, community, consortium };
enum class CommunityKind { project, umbrella };

std::string_view to_string(ResourceType t);
std::string_view to_string(VersionState s);
std::string_view to_string(Tier t);
std::string_view to_string(CommunityKind k);
std::optional<ResourceType> parse_resource_type(std::string_view s);
std::optional<VersionState> parse_version_state(std::string_view s);
std::optional<Tier> parse_tier(std::string_view s);
std::optional<CommunityKind> parse_community_kind(std::string_view s);

inline constexpr std::string_view kJsonLdMediaType = "application/ld+json";

struct Affiliation {
  std::string name;
  std::optional<std::string> ror;

  bool operator==(const Affiliation&) const = default;
};

struct Author {
  std::string name;
  std::optional<std::string> orcid;
  std::vector<Affiliation> affiliations;

  bool operator==(const Author&) const = default;
};

/// A JSON-LD document attached to the metadata, kept as the uploaded bytes.
struct AnnotationAttachment {
  std::string label;
  std::string document;
  std::string media_type{kJsonLdMediaType};

  bool operator==(const AnnotationAttachment&) const = default;
};

struct MetadataDocument {
  std::string title;
  std::string description;
  std::vector<std::string> keywords;
  std::vector<Author> authors;
  std::string license;
  ResourceType resource_type = ResourceType::dataset;
  Date publication_date{std::chrono::year{1970}, std::chrono::month{1}, std::chrono::day{1}};
  std::vector<AnnotationAttachment> annotations;

  bool operator==(const MetadataDocument&) const = default;
};

struct FileEntry {
  std::string name;
  std::uint64_t size = 0;
  /// "sha-256:<lowercase hex>"
  std::string checksum;
  /// Handle into the content-addressed file store (the hex digest).
  std::string content_ref;

  bool operator==(const FileEntry&) const = default;
};

struct RecordVersion {
  std::string version_id;
  std::string record_id;
  int version_index = 1;
  VersionState state = VersionState::draft;
  Tier tier = Tier::none;
  std::optional<std::string> shared_with;
  std::string owner;
  MetadataDocument metadata;
  std::vector<FileEntry> files;
  Timestamp created_at{};
  std::optional<Timestamp> shared_at;

  std::uint64_t total_size() const;
  const FileEntry* find_file(std::string_view name) const;
};

struct Record {
  std::string record_id;
  std::string owner;
  std::vector<RecordVersion> versions;

  const RecordVersion* latest() const { return versions.empty() ? nullptr : &versions.back(); }
  const RecordVersion* open_draft() const;
  const RecordVersion* latest_shared() const;
  const RecordVersion* version(int index) const;
};

struct Community {
  std::string slug;
  std::string display_name;
  CommunityKind kind = CommunityKind::project;
};

struct UserAccount {
  std::string user_id;
  std::string email;
  bool email_confirmed = false;
  std::set<std::string> memberships;
};

/// `version_id = record_id + "-v" + index`.
std::string make_version_id(std::string_view record_id, int version_index);

/// Rejects empty names, path separators, "." / ".." and names starting with "..".
bool is_valid_file_name(std::string_view name);

/// Canonical JSON (keys sorted, optional fields omitted when unset).
nlohmann::json metadata_to_json(const MetadataDocument& m);

/// Parses metadata JSON; shape and type problems are reported as field errors
/// (throws Error{validation}). Semantic checks are left to validate_metadata.
MetadataDocument metadata_from_json(const nlohmann::json& j);

nlohmann::json file_to_json(const FileEntry& f);
nlohmann::json version_to_json(const RecordVersion& v);
nlohmann::json community_to_json(const Community& c);

}  // namespace archive
