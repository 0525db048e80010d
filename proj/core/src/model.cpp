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

#include "archive/model.hpp"

#include <algorithm>

namespace archive {

using nlohmann::json;

std::string_view to_string(ResourceType t) {
  switch (t) {
    case ResourceType::dataset: return "dataset";
    case ResourceType::software: return "software";
    case ResourceType::publication: return "publication";
    case ResourceType::other: return "other";
  }
  return "other";
}

std::string_view to_string(VersionState s) { return s == VersionState::draft ? "draft" : "shared"; }

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::none: return "none";
    case Tier::community: return "community";
    case Tier::consortium: return "consortium";
  }
  return "none";
}

std::string_view to_string(CommunityKind k) { return k == CommunityKind::project ? "project" : "umbrella"; }

std::optional<ResourceType> parse_resource_type(std::string_view s) {
  for (auto t : {ResourceType::dataset, ResourceType::software, ResourceType::publication, ResourceType::other}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::optional<VersionState> parse_version_state(std::string_view s) {
  if (s == "draft") return VersionState::draft;
  if (s == "shared") return VersionState::shared;
  return std::nullopt;
}

std::optional<Tier> parse_tier(std::string_view s) {
  for (auto t : {Tier::none, Tier::community, Tier::consortium}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::optional<CommunityKind> parse_community_kind(std::string_view s) {
  if (s == "project") return CommunityKind::project;
  if (s == "umbrella") return CommunityKind::umbrella;
  return std::nullopt;
}

std::uint64_t RecordVersion::total_size() const {
  std::uint64_t total = 0;
  for (const auto& f : files) total += f.size;
  return total;
}

const FileEntry* RecordVersion::find_file(std::string_view name) const {
  auto it = std::find_if(files.begin(), files.end(), [&](const FileEntry& f) { return f.name == name; });
  return it == files.end() ? nullptr : &*it;
}

const RecordVersion* Record::open_draft() const {
  const auto* v = latest();
  return v != nullptr && v->state == VersionState::draft ? v : nullptr;
}

const RecordVersion* Record::latest_shared() const {
  for (auto it = versions.rbegin(); it != versions.rend(); ++it) {
    if (it->state == VersionState::shared) return &*it;
  }
  return nullptr;
}

const RecordVersion* Record::version(int index) const {
  for (const auto& v : versions) {
    if (v.version_index == index) return &v;
  }
  return nullptr;
}

std::string make_version_id(std::string_view record_id, int version_index) {
  return std::string(record_id) + "-v" + std::to_string(version_index);
}

bool is_valid_file_name(std::string_view name) {
  if (name.empty() || name == "." || name == "..") return false;
  if (name.starts_with("..")) return false;
  for (char c : name) {
    if (c == '/' || c == '\\' || c == '\0') return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// JSON

json metadata_to_json(const MetadataDocument& m) {
  json authors = json::array();
  for (const auto& a : m.authors) {
    json affs = json::array();
    for (const auto& af : a.affiliations) {
      json o{{"name", af.name}};
      if (af.ror) o["ror"] = *af.ror;
      affs.push_back(std::move(o));
    }
    json o{{"name", a.name}, {"affiliations", std::move(affs)}};
    if (a.orcid) o["orcid"] = *a.orcid;
    authors.push_back(std::move(o));
  }
  json annotations = json::array();
  for (const auto& an : m.annotations) {
    annotations.push_back({{"label", an.label}, {"document", an.document}, {"media_type", an.media_type}});
  }
  return json{
      {"title", m.title},
      {"description", m.description},
      {"keywords", m.keywords},
      {"authors", std::move(authors)},
      {"license", m.license},
      {"resource_type", to_string(m.resource_type)},
      {"publication_date", format_date(m.publication_date)},
      {"annotations", std::move(annotations)},
  };
}

namespace {

class Reader {
 public:
  FieldErrors errors;

  std::string string(const json& obj, const std::string& key, const std::string& path, bool required) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) errors.push_back({path, "required"});
      return {};
    }
    if (!it->is_string()) {
      errors.push_back({path, "expected string"});
      return {};
    }
    return it->get<std::string>();
  }

  std::optional<std::string> optional_string(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) {
      errors.push_back({path, "expected string"});
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  const json* array(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    if (!it->is_array()) {
      errors.push_back({path, "expected array"});
      return nullptr;
    }
    return &*it;
  }

  bool object(const json& j, const std::string& path) {
    if (!j.is_object()) {
      errors.push_back({path, "expected object"});
      return false;
    }
    return true;
  }
};

}  // namespace

MetadataDocument metadata_from_json(const json& j) {
  Reader r;
  MetadataDocument m;
  if (!r.object(j, "metadata")) {
    throw Error(ErrorCode::validation, "invalid-metadata", "metadata must be a JSON object", r.errors);
  }
  m.title = r.string(j, "title", "title", true);
  m.description = r.string(j, "description", "description", false);
  m.license = r.string(j, "license", "license", true);

  if (auto rt = r.optional_string(j, "resource_type", "resource_type")) {
    if (auto parsed = parse_resource_type(*rt)) {
      m.resource_type = *parsed;
    } else {
      r.errors.push_back({"resource_type", "unknown resource type"});
    }
  }

  auto date = r.string(j, "publication_date", "publication_date", true);
  if (!date.empty()) {
    if (auto parsed = parse_date(date)) {
      m.publication_date = *parsed;
    } else {
      r.errors.push_back({"publication_date", "invalid date"});
    }
  }

  if (const json* kws = r.array(j, "keywords", "keywords")) {
    for (std::size_t i = 0; i < kws->size(); ++i) {
      const auto& k = (*kws)[i];
      if (k.is_string()) {
        m.keywords.push_back(k.get<std::string>());
      } else {
        r.errors.push_back({"keywords[" + std::to_string(i) + "]", "expected string"});
      }
    }
  }

  if (const json* authors = r.array(j, "authors", "authors")) {
    for (std::size_t i = 0; i < authors->size(); ++i) {
      const std::string path = "authors[" + std::to_string(i) + "]";
      const auto& a = (*authors)[i];
      if (!r.object(a, path)) continue;
      Author author;
      author.name = r.string(a, "name", path + ".name", true);
      author.orcid = r.optional_string(a, "orcid", path + ".orcid");
      if (const json* affs = r.array(a, "affiliations", path + ".affiliations")) {
        for (std::size_t k = 0; k < affs->size(); ++k) {
          const std::string apath = path + ".affiliations[" + std::to_string(k) + "]";
          const auto& af = (*affs)[k];
          if (!r.object(af, apath)) continue;
          Affiliation aff;
          aff.name = r.string(af, "name", apath + ".name", true);
          aff.ror = r.optional_string(af, "ror", apath + ".ror");
          author.affiliations.push_back(std::move(aff));
        }
      }
      m.authors.push_back(std::move(author));
    }
  }

  if (const json* anns = r.array(j, "annotations", "annotations")) {
    for (std::size_t i = 0; i < anns->size(); ++i) {
      const std::string path = "annotations[" + std::to_string(i) + "]";
      const auto& an = (*anns)[i];
      if (!r.object(an, path)) continue;
      AnnotationAttachment att;
      att.label = r.string(an, "label", path + ".label", false);
      auto doc = an.find("document");
      if (doc == an.end() || doc->is_null()) {
        r.errors.push_back({path + ".document", "required"});
      } else if (doc->is_string()) {
        att.document = doc->get<std::string>();
      } else {
        // Inline JSON is accepted and stored in its compact serialization.
        att.document = doc->dump();
      }
      if (auto mt = r.optional_string(an, "media_type", path + ".media_type")) {
        if (*mt != kJsonLdMediaType) r.errors.push_back({path + ".media_type", "must be application/ld+json"});
      }
      m.annotations.push_back(std::move(att));
    }
  }

  if (!r.errors.empty()) {
    throw Error(ErrorCode::validation, "invalid-metadata", "metadata failed validation", std::move(r.errors));
  }
  return m;
}

json file_to_json(const FileEntry& f) {
  return json{{"name", f.name}, {"size", f.size}, {"checksum", f.checksum}};
}

json version_to_json(const RecordVersion& v) {
  json files = json::array();
  for (const auto& f : v.files) files.push_back(file_to_json(f));
  json out{
      {"id", v.version_id},
      {"record_id", v.record_id},
      {"version_index", v.version_index},
      {"state", to_string(v.state)},
      {"tier", to_string(v.tier)},
      {"owner", v.owner},
      {"metadata", metadata_to_json(v.metadata)},
      {"files", std::move(files)},
      {"created_at", format_timestamp(v.created_at)},
  };
  if (v.shared_with) out["community"] = *v.shared_with;
  if (v.shared_at) out["shared_at"] = format_timestamp(*v.shared_at);
  return out;
}

json community_to_json(const Community& c) {
  return json{{"slug", c.slug}, {"display_name", c.display_name}, {"kind", to_string(c.kind)}};
}

}  // namespace archive
