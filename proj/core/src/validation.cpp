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

#include "archive/validation.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "archive/identifiers.hpp"

namespace archive {

namespace {

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string fold_case(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

FieldErrors validate_metadata(const MetadataDocument& m, const LicenseRegistry& licenses) {
  FieldErrors report;

  if (blank(m.title)) report.push_back({"title", "must not be empty"});

  if (m.license.empty()) {
    report.push_back({"license", "required"});
  } else if (!licenses.contains(m.license)) {
    report.push_back({"license", "unknown identifier"});
  }

  std::set<std::string> seen;
  for (std::size_t i = 0; i < m.keywords.size(); ++i) {
    const std::string path = "keywords[" + std::to_string(i) + "]";
    if (blank(m.keywords[i])) {
      report.push_back({path, "must not be empty"});
    } else if (!seen.insert(fold_case(m.keywords[i])).second) {
      report.push_back({path, "duplicate keyword"});
    }
  }

  for (std::size_t i = 0; i < m.authors.size(); ++i) {
    const auto& a = m.authors[i];
    const std::string path = "authors[" + std::to_string(i) + "]";
    if (blank(a.name)) report.push_back({path + ".name", "must not be empty"});
    if (a.orcid) {
      switch (ids::check_orcid(*a.orcid)) {
        case ids::OrcidStatus::valid: break;
        case ids::OrcidStatus::bad_format: report.push_back({path + ".orcid", "invalid format"}); break;
        case ids::OrcidStatus::checksum_mismatch: report.push_back({path + ".orcid", "checksum mismatch"}); break;
      }
    }
    for (std::size_t k = 0; k < a.affiliations.size(); ++k) {
      const auto& af = a.affiliations[k];
      const std::string apath = path + ".affiliations[" + std::to_string(k) + "]";
      if (blank(af.name)) report.push_back({apath + ".name", "must not be empty"});
      if (af.ror && !ids::is_valid_ror(*af.ror)) report.push_back({apath + ".ror", "invalid format"});
    }
  }

  for (std::size_t i = 0; i < m.annotations.size(); ++i) {
    const auto& an = m.annotations[i];
    const std::string path = "annotations[" + std::to_string(i) + "]";
    if (!nlohmann::json::accept(an.document)) report.push_back({path + ".document", "invalid JSON"});
    if (an.media_type != kJsonLdMediaType) report.push_back({path + ".media_type", "must be application/ld+json"});
  }

  return report;
}

void require_valid(const MetadataDocument& metadata, const LicenseRegistry& licenses) {
  auto report = validate_metadata(metadata, licenses);
  if (!report.empty()) {
    throw Error(ErrorCode::validation, "invalid-metadata", "metadata failed validation", std::move(report));
  }
}

}  // namespace archive
