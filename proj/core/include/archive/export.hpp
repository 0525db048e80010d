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

#include <optional>
#include <string>
#include <string_view>

#include "archive/licenses.hpp"
#include "archive/model.hpp"

namespace archive {

enum class ExportFormat { json, json_ld, datacite_xml, dublincore_xml };

std::string_view to_string(ExportFormat f);
/// Accepts "json", "json-ld", "datacite-xml", "dublincore-xml".
std::optional<ExportFormat> parse_export_format(std::string_view s);
std::string_view media_type(ExportFormat f);

struct ExportContext {
  /// DataCite publisher / Dublin Core publisher.
  std::string publisher;
  /// Deployment base URL, used for JSON-LD @id values.
  std::string base_url;
  const LicenseRegistry* licenses = nullptr;
};

struct ExportedDocument {
  std::string body;
  std::string media_type;
};

/// Serializes a version's metadata. Output is byte-identical for identical input.
ExportedDocument export_version(const RecordVersion& v, ExportFormat format, const ExportContext& ctx);

/// Reads the metadata back out of a `json` export.
MetadataDocument import_json_export(std::string_view body);

/// Escapes text for XML character data and attribute values. Characters not
/// allowed in XML 1.0 are dropped.
std::string xml_escape(std::string_view text);

}  // namespace archive
