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

#include "archive/export.hpp"

#include "json.hpp"

#include "archive/error.hpp"

namespace archive {

using nlohmann::json;

std::string_view to_string(ExportFormat f) {
  switch (f) {
    case ExportFormat::json: return "json";
    case ExportFormat::json_ld: return "json-ld";
    case ExportFormat::datacite_xml: return "datacite-xml";
    case ExportFormat::dublincore_xml: return "dublincore-xml";
  }
  return "json";
}

std::optional<ExportFormat> parse_export_format(std::string_view s) {
  for (auto f : {ExportFormat::json, ExportFormat::json_ld, ExportFormat::datacite_xml, ExportFormat::dublincore_xml}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

std::string_view media_type(ExportFormat f) {
  switch (f) {
    case ExportFormat::json: return "application/json";
    case ExportFormat::json_ld: return "application/ld+json";
    case ExportFormat::datacite_xml:
    case ExportFormat::dublincore_xml: return "application/xml";
  }
  return "application/octet-stream";
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default:
        if (c < 0x20 && ch != '\t' && ch != '\n' && ch != '\r') break;
        out.push_back(ch);
    }
  }
  return out;
}

namespace {

/// Minimal indented XML writer; elements are emitted in call order.
class XmlWriter {
 public:
  XmlWriter() { out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"; }

  using Attrs = std::vector<std::pair<std::string, std::string>>;

  void open(std::string_view name, const Attrs& attrs = {}) {
    indent();
    out_ += '<';
    out_ += name;
    write_attrs(attrs);
    out_ += ">\n";
    ++depth_;
  }

  void close(std::string_view name) {
    --depth_;
    indent();
    out_ += "</";
    out_ += name;
    out_ += ">\n";
  }

  void leaf(std::string_view name, std::string_view text, const Attrs& attrs = {}) {
    indent();
    out_ += '<';
    out_ += name;
    write_attrs(attrs);
    out_ += '>';
    out_ += xml_escape(text);
    out_ += "</";
    out_ += name;
    out_ += ">\n";
  }

  std::string str() && { return std::move(out_); }

 private:
  void indent() { out_.append(static_cast<std::size_t>(depth_) * 2, ' '); }
  void write_attrs(const Attrs& attrs) {
    for (const auto& [k, v] : attrs) {
      out_ += ' ';
      out_ += k;
      out_ += "=\"";
      out_ += xml_escape(v);
      out_ += '"';
    }
  }

  std::string out_;
  int depth_ = 0;
};

std::string_view datacite_resource_type(ResourceType t) {
  switch (t) {
    case ResourceType::dataset: return "Dataset";
    case ResourceType::software: return "Software";
    case ResourceType::publication: return "Text";
    case ResourceType::other: return "Other";
  }
  return "Other";
}

std::string_view schema_org_type(ResourceType t) {
  switch (t) {
    case ResourceType::dataset: return "Dataset";
    case ResourceType::software: return "SoftwareSourceCode";
    case ResourceType::publication: return "ScholarlyArticle";
    case ResourceType::other: return "CreativeWork";
  }
  return "CreativeWork";
}

std::string license_title(const MetadataDocument& m, const ExportContext& ctx) {
  if (ctx.licenses != nullptr) {
    if (const auto* l = ctx.licenses->find(m.license)) return l->title;
  }
  return m.license;
}

std::string license_url(const MetadataDocument& m, const ExportContext& ctx) {
  if (ctx.licenses != nullptr) {
    if (const auto* l = ctx.licenses->find(m.license); l != nullptr && !l->url.empty()) return l->url;
  }
  std::string base = ctx.base_url;
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base + "/api/licenses/" + m.license;
}

std::string record_url(const RecordVersion& v, const ExportContext& ctx) {
  std::string base = ctx.base_url;
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base + "/records/" + v.record_id;
}

std::string year_of(const Date& d) { return std::to_string(static_cast<int>(d.year())); }

ExportedDocument export_json(const RecordVersion& v) {
  return {version_to_json(v).dump(2) + "\n", std::string(media_type(ExportFormat::json))};
}

ExportedDocument export_json_ld(const RecordVersion& v, const ExportContext& ctx) {
  const auto& m = v.metadata;
  json creators = json::array();
  for (const auto& a : m.authors) {
    json person{{"@type", "Person"}, {"name", a.name}};
    if (a.orcid) person["@id"] = "https://orcid.org/" + *a.orcid;
    json affs = json::array();
    for (const auto& af : a.affiliations) {
      json org{{"@type", "Organization"}, {"name", af.name}};
      if (af.ror) org["@id"] = "https://ror.org/" + *af.ror;
      affs.push_back(std::move(org));
    }
    if (!affs.empty()) person["affiliation"] = std::move(affs);
    creators.push_back(std::move(person));
  }

  json distribution = json::array();
  for (const auto& f : v.files) {
    distribution.push_back({{"@type", "DataDownload"},
                            {"name", f.name},
                            {"contentSize", f.size},
                            {"identifier", f.checksum}});
  }

  json annotations = json::array();
  for (const auto& an : m.annotations) {
    json node{{"@type", "CreativeWork"}, {"name", an.label}, {"encodingFormat", an.media_type}};
    // Attached documents are valid JSON by invariant; embed them as-is.
    node["text"] = json::parse(an.document, nullptr, false);
    annotations.push_back(std::move(node));
  }

  json doc{
      {"@context", "https://schema.org/"},
      {"@type", schema_org_type(m.resource_type)},
      {"@id", record_url(v, ctx)},
      {"identifier", v.record_id},
      {"name", m.title},
      {"description", m.description},
      {"keywords", m.keywords},
      {"creator", std::move(creators)},
      {"license", license_url(m, ctx)},
      {"datePublished", format_date(m.publication_date)},
      {"version", v.version_index},
      {"publisher", {{"@type", "Organization"}, {"name", ctx.publisher}}},
      {"distribution", std::move(distribution)},
  };
  if (!annotations.empty()) doc["subjectOf"] = std::move(annotations);
  return {doc.dump(2) + "\n", std::string(media_type(ExportFormat::json_ld))};
}

ExportedDocument export_datacite(const RecordVersion& v, const ExportContext& ctx) {
  const auto& m = v.metadata;
  XmlWriter w;
  w.open("resource", {{"xmlns", "http://datacite.org/schema/kernel-4"},
                      {"xmlns:xsi", "http://www.w3.org/2001/XMLSchema-instance"},
                      {"xsi:schemaLocation",
                       "http://datacite.org/schema/kernel-4 http://schema.datacite.org/meta/kernel-4/metadata.xsd"}});
  w.leaf("identifier", v.record_id, {{"identifierType", "Other"}});

  w.open("creators");
  if (m.authors.empty()) {
    w.open("creator");
    w.leaf("creatorName", ":unav");
    w.close("creator");
  }
  for (const auto& a : m.authors) {
    w.open("creator");
    w.leaf("creatorName", a.name, {{"nameType", "Personal"}});
    if (a.orcid) {
      w.leaf("nameIdentifier", *a.orcid, {{"nameIdentifierScheme", "ORCID"}, {"schemeURI", "https://orcid.org"}});
    }
    for (const auto& af : a.affiliations) {
      if (af.ror) {
        w.leaf("affiliation", af.name,
               {{"affiliationIdentifier", "https://ror.org/" + *af.ror},
                {"affiliationIdentifierScheme", "ROR"},
                {"schemeURI", "https://ror.org"}});
      } else {
        w.leaf("affiliation", af.name);
      }
    }
    w.close("creator");
  }
  w.close("creators");

  w.open("titles");
  w.leaf("title", m.title);
  w.close("titles");
  w.leaf("publisher", ctx.publisher);
  w.leaf("publicationYear", year_of(m.publication_date));
  w.leaf("resourceType", to_string(m.resource_type), {{"resourceTypeGeneral", std::string(datacite_resource_type(m.resource_type))}});

  if (!m.keywords.empty()) {
    w.open("subjects");
    for (const auto& k : m.keywords) w.leaf("subject", k);
    w.close("subjects");
  }
  w.open("dates");
  w.leaf("date", format_date(m.publication_date), {{"dateType", "Issued"}});
  w.close("dates");
  w.leaf("version", std::to_string(v.version_index));
  w.open("rightsList");
  w.leaf("rights", license_title(m, ctx), {{"rightsIdentifier", m.license}, {"rightsURI", license_url(m, ctx)}});
  w.close("rightsList");
  if (!m.description.empty()) {
    w.open("descriptions");
    w.leaf("description", m.description, {{"descriptionType", "Abstract"}});
    w.close("descriptions");
  }
  w.close("resource");
  return {std::move(w).str(), std::string(media_type(ExportFormat::datacite_xml))};
}

ExportedDocument export_dublincore(const RecordVersion& v, const ExportContext& ctx) {
  const auto& m = v.metadata;
  XmlWriter w;
  w.open("oai_dc:dc", {{"xmlns:oai_dc", "http://www.openarchives.org/OAI/2.0/oai_dc/"},
                       {"xmlns:dc", "http://purl.org/dc/elements/1.1/"},
                       {"xmlns:xsi", "http://www.w3.org/2001/XMLSchema-instance"},
                       {"xsi:schemaLocation",
                        "http://www.openarchives.org/OAI/2.0/oai_dc/ http://www.openarchives.org/OAI/2.0/oai_dc.xsd"}});
  w.leaf("dc:title", m.title);
  for (const auto& a : m.authors) w.leaf("dc:creator", a.name);
  for (const auto& k : m.keywords) w.leaf("dc:subject", k);
  w.leaf("dc:description", m.description);
  w.leaf("dc:publisher", ctx.publisher);
  w.leaf("dc:date", format_date(m.publication_date));
  w.leaf("dc:type", datacite_resource_type(m.resource_type));
  w.leaf("dc:identifier", v.record_id);
  w.leaf("dc:rights", license_url(m, ctx));
  w.close("oai_dc:dc");
  return {std::move(w).str(), std::string(media_type(ExportFormat::dublincore_xml))};
}

}  // namespace

ExportedDocument export_version(const RecordVersion& v, ExportFormat format, const ExportContext& ctx) {
  switch (format) {
    case ExportFormat::json: return export_json(v);
    case ExportFormat::json_ld: return export_json_ld(v, ctx);
    case ExportFormat::datacite_xml: return export_datacite(v, ctx);
    case ExportFormat::dublincore_xml: return export_dublincore(v, ctx);
  }
  throw Error(ErrorCode::bad_request, "unknown-format", "unknown export format");
}

MetadataDocument import_json_export(std::string_view body) {
  auto doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("metadata")) {
    throw Error(ErrorCode::validation, "invalid-export", "not a json export document");
  }
  return metadata_from_json(doc.at("metadata"));
}

}  // namespace archive
