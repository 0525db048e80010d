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

#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <sstream>

#include "archive/config.hpp"
#include "archive/export.hpp"
#include "fixtures.hpp"

namespace archive {
namespace {

namespace pt = boost::property_tree;
using nlohmann::json;

pt::ptree parse_xml(const std::string& body) {
  std::istringstream in(body);
  pt::ptree tree;
  pt::read_xml(in, tree);
  return tree;
}

class Export : public ::testing::Test {
 protected:
  LicenseRegistry licenses = LicenseRegistry::defaults(default_license_text_dir());
  ExportContext ctx{"Test Archive", "http://archive.test", &licenses};

  RecordVersion version(const MetadataDocument& m) {
    RecordVersion v;
    v.record_id = "abcde12345";
    v.version_index = 2;
    v.version_id = make_version_id(v.record_id, 2);
    v.state = VersionState::shared;
    v.tier = Tier::consortium;
    v.owner = "alice";
    v.metadata = m;
    v.files = {{"a.csv", 10, "sha-256:aa", "aa"}};
    v.created_at = *parse_timestamp("2025-01-02T03:04:05Z");
    v.shared_at = v.created_at;
    return v;
  }
};

TEST_F(Export, FormatNamesAndMediaTypes) {
  EXPECT_EQ(media_type(*parse_export_format("json")), "application/json");
  EXPECT_EQ(media_type(*parse_export_format("json-ld")), "application/ld+json");
  EXPECT_EQ(media_type(*parse_export_format("datacite-xml")), "application/xml");
  EXPECT_EQ(media_type(*parse_export_format("dublincore-xml")), "application/xml");
  EXPECT_FALSE(parse_export_format("marc"));
}

TEST_F(Export, DataCiteCarriesMandatoryKernelElements) {
  const auto tree = parse_xml(export_version(version(testing::sample_metadata()), ExportFormat::datacite_xml, ctx).body);
  const auto& r = tree.get_child("resource");
  EXPECT_EQ(r.get<std::string>("identifier"), "abcde12345");
  EXPECT_EQ(r.get<std::string>("identifier.<xmlattr>.identifierType"), "Other");
  EXPECT_EQ(r.get<std::string>("creators.creator.creatorName"), "Ada Lovelace");
  EXPECT_EQ(r.get<std::string>("creators.creator.nameIdentifier"), "0000-0002-1825-0097");
  EXPECT_EQ(r.get<std::string>("creators.creator.nameIdentifier.<xmlattr>.nameIdentifierScheme"), "ORCID");
  EXPECT_EQ(r.get<std::string>("titles.title"), "Electrolyte screening data");
  EXPECT_EQ(r.get<std::string>("publisher"), "Test Archive");
  EXPECT_EQ(r.get<std::string>("publicationYear"), "2024");
  EXPECT_EQ(r.get<std::string>("resourceType.<xmlattr>.resourceTypeGeneral"), "Dataset");
  EXPECT_EQ(r.get<std::string>("rightsList.rights.<xmlattr>.rightsIdentifier"), "CC-BY-4.0");
  EXPECT_EQ(r.get<std::string>("version"), "2");
}

TEST_F(Export, DataCiteWithoutAuthorsUsesUnavailableMarker) {
  auto m = testing::sample_metadata();
  m.authors.clear();
  const auto tree = parse_xml(export_version(version(m), ExportFormat::datacite_xml, ctx).body);
  EXPECT_EQ(tree.get<std::string>("resource.creators.creator.creatorName"), ":unav");
}

TEST_F(Export, DublinCore) {
  const auto tree =
      parse_xml(export_version(version(testing::sample_metadata()), ExportFormat::dublincore_xml, ctx).body);
  const auto& dc = tree.get_child("oai_dc:dc");
  EXPECT_EQ(dc.get<std::string>("dc:title"), "Electrolyte screening data");
  EXPECT_EQ(dc.get<std::string>("dc:creator"), "Ada Lovelace");
  EXPECT_EQ(dc.get<std::string>("dc:date"), "2024-03-14");
  EXPECT_EQ(dc.count("dc:subject"), 2u);
}

TEST_F(Export, JsonLdUsesSchemaOrg) {
  const json j = json::parse(export_version(version(testing::sample_metadata()), ExportFormat::json_ld, ctx).body);
  EXPECT_EQ(j["@context"], "https://schema.org/");
  EXPECT_EQ(j["@type"], "Dataset");
  EXPECT_EQ(j["name"], "Electrolyte screening data");
  EXPECT_EQ(j["creator"][0]["@id"], "https://orcid.org/0000-0002-1825-0097");
}

TEST_F(Export, XmlEscapingSurvivesHostileText) {
  auto m = testing::sample_metadata();
  m.title = "a < b & \"c\" > 'd' \x01 \xC3\xA9";
  m.keywords = {"]]>", "<!--"};
  const auto tree = parse_xml(export_version(version(m), ExportFormat::datacite_xml, ctx).body);
  EXPECT_EQ(tree.get<std::string>("resource.titles.title"), "a < b & \"c\" > 'd'  \xC3\xA9");
}

TEST_F(Export, RandomizedRoundTripAndDeterminism) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const auto v = version(testing::random_metadata(rng));
    for (auto f : {ExportFormat::json, ExportFormat::json_ld, ExportFormat::datacite_xml, ExportFormat::dublincore_xml}) {
      EXPECT_EQ(export_version(v, f, ctx).body, export_version(v, f, ctx).body);
    }
    EXPECT_EQ(import_json_export(export_version(v, ExportFormat::json, ctx).body), v.metadata);
    EXPECT_NO_THROW(parse_xml(export_version(v, ExportFormat::datacite_xml, ctx).body));
    EXPECT_NO_THROW(parse_xml(export_version(v, ExportFormat::dublincore_xml, ctx).body));
  }
}

}  // namespace
}  // namespace archive
