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

#include "fixtures.hpp"

#include <atomic>
#include <chrono>

#include "archive/crypto.hpp"
#include "archive/identifiers.hpp"

namespace archive::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  path_ = fs::temp_directory_path() / ("archive-test-" + crypto::random_id(12));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

fs::path test_data_dir() { return ARCHIVE_TEST_DATA_DIR; }

DeploymentConfig test_config(const fs::path& data_dir) {
  DeploymentConfig cfg;
  cfg.display_name = "Test Archive";
  cfg.base_url = "http://archive.test";
  cfg.data_dir = data_dir;
  cfg.cidr_table = test_data_dir() / "countries.tsv";
  cfg.communities = {
      {{"consortium", "Consortium", CommunityKind::umbrella}, {"alice"}},
      {{"alpha", "Project Alpha", CommunityKind::project}, {"alice"}},
      {{"beta", "Project Beta", CommunityKind::project}, {}},
      {{"gamma", "Project Gamma", CommunityKind::project}, {}},
  };
  cfg.users = {
      {"alice", "alice@example.org", true, {"alpha"}},
      {"bob", "bob@example.org", true, {"alpha"}},
      {"carol", "carol@example.org", true, {"beta"}},
      {"dave", "dave@example.org", true, {"consortium"}},
      {"erin", "erin@example.org", false, {"alpha"}},
      {"mallory", "mallory@example.org", true, {"alpha", "beta"}},
  };
  return cfg;
}

MetadataDocument sample_metadata(const std::string& title) {
  MetadataDocument m;
  m.title = title;
  m.description = "Impedance spectra of candidate electrolytes.";
  m.keywords = {"battery", "electrolyte"};
  m.authors = {Author{"Ada Lovelace", "0000-0002-1825-0097", {Affiliation{"Example University", "05a28rw58"}}}};
  m.license = "CC-BY-4.0";
  m.resource_type = ResourceType::dataset;
  m.publication_date = std::chrono::year{2024} / std::chrono::month{3} / std::chrono::day{14};
  return m;
}

namespace {

std::string random_word(std::mt19937_64& rng, std::size_t len) {
  static constexpr std::string_view kLetters = "abcdefghijklmnopqrstuvwxyz";
  std::string s;
  std::uniform_int_distribution<std::size_t> pick(0, kLetters.size() - 1);
  for (std::size_t i = 0; i < len; ++i) s += kLetters[pick(rng)];
  return s;
}

std::string random_orcid(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> digit(0, 9);
  std::string digits;
  for (int i = 0; i < 15; ++i) digits += static_cast<char>('0' + digit(rng));
  digits += *ids::orcid_check_character(digits);
  return digits.substr(0, 4) + "-" + digits.substr(4, 4) + "-" + digits.substr(8, 4) + "-" + digits.substr(12, 4);
}

}  // namespace

MetadataDocument random_metadata(std::mt19937_64& rng) {
  static const char* kLicenses[] = {"CC-BY-4.0", "CC0-1.0", "MIT", "GPL-3.0", "bm-2030"};
  static const char* kSpice[] = {"", " & co", " <draft>", " \"quoted\"", " it's", " \xC3\xA9lan"};
  std::uniform_int_distribution<int> small(0, 3);
  std::uniform_int_distribution<int> spice(0, 5);
  std::uniform_int_distribution<int> year(1990, 2030);

  MetadataDocument m;
  m.title = random_word(rng, 6) + " " + random_word(rng, 8) + kSpice[spice(rng)];
  m.description = small(rng) == 0 ? std::string() : "Notes" + std::string(kSpice[spice(rng)]);
  for (int i = small(rng); i > 0; --i) m.keywords.push_back(random_word(rng, 4) + std::to_string(i));
  for (int i = small(rng); i > 0; --i) {
    Author a;
    a.name = random_word(rng, 5) + " " + random_word(rng, 7) + kSpice[spice(rng)];
    if (small(rng) != 0) a.orcid = random_orcid(rng);
    if (small(rng) != 0) a.affiliations.push_back({"Institute " + random_word(rng, 5), std::nullopt});
    if (small(rng) == 0) a.affiliations.push_back({"Lab" + std::string(kSpice[spice(rng)]), "05a28rw58"});
    m.authors.push_back(std::move(a));
  }
  m.license = kLicenses[std::uniform_int_distribution<int>(0, 4)(rng)];
  m.resource_type = static_cast<ResourceType>(std::uniform_int_distribution<int>(0, 3)(rng));
  m.publication_date = std::chrono::year{year(rng)} / std::chrono::month{static_cast<unsigned>(1 + small(rng))} /
                       std::chrono::day{static_cast<unsigned>(1 + small(rng) * 7)};
  if (small(rng) == 0) {
    m.annotations.push_back({"ontology", R"({"@context":"https://schema.org","@type":"Thing","name":"x"})",
                             std::string(kJsonLdMediaType)});
  }
  return m;
}

std::string random_bytes_string(std::mt19937_64& rng, std::size_t n) {
  std::string s(n, '\0');
  std::uniform_int_distribution<int> byte(0, 255);
  for (auto& c : s) c = static_cast<char>(byte(rng));
  return s;
}

}  // namespace archive::testing
