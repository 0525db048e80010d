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

#include "archive/licenses.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace archive {

LicenseRegistry::LicenseRegistry(std::vector<License> licenses, std::filesystem::path text_dir)
    : text_dir_(std::move(text_dir)) {
  for (auto& l : licenses) {
    auto id = l.id;
    by_id_.insert_or_assign(std::move(id), std::move(l));
  }
}

LicenseRegistry LicenseRegistry::defaults(std::filesystem::path text_dir) {
  return LicenseRegistry(
      {
          {"CC-BY-4.0", "Creative Commons Attribution 4.0 International",
           "https://creativecommons.org/licenses/by/4.0/legalcode", ""},
          {"CC0-1.0", "Creative Commons Zero v1.0 Universal",
           "https://creativecommons.org/publicdomain/zero/1.0/legalcode", ""},
          {"GPL-3.0", "GNU General Public License v3.0", "https://www.gnu.org/licenses/gpl-3.0.txt", ""},
          {"MIT", "MIT License", "https://opensource.org/licenses/MIT", ""},
          {"bm-2030", "BATTERY 2030+ Consortium License", "", "bm-2030.txt"},
      },
      std::move(text_dir));
}

const License* LicenseRegistry::find(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &it->second;
}

std::vector<License> LicenseRegistry::list() const {
  std::vector<License> out;
  out.reserve(by_id_.size());
  for (const auto& [_, l] : by_id_) out.push_back(l);
  return out;
}

std::optional<std::string> LicenseRegistry::text(const std::string& id) const {
  const License* l = find(id);
  if (l == nullptr || l->text_file.empty()) return std::nullopt;
  std::ifstream in(text_dir_ / l->text_file, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void to_json(nlohmann::json& j, const License& l) {
  j = nlohmann::json{{"id", l.id}, {"title", l.title}, {"url", l.url}, {"has_text", !l.text_file.empty()}};
}

void from_json(const nlohmann::json& j, License& l) {
  l.id = j.at("id").get<std::string>();
  l.title = j.value("title", l.id);
  l.url = j.value("url", "");
  l.text_file = j.value("text_file", "");
}

}  // namespace archive
