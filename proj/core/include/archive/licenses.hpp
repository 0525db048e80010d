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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace archive {

struct License {
  std::string id;
  std::string title;
  std::string url;
  /// Bundled license text, relative to the registry's text directory. Empty if none.
  std::string text_file;
};

class LicenseRegistry {
 public:
  LicenseRegistry() = default;
  explicit LicenseRegistry(std::vector<License> licenses, std::filesystem::path text_dir = {});

  /// CC-BY-4.0, CC0-1.0, GPL-3.0, MIT and the consortium "bm-2030" license.
  static LicenseRegistry defaults(std::filesystem::path text_dir = {});

  bool contains(const std::string& id) const { return by_id_.contains(id); }
  const License* find(const std::string& id) const;
  std::vector<License> list() const;

  /// Full text for licenses that ship one.
  std::optional<std::string> text(const std::string& id) const;

 private:
  std::map<std::string, License> by_id_;
  std::filesystem::path text_dir_;
};

void to_json(nlohmann::json& j, const License& l);
void from_json(const nlohmann::json& j, License& l);

}  // namespace archive
