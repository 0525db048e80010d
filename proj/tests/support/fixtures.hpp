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
#include <random>
#include <string>

#include "archive/config.hpp"
#include "archive/model.hpp"

namespace archive::testing {

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::filesystem::path test_data_dir();

/// Umbrella "consortium" plus projects "alpha", "beta", "gamma".
/// Users: alice, bob (alpha); carol (beta); dave (umbrella only);
/// erin (unconfirmed, alpha); mallory (alpha, beta). alice manages alpha.
DeploymentConfig test_config(const std::filesystem::path& data_dir);

MetadataDocument sample_metadata(const std::string& title = "Electrolyte screening data");

/// Random but valid metadata, including ORCIDs with correct check characters
/// and characters that need escaping in XML.
MetadataDocument random_metadata(std::mt19937_64& rng);

std::string random_bytes_string(std::mt19937_64& rng, std::size_t n);

}  // namespace archive::testing
