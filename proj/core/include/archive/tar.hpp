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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace archive::tar {

struct Entry {
  std::string name;  // relative, '/'-separated; directories end in '/'
  bool directory = false;
  std::string content;
};

/// Writes `dir` as a POSIX ustar stream. Entries are sorted by path and carry
/// zero timestamps and owner ids, so equal trees give equal bytes.
void write_directory(const std::filesystem::path& dir, std::ostream& out);

void write_entries(const std::vector<Entry>& entries, std::ostream& out);

/// Reads every entry of a ustar stream. Throws std::runtime_error on
/// malformed headers.
std::vector<Entry> read_entries(std::istream& in);

}  // namespace archive::tar
