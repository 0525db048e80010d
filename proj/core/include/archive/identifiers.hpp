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
#include <string_view>

namespace archive::ids {

enum class OrcidStatus { valid, bad_format, checksum_mismatch };

/// ISO 7064 MOD 11-2 check character for the first 15 digits ('0'-'9' or 'X').
/// Returns nullopt if `digits` is not exactly 15 ASCII digits.
std::optional<char> orcid_check_character(std::string_view digits);

/// Validates the hyphenated form dddd-dddd-dddd-ddd[dX].
OrcidStatus check_orcid(std::string_view orcid);

/// Pattern 0[a-z0-9]{6}[0-9]{2}.
bool is_valid_ror(std::string_view ror);

}  // namespace archive::ids
