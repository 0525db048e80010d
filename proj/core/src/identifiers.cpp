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

#include "archive/identifiers.hpp"

#include <string>

namespace archive::ids {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_lower_alnum(char c) { return is_digit(c) || (c >= 'a' && c <= 'z'); }

}  // namespace

std::optional<char> orcid_check_character(std::string_view digits) {
  if (digits.size() != 15) return std::nullopt;
  int total = 0;
  for (char c : digits) {
    if (!is_digit(c)) return std::nullopt;
    total = (total + (c - '0')) * 2;
  }
  const int result = (12 - total % 11) % 11;
  return result == 10 ? 'X' : static_cast<char>('0' + result);
}

OrcidStatus check_orcid(std::string_view orcid) {
  if (orcid.size() != 19) return OrcidStatus::bad_format;
  std::string digits;
  for (std::size_t i = 0; i < orcid.size(); ++i) {
    const char c = orcid[i];
    if (i == 4 || i == 9 || i == 14) {
      if (c != '-') return OrcidStatus::bad_format;
      continue;
    }
    if (i == 18) {
      if (!is_digit(c) && c != 'X') return OrcidStatus::bad_format;
      continue;
    }
    if (!is_digit(c)) return OrcidStatus::bad_format;
    digits.push_back(c);
  }
  return orcid_check_character(digits) == orcid[18] ? OrcidStatus::valid
                                                    : OrcidStatus::checksum_mismatch;
}

bool is_valid_ror(std::string_view ror) {
  if (ror.size() != 9 || ror[0] != '0') return false;
  for (std::size_t i = 1; i < 7; ++i) {
    if (!is_lower_alnum(ror[i])) return false;
  }
  return is_digit(ror[7]) && is_digit(ror[8]);
}

}  // namespace archive::ids
