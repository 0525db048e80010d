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

#include <stdexcept>
#include <string>
#include <vector>

namespace archive {

enum class ErrorCode {
  validation,
  bad_request,
  unauthenticated,
  permission_denied,
  not_found,
  conflict,
  quota_exceeded,
  constraint,
  checksum_mismatch,
  internal,
};

/// (field path, reason) pair, e.g. ("authors[0].orcid", "checksum mismatch").
struct FieldError {
  std::string field;
  std::string reason;

  bool operator==(const FieldError&) const = default;
};

using FieldErrors = std::vector<FieldError>;

/// The single exception type thrown across the service. `reason` is a
/// machine-readable code ("quota-exceeded", "draft-exists", "not-member", ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string reason, std::string message, FieldErrors fields = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& reason() const noexcept { return reason_; }
  const FieldErrors& field_errors() const noexcept { return fields_; }

 private:
  ErrorCode code_;
  std::string reason_;
  FieldErrors fields_;
};

std::string_view to_string(ErrorCode code);

/// HTTP status used by the REST layer for each error code.
int http_status(ErrorCode code);

[[noreturn]] void throw_not_found(const std::string& what);
[[noreturn]] void throw_conflict(const std::string& reason, const std::string& message);

}  // namespace archive
