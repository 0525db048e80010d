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

#include "archive/error.hpp"

namespace archive {

Error::Error(ErrorCode code, std::string reason, std::string message, FieldErrors fields)
    : std::runtime_error(std::move(message)),
      code_(code),
      reason_(std::move(reason)),
      fields_(std::move(fields)) {}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::validation: return "validation";
    case ErrorCode::bad_request: return "bad-request";
    case ErrorCode::unauthenticated: return "unauthenticated";
    case ErrorCode::permission_denied: return "permission-denied";
    case ErrorCode::not_found: return "not-found";
    case ErrorCode::conflict: return "conflict";
    case ErrorCode::quota_exceeded: return "quota-exceeded";
    case ErrorCode::constraint: return "constraint-violation";
    case ErrorCode::checksum_mismatch: return "checksum-mismatch";
    case ErrorCode::internal: return "internal";
  }
  return "internal";
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::validation:
    case ErrorCode::bad_request:
    case ErrorCode::constraint: return 400;
    case ErrorCode::unauthenticated: return 401;
    case ErrorCode::permission_denied: return 403;
    case ErrorCode::not_found: return 404;
    case ErrorCode::conflict: return 409;
    case ErrorCode::quota_exceeded: return 413;
    case ErrorCode::checksum_mismatch:
    case ErrorCode::internal: return 500;
  }
  return 500;
}

void throw_not_found(const std::string& what) {
  throw Error(ErrorCode::not_found, "not-found", what + " not found");
}

void throw_conflict(const std::string& reason, const std::string& message) {
  throw Error(ErrorCode::conflict, reason, message);
}

}  // namespace archive
