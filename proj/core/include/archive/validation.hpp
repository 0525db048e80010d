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

#include "archive/error.hpp"
#include "archive/licenses.hpp"
#include "archive/model.hpp"

namespace archive {

/// Checks every MetadataDocument invariant. An empty result means the
/// document is valid; each entry names the offending field path.
FieldErrors validate_metadata(const MetadataDocument& metadata, const LicenseRegistry& licenses);

/// Throws Error{validation} carrying the report if it is non-empty.
void require_valid(const MetadataDocument& metadata, const LicenseRegistry& licenses);

}  // namespace archive
