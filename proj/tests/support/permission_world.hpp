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

#include <map>
#include <memory>

#include "../oracles/permission_oracle.hpp"
#include "archive/archive.hpp"
#include "fixtures.hpp"

namespace archive::testing {

/// One record per sharing state, all owned by alice (alpha), plus a view and
/// an edit link for each record.
struct PermissionWorld {
  TempDir dir;
  std::unique_ptr<Archive> archive;
  std::map<oracle::Where, RecordVersion> versions;
  std::map<oracle::Where, std::string> view_tokens;
  std::map<oracle::Where, std::string> edit_tokens;

  PermissionWorld() {
    archive = std::make_unique<Archive>(test_config(dir.path()));
    const Caller alice = Caller::user("alice");
    for (auto where : oracle::kAllWhere) {
      auto v = archive->create_draft(alice, sample_metadata(std::string(oracle::name(where))));
      archive->attach_bytes(alice, v.record_id, "data.csv", "a,b\n1,2\n");
      if (where == oracle::Where::shared_community) {
        v = archive->share(alice, v.record_id, Tier::community, "alpha");
      } else if (where == oracle::Where::shared_consortium) {
        v = archive->share(alice, v.record_id, Tier::consortium, std::nullopt);
      } else {
        v = archive->read_version(alice, v.record_id, std::nullopt);
      }
      versions[where] = v;
      view_tokens[where] = archive->mint_share_link(alice, v.record_id, LinkPermission::view).token;
      edit_tokens[where] = archive->mint_share_link(alice, v.record_id, LinkPermission::edit).token;
    }
  }

  Caller caller(oracle::Who who, oracle::Where where) const {
    using oracle::Who;
    switch (who) {
      case Who::owner: return Caller::user("alice");
      case Who::member_same: return Caller::user("bob");
      case Who::member_other: return Caller::user("carol");
      case Who::umbrella_only: return Caller::user("dave");
      case Who::anonymous: return Caller::anonymous();
      case Who::view_link: return Caller::link(view_tokens.at(where));
      case Who::edit_link_same: return Caller{"bob", edit_tokens.at(where)};
      case Who::edit_link_other: return Caller{"carol", edit_tokens.at(where)};
      case Who::edit_link_anonymous: return Caller::link(edit_tokens.at(where));
    }
    return Caller::anonymous();
  }
};

}  // namespace archive::testing
