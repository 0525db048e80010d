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

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "archive/archive.hpp"
#include "archive/crypto.hpp"
#include "archive/rest_server.hpp"
#include "fixtures.hpp"
#include "httplib.h"
#include "json.hpp"
#include "permission_world.hpp"

namespace archive {
namespace {

using json = nlohmann::json;
using oracle::Where;
using oracle::Who;

// A running server over a PermissionWorld, with an API token per user.
class RestTest : public ::testing::Test {
 protected:
  testing::PermissionWorld world;
  std::unique_ptr<RestServer> server;
  std::unique_ptr<httplib::Client> http;
  std::map<std::string, std::string> bearer;

  void SetUp() override {
    for (const char* u : {"alice", "bob", "carol", "dave", "mallory"}) bearer[u] = world.archive->mint_api_token(u, "t");
    world.archive->flush_index();
    server = std::make_unique<RestServer>(*world.archive);
    const int port = server->start();
    http = std::make_unique<httplib::Client>("127.0.0.1", port);
  }
  void TearDown() override { server->stop(); }

  httplib::Headers auth(const std::string& user) const { return {{"Authorization", "Bearer " + bearer.at(user)}}; }

  // Path and headers that present `caller` the way a browser or the CLI would.
  std::pair<std::string, httplib::Headers> as(const Caller& caller, std::string path) const {
    httplib::Headers h;
    if (caller.user_id) h = auth(*caller.user_id);
    if (caller.link_token) path += (path.find('?') == std::string::npos ? "?token=" : "&token=") + *caller.link_token;
    return {path, h};
  }

  std::string rid(Where w) const { return world.versions.at(w).record_id; }
};

json body_of(const httplib::Result& r) { return json::parse(r->body); }

TEST_F(RestTest, Health) {
  auto r = http->Get("/api/healthz");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST_F(RestTest, CommunitiesAndLicensesAreListed) {
  auto r = http->Get("/api/communities");
  ASSERT_TRUE(r);
  EXPECT_EQ(body_of(r).size(), 4u);
  r = http->Get("/api/licenses");
  ASSERT_TRUE(r);
  EXPECT_FALSE(body_of(r).empty());
}

TEST_F(RestTest, ErrorBodiesHaveOneShape) {
  auto r = http->Get("/api/records/zzzzzzzzzz", auth("bob"));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 404);
  const json e = body_of(r);
  EXPECT_EQ(e["status"], 404);
  EXPECT_TRUE(e.contains("code"));
  EXPECT_TRUE(e.contains("message"));

  r = http->Post("/api/records", auth("alice"), R"({"title": ""})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);
  EXPECT_FALSE(body_of(r)["field_errors"].empty());

  r = http->Post("/api/records", R"({})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 401);

  r = http->Get("/api/user", httplib::Headers{{"Authorization", "Bearer nonsense"}});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 401);
  EXPECT_EQ(body_of(r)["code"], "invalid-token");

  r = http->Post("/api/records", auth("alice"), "{not json", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);
}

// Statuses over HTTP agree with the hand-written table: allowed actions
// succeed, denied actions answer 404 when the caller cannot read and 403
// otherwise.
TEST_F(RestTest, StatusesMatchPermissionTable) {
  const std::string metadata = metadata_to_json(testing::sample_metadata("same")).dump();
  std::mt19937_64 rng(11);
  constexpr std::array<int, 6> kColumns = {0, 1, 2, 3, 6, 7};
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Who who = oracle::kAllWho[rng() % oracle::kAllWho.size()];
    const Where where = oracle::kAllWhere[rng() % oracle::kAllWhere.size()];
    const int column = kColumns[rng() % kColumns.size()];
    const std::string row(oracle::expected(who, where));
    const bool allowed = row[column] == 'Y';
    const bool readable = row[0] == 'Y';
    const std::string base = "/api/records/" + rid(where);
    const Caller caller = world.caller(who, where);

    httplib::Result r;
    int success = 200;
    switch (column) {
      case 0: {
        auto [p, h] = as(caller, base);
        r = http->Get(p, h);
        break;
      }
      case 1: {
        auto [p, h] = as(caller, base + "/files/data.csv");
        r = http->Get(p, h);
        break;
      }
      case 2: {
        auto [p, h] = as(caller, base + "/draft");
        r = http->Put(p, h, metadata, "application/json");
        break;
      }
      case 3: {
        // Re-uploading an existing name: permitted callers reach the
        // duplicate check, so nothing is ever written.
        auto [p, h] = as(caller, base + "/draft/files/data.csv");
        r = http->Put(p, h, "x", "application/octet-stream");
        success = 409;
        break;
      }
      case 6: {
        auto [p, h] = as(caller, base + "/links");
        r = http->Post(p, h, R"({"permission": "view"})", "application/json");
        success = 201;
        break;
      }
      case 7: {
        auto [p, h] = as(caller, base + "/stats");
        r = http->Get(p, h);
        break;
      }
    }
    ASSERT_TRUE(r) << "request failed";
    const int expected = allowed ? success : (readable ? 403 : 404);
    EXPECT_EQ(r->status, expected) << oracle::name(who) << " on " << oracle::name(where) << " column " << column
                                   << ": " << r->body;
    ++checked;
  }
  EXPECT_EQ(checked, 400);
}

TEST_F(RestTest, EachRecordGetCountsOneView) {
  const std::string path = "/api/records/" + rid(Where::shared_consortium);
  for (int i = 0; i < 3; ++i) ASSERT_EQ(http->Get(path, auth("carol"))->status, 200);
  ASSERT_EQ(http->Get(path, auth("dave"))->status, 200);
  const auto events = world.archive->store().transact([](PrimaryStore::Tx& tx) { return tx.all_events(); });
  EXPECT_EQ(events.size(), 4u);
  auto r = http->Get(path + "/stats", auth("alice"));
  ASSERT_TRUE(r);
  EXPECT_EQ(body_of(r)["cumulative"]["unique_views"], 2);
}

TEST_F(RestTest, DownloadCarriesChecksum) {
  auto r = http->Get("/api/records/" + rid(Where::shared_consortium) + "/files/data.csv", auth("dave"));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->body, "a,b\n1,2\n");
  EXPECT_EQ(r->get_header_value("X-Checksum"), "sha-256:" + crypto::sha256_hex(r->body));
}

TEST_F(RestTest, UploadLifecycle) {
  const json created = body_of(http->Post("/api/records", auth("alice"),
                                          metadata_to_json(testing::sample_metadata("Upload")).dump(),
                                          "application/json"));
  const std::string base = "/api/records/" + created["record_id"].get<std::string>();
  auto r = http->Put(base + "/draft/files/blob.bin", auth("alice"), std::string(1000, 'z'), "application/octet-stream");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 201);
  EXPECT_EQ(body_of(r)["size"], 1000);

  world.archive->set_record_quota(created["record_id"], 1500);
  r = http->Put(base + "/draft/files/more.bin", auth("alice"), std::string(600, 'y'), "application/octet-stream");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 413);
  EXPECT_EQ(body_of(r)["code"], "quota-exceeded");
  r = http->Put(base + "/draft/files/more.bin", auth("alice"), std::string(500, 'y'), "application/octet-stream");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 201);

  r = http->Post(base + "/actions/share", auth("alice"), R"({"tier": "community", "community": "alpha"})",
                 "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  r = http->Put(base + "/draft/files/late.bin", auth("alice"), "x", "application/octet-stream");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 403);
  EXPECT_EQ(body_of(r)["code"], "immutable-files");

  r = http->Post(base + "/versions", auth("alice"), R"({"import_files": true})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 201);
  EXPECT_EQ(body_of(r)["version_index"], 2);
  r = http->Post(base + "/versions", auth("alice"), "{}", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 409);
  r = http->Delete(base + "/draft", auth("alice"));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 204);
}

TEST_F(RestTest, MintedLinkIsUsableAndTokenNeverEchoedElsewhere) {
  const std::string base = "/api/records/" + rid(Where::shared_community);
  auto r = http->Post(base + "/links", auth("alice"), R"({"permission": "view"})", "application/json");
  ASSERT_TRUE(r);
  ASSERT_EQ(r->status, 201);
  const std::string token = body_of(r)["token"];
  EXPECT_EQ(token.size(), 43u);

  r = http->Get(base + "?token=" + token);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->body.find(token), std::string::npos);

  r = http->Get("/api/user/tokens", auth("alice"));
  ASSERT_TRUE(r);
  for (const auto& [_, secret] : bearer) EXPECT_EQ(r->body.find(secret), std::string::npos);

  ASSERT_EQ(http->Delete("/api/links/" + token, auth("alice"))->status, 204);
  EXPECT_EQ(http->Get(base + "?token=" + token)->status, 404);
}

TEST_F(RestTest, SearchRespectsCallerAndFilters) {
  auto r = http->Get("/api/search", auth("carol"));
  ASSERT_TRUE(r);
  EXPECT_EQ(body_of(r)["total"], 1);
  r = http->Get("/api/search?community=alpha", auth("bob"));
  ASSERT_TRUE(r);
  EXPECT_EQ(body_of(r)["total"], 1);
  r = http->Get("/api/search?owner=me", auth("alice"));
  ASSERT_TRUE(r);
  EXPECT_EQ(body_of(r)["total"], 3);
  r = http->Get("/api/search");
  ASSERT_TRUE(r);
  EXPECT_EQ(body_of(r)["total"], 0);
  EXPECT_EQ(http->Get("/api/search?community=nowhere", auth("bob"))->status, 400);
  EXPECT_EQ(http->Get("/api/search?page=0", auth("bob"))->status, 400);
  EXPECT_EQ(http->Get("/api/search?sort=sideways", auth("bob"))->status, 400);
}

TEST_F(RestTest, ExportsServeEachFormat) {
  const std::string base = "/api/records/" + rid(Where::shared_consortium) + "/export/";
  for (const char* format : {"datacite-xml", "dublincore-xml", "json-ld", "json"}) {
    auto r = http->Get(base + format, auth("dave"));
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 200) << format;
  }
  EXPECT_EQ(http->Get(base + "marc", auth("dave"))->status, 404);
}

TEST_F(RestTest, MembershipManagement) {
  auto r = http->Post("/api/communities/alpha/members", auth("bob"), R"({"user": "dave"})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 403);
  r = http->Post("/api/communities/alpha/members", auth("alice"), R"({"user": "dave"})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_LT(r->status, 300);
  EXPECT_EQ(http->Get("/api/records/" + rid(Where::shared_community), auth("dave"))->status, 200);
  r = http->Delete("/api/communities/alpha/members/dave", auth("alice"));
  ASSERT_TRUE(r);
  EXPECT_LT(r->status, 300);
  EXPECT_EQ(http->Get("/api/records/" + rid(Where::shared_community), auth("dave"))->status, 404);
}

// A second server over the same data directory answers identically: the
// process holds no state beyond what is persisted.
TEST_F(RestTest, RestartKeepsBehaviour) {
  const std::string path = "/api/records/" + rid(Where::shared_community);
  const std::string before = http->Get(path, auth("bob"))->body;
  server->stop();
  const auto config = world.archive->config();
  world.archive.reset();
  world.archive = std::make_unique<Archive>(config);
  server = std::make_unique<RestServer>(*world.archive);
  http = std::make_unique<httplib::Client>("127.0.0.1", server->start());
  auto r = http->Get(path, auth("bob"));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->body, before);
  EXPECT_EQ(http->Get(path, auth("carol"))->status, 404);
  EXPECT_EQ(body_of(http->Get("/api/search", auth("carol")))["total"], 1);
}

}  // namespace
}  // namespace archive
