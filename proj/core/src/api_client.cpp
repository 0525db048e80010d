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

#include "archive/api_client.hpp"

#include <cctype>
#include <fstream>
#include <regex>

#include "httplib.h"

#include "archive/crypto.hpp"

namespace archive::client {

using nlohmann::json;
namespace fs = std::filesystem;

ClientError::ClientError(Kind kind, std::string message, int status, std::string code, json field_errors)
    : std::runtime_error(std::move(message)),
      kind_(kind),
      status_(status),
      code_(std::move(code)),
      field_errors_(std::move(field_errors)) {}

int exit_code_for(const ClientError& e) {
  switch (e.kind()) {
    case ClientError::Kind::local: return 1;
    case ClientError::Kind::network: return 3;
    case ClientError::Kind::checksum: return 5;
    case ClientError::Kind::http: break;
  }
  if (e.status() == 401) return 2;
  if (e.status() == 400) return 1;
  if (e.status() >= 500) return 3;
  return 4;
}

std::optional<ShareLinkParts> parse_share_link(std::string_view url) {
  static const std::regex re(R"(^(https?://[^?#]*?)/records/([a-z0-9]+)\?(?:.*&)?token=([A-Za-z0-9_\-]+).*$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(url.begin(), url.end(), m, re)) return std::nullopt;
  return ShareLinkParts{m[1].str(), m[2].str(), m[3].str()};
}

std::string encode_path_segment(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) != 0 || c == '-' || c == '.' || c == '_' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xf];
    }
  }
  return out;
}

std::string file_checksum(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ClientError(ClientError::Kind::local, "cannot read " + path.string());
  crypto::Sha256 hash;
  std::vector<char> buf(64 * 1024);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    hash.update(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())));
  }
  return crypto::tagged_checksum(hash.finish_hex());
}

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing '/'
};

Endpoint split_url(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) {
    throw ClientError(ClientError::Kind::local, "server URL must look like http://host[:port][/path]");
  }
  std::string prefix = m[2].str();
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {m[1].str(), prefix};
}

[[noreturn]] void throw_http(int status, const std::string& body) {
  std::string message = "HTTP " + std::to_string(status);
  std::string code;
  json fields = json::array();
  try {
    const json j = json::parse(body);
    code = j.value("code", "");
    message = j.value("message", message);
    if (j.contains("field_errors")) fields = j["field_errors"];
  } catch (const json::exception&) {
    // Non-JSON error bodies keep the generic message.
  }
  throw ClientError(ClientError::Kind::http, message, status, code, fields);
}

[[noreturn]] void throw_network(httplib::Error err) {
  throw ClientError(ClientError::Kind::network, "request failed: " + httplib::to_string(err));
}

json expect_json(const httplib::Result& r, int ok_status) {
  if (!r) throw_network(r.error());
  if (r->status != ok_status) throw_http(r->status, r->body);
  if (r->body.empty()) return json();
  try {
    return json::parse(r->body);
  } catch (const json::exception& e) {
    throw ClientError(ClientError::Kind::network, std::string("malformed response: ") + e.what());
  }
}

void expect_status(const httplib::Result& r, int ok_status) {
  if (!r) throw_network(r.error());
  if (r->status != ok_status) throw_http(r->status, r->body);
}

}  // namespace

struct ApiClient::Impl {
  Endpoint endpoint;
  httplib::Client http;
  httplib::Headers headers;

  explicit Impl(const ClientConfig& cfg) : endpoint(split_url(cfg.server_url)), http(endpoint.origin) {
    http.set_connection_timeout(10);
    http.set_read_timeout(300);
    http.set_write_timeout(300);
    if (!cfg.bearer_token.empty()) headers.emplace("Authorization", "Bearer " + cfg.bearer_token);
  }
};

ApiClient::ApiClient(ClientConfig config) : config_(std::move(config)), impl_(std::make_unique<Impl>(config_)) {}
ApiClient::~ApiClient() = default;
ApiClient::ApiClient(ApiClient&&) noexcept = default;
ApiClient& ApiClient::operator=(ApiClient&&) noexcept = default;

std::string ApiClient::path(const std::string& p, std::optional<int> version) const {
  std::string out = impl_->endpoint.prefix + "/api" + p;
  char sep = out.find('?') == std::string::npos ? '?' : '&';
  if (version) {
    out += sep + std::string("version=") + std::to_string(*version);
    sep = '&';
  }
  if (link_token_) out += sep + std::string("token=") + *link_token_;
  return out;
}

json ApiClient::health() { return expect_json(impl_->http.Get(path("/healthz"), impl_->headers), 200); }

json ApiClient::communities() { return expect_json(impl_->http.Get(path("/communities"), impl_->headers), 200); }

json ApiClient::create_record(const json& metadata) {
  return expect_json(impl_->http.Post(path("/records"), impl_->headers, metadata.dump(), "application/json"), 201);
}

json ApiClient::get_record(const std::string& id, std::optional<int> version) {
  return expect_json(impl_->http.Get(path("/records/" + id, version), impl_->headers), 200);
}

json ApiClient::list_versions(const std::string& id) {
  return expect_json(impl_->http.Get(path("/records/" + id + "/versions"), impl_->headers), 200);
}

json ApiClient::update_draft(const std::string& id, const json& metadata, std::optional<int> version) {
  return expect_json(
      impl_->http.Put(path("/records/" + id + "/draft", version), impl_->headers, metadata.dump(), "application/json"),
      200);
}

void ApiClient::discard_draft(const std::string& id) {
  expect_status(impl_->http.Delete(path("/records/" + id + "/draft"), impl_->headers), 204);
}

json ApiClient::upload_file(const std::string& id, const std::string& name, const fs::path& file) {
  std::error_code ec;
  const auto size = fs::file_size(file, ec);
  if (ec) throw ClientError(ClientError::Kind::local, "cannot read " + file.string());
  auto in = std::make_shared<std::ifstream>(file, std::ios::binary);
  if (!*in) throw ClientError(ClientError::Kind::local, "cannot read " + file.string());
  auto provider = [in](std::size_t offset, std::size_t length, httplib::DataSink& sink) {
    std::vector<char> buf(std::min<std::size_t>(length, 64 * 1024));
    in->seekg(static_cast<std::streamoff>(offset));
    in->read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in->gcount() <= 0) return false;
    return sink.write(buf.data(), static_cast<std::size_t>(in->gcount()));
  };
  return expect_json(impl_->http.Put(path("/records/" + id + "/draft/files/" + encode_path_segment(name)),
                                     impl_->headers, size, provider, "application/octet-stream"),
                     201);
}

json ApiClient::upload_bytes(const std::string& id, const std::string& name, std::string_view bytes) {
  return expect_json(impl_->http.Put(path("/records/" + id + "/draft/files/" + encode_path_segment(name)),
                                     impl_->headers, bytes.data(), bytes.size(), "application/octet-stream"),
                     201);
}

void ApiClient::remove_file(const std::string& id, const std::string& name) {
  expect_status(impl_->http.Delete(path("/records/" + id + "/draft/files/" + encode_path_segment(name)),
                                   impl_->headers),
                204);
}

DownloadResult ApiClient::download_file(const std::string& id, const std::string& name, const fs::path& dest,
                                        std::optional<int> version) {
  std::ofstream out;
  crypto::Sha256 hash;
  DownloadResult result{dest, 0, {}};
  std::string error_body;
  int status = 0;
  auto r = impl_->http.Get(
      path("/records/" + id + "/files/" + encode_path_segment(name), version), impl_->headers,
      [&](const httplib::Response& res) {
        status = res.status;
        if (status == 200) {
          out.open(dest, std::ios::binary | std::ios::trunc);
          if (!out) return false;
        }
        return true;
      },
      [&](const char* data, std::size_t len) {
        if (status != 200) {
          error_body.append(data, len);
          return true;
        }
        out.write(data, static_cast<std::streamsize>(len));
        hash.update(std::string_view(data, len));
        result.size += len;
        return static_cast<bool>(out);
      });
  if (status == 200 && !out) throw ClientError(ClientError::Kind::local, "cannot write " + dest.string());
  if (!r) throw_network(r.error());
  if (status != 200) throw_http(status, error_body);
  out.close();
  result.checksum = crypto::tagged_checksum(hash.finish_hex());
  return result;
}

json ApiClient::share(const std::string& id, const std::string& tier, const std::optional<std::string>& community) {
  json body{{"tier", tier}};
  if (community) body["community"] = *community;
  return expect_json(
      impl_->http.Post(path("/records/" + id + "/actions/share"), impl_->headers, body.dump(), "application/json"),
      200);
}

json ApiClient::new_version(const std::string& id, bool import_files) {
  const json body{{"import_files", import_files}};
  return expect_json(
      impl_->http.Post(path("/records/" + id + "/versions"), impl_->headers, body.dump(), "application/json"), 201);
}

json ApiClient::mint_link(const std::string& id, const std::string& permission,
                          const std::optional<std::string>& expires_at) {
  json body{{"permission", permission}};
  if (expires_at) body["expires_at"] = *expires_at;
  return expect_json(
      impl_->http.Post(path("/records/" + id + "/links"), impl_->headers, body.dump(), "application/json"), 201);
}

void ApiClient::revoke_link(const std::string& token) {
  expect_status(impl_->http.Delete(impl_->endpoint.prefix + "/api/links/" + token, impl_->headers), 204);
}

std::string ApiClient::export_record(const std::string& id, const std::string& format, std::optional<int> version) {
  auto r = impl_->http.Get(path("/records/" + id + "/export/" + format, version), impl_->headers);
  if (!r) throw_network(r.error());
  if (r->status != 200) throw_http(r->status, r->body);
  return r->body;
}

json ApiClient::record_stats(const std::string& id) {
  return expect_json(impl_->http.Get(path("/records/" + id + "/stats"), impl_->headers), 200);
}

json ApiClient::version_stats(const std::string& id, int version) {
  return expect_json(
      impl_->http.Get(path("/records/" + id + "/versions/" + std::to_string(version) + "/stats"), impl_->headers), 200);
}

json ApiClient::search(const SearchParams& p) {
  httplib::Params params{{"q", p.text}, {"page", std::to_string(p.page)}, {"size", std::to_string(p.size)}};
  if (p.community) params.emplace("community", *p.community);
  if (p.resource_type) params.emplace("type", *p.resource_type);
  if (p.owner_me) params.emplace("owner", "me");
  if (p.sort) params.emplace("sort", *p.sort);
  return expect_json(impl_->http.Get(impl_->endpoint.prefix + "/api/search", params, impl_->headers), 200);
}

}  // namespace archive::client
