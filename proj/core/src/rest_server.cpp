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

#include "archive/rest_server.hpp"

#include <charconv>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "archive/archive.hpp"
#include "archive/error.hpp"

namespace archive {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDrainLimit = 64ull << 20;
constexpr std::size_t kChunk = 64 * 1024;

const char* kRecord = R"(/api/records/([a-z0-9]+))";

json error_body(int status, std::string_view code, std::string_view message, const FieldErrors& fields = {}) {
  json j{{"status", status}, {"code", code}, {"message", message}};
  if (!fields.empty()) {
    json arr = json::array();
    for (const auto& f : fields) arr.push_back({{"field", f.field}, {"reason", f.reason}});
    j["field_errors"] = std::move(arr);
  }
  return j;
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
  const int status = http_status(e.code());
  std::string code = e.reason().empty() ? std::string(to_string(e.code())) : e.reason();
  send_json(res, error_body(status, code, e.what(), e.field_errors()), status);
}

int parse_int(const std::string& text, const char* field) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::bad_request, "bad-parameter", std::string(field) + " must be an integer");
  }
  return value;
}

std::optional<int> version_param(const httplib::Request& req) {
  if (!req.has_param("version")) return std::nullopt;
  return parse_int(req.get_param_value("version"), "version");
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::bad_request, "malformed-body", "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::bad_request, "malformed-body", std::string("malformed JSON: ") + e.what());
  }
}

std::optional<std::string> opt_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(ErrorCode::validation, "invalid-request", std::string(key) + " must be a string",
                                    {{key, "must be a string"}});
  return it->get<std::string>();
}

json version_summary(const RecordVersion& v) {
  json j = version_to_json(v);
  j["total_size"] = v.total_size();
  return j;
}

}  // namespace

struct RestServer::Impl {
  explicit Impl(Archive& a) : archive(a) { routes(); }

  Archive& archive;
  httplib::Server server;
  std::thread thread;
  int port = -1;

  Caller caller_of(const httplib::Request& req) {
    Caller c;
    const std::string auth = req.get_header_value("Authorization");
    if (!auth.empty()) {
      constexpr std::string_view kBearer = "Bearer ";
      if (!auth.starts_with(kBearer)) {
        throw Error(ErrorCode::unauthenticated, "invalid-token", "expected a Bearer token");
      }
      c.user_id = archive.authenticate(std::string_view(auth).substr(kBearer.size())).user_id;
    }
    if (req.has_param("token")) c.link_token = req.get_param_value("token");
    return c;
  }

  static RequesterContext requester(const httplib::Request& req, const Caller& caller) {
    RequesterContext ctx;
    ctx.remote_address = req.remote_addr;
    ctx.personal_identifier = caller.user_id ? *caller.user_id : req.remote_addr;
    if (req.has_header("Referer")) ctx.referrer = req.get_header_value("Referer");
    return ctx;
  }

  std::string require_user(const Caller& c) {
    if (!c.user_id) throw Error(ErrorCode::unauthenticated, "unauthenticated", "authentication required");
    return *c.user_id;
  }

  // Wraps a handler so every failure becomes exactly one ApiError body.
  template <typename F>
  httplib::Server::Handler guarded(F fn) {
    return [this, fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, e);
      } catch (const std::exception& e) {
        send_json(res, error_body(500, "internal", e.what()), 500);
      }
    };
  }

  void routes();
  void upload(const httplib::Request& req, httplib::Response& res, const httplib::ContentReader& reader);
  void download(const httplib::Request& req, httplib::Response& res);
};

void RestServer::Impl::upload(const httplib::Request& req, httplib::Response& res,
                              const httplib::ContentReader& reader) {
  const std::string record_id = req.matches[1];
  const std::string name = req.matches[2];
  std::optional<std::uint64_t> declared;
  bool consumed = false;
  try {
    const Caller caller = caller_of(req);
    if (!req.has_header("Content-Length")) {
      throw Error(ErrorCode::bad_request, "length-required", "uploads require a Content-Length header");
    }
    declared = std::stoull(req.get_header_value("Content-Length"));
    archive.check_upload(caller, record_id, name, *declared);

    auto writer = archive.files().begin_write();
    consumed = true;
    reader([&](const char* data, std::size_t len) {
      writer.append(std::string_view(data, len));
      return true;
    });
    if (writer.bytes_written() != *declared) {
      throw Error(ErrorCode::bad_request, "truncated-body", "body length does not match Content-Length");
    }
    const FileEntry entry = archive.attach_file(caller, record_id, name, writer.commit());
    send_json(res, file_to_json(entry), 201);
  } catch (const Error& e) {
    if (!consumed) {
      if (declared && *declared <= kDrainLimit) {
        reader([](const char*, std::size_t) { return true; });
      } else {
        res.set_header("Connection", "close");
      }
    }
    send_error(res, e);
  } catch (const std::exception& e) {
    send_json(res, error_body(400, "bad-request", e.what()), 400);
  }
}

void RestServer::Impl::download(const httplib::Request& req, httplib::Response& res) {
  const Caller caller = caller_of(req);
  FileHandle file = archive.open_file(caller, req.matches[1], version_param(req), req.matches[2]);
  archive.record_download(file, requester(req, caller));

  auto in = std::make_shared<std::ifstream>(file.path, std::ios::binary);
  if (!*in) throw Error(ErrorCode::internal, "blob-missing", "stored content unavailable");
  res.set_header("X-Checksum", file.entry.checksum);
  res.set_header("Content-Disposition", "attachment; filename=\"" + file.entry.name + "\"");
  res.set_content_provider(
      file.entry.size, "application/octet-stream",
      [in](std::size_t offset, std::size_t length, httplib::DataSink& sink) {
        std::vector<char> buf(std::min(length, kChunk));
        in->seekg(static_cast<std::streamoff>(offset));
        in->read(buf.data(), static_cast<std::streamsize>(buf.size()));
        const auto got = in->gcount();
        if (got <= 0) return false;
        return sink.write(buf.data(), static_cast<std::size_t>(got));
      });
}

void RestServer::Impl::routes() {
  auto& s = server;
  const std::string rec = kRecord;

  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Headers", "Authorization, Content-Type"},
                         {"Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS"}});
  s.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const std::string code = res.status == 404 ? "not-found" : "error";
    send_json(res, error_body(res.status, code, httplib::status_message(res.status)), res.status);
  });

  s.Get("/api/healthz", [](const httplib::Request&, httplib::Response& res) { send_json(res, {{"status", "ok"}}); });

  // -- configuration ---------------------------------------------------------
  s.Get("/api/communities", guarded([this](const httplib::Request&, httplib::Response& res) {
          json out = json::array();
          for (const auto& c : archive.communities()) out.push_back(community_to_json(c));
          send_json(res, out);
        }));
  s.Get("/api/licenses", guarded([this](const httplib::Request&, httplib::Response& res) {
          send_json(res, archive.config().licenses.list());
        }));
  s.Get(R"(/api/licenses/([A-Za-z0-9.\-]+)/text)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          auto text = archive.config().licenses.text(req.matches[1]);
          if (!text) throw_not_found("license text");
          res.set_content(*text, "text/plain; charset=utf-8");
        }));

  // -- current user -------------------------------------------------------------
  s.Get("/api/user", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto u = archive.user(require_user(caller_of(req)));
          send_json(res, {{"user_id", u.user_id}, {"email", u.email}, {"memberships", u.memberships}});
        }));
  s.Post("/api/user/tokens", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const std::string user = require_user(caller_of(req));
           const json body = parse_body(req);
           const std::string label = opt_string(body, "label").value_or("");
           const std::string secret = archive.mint_api_token(user, label);
           send_json(res, {{"label", label}, {"token", secret}}, 201);
         }));
  s.Get("/api/user/tokens", guarded([this](const httplib::Request& req, httplib::Response& res) {
          json out = json::array();
          for (const auto& t : archive.list_api_tokens(require_user(caller_of(req)))) {
            out.push_back({{"id", t.id}, {"label", t.label}, {"created_at", format_timestamp(t.created_at)},
                           {"revoked", t.revoked}});
          }
          send_json(res, out);
        }));
  s.Delete(R"(/api/user/tokens/([0-9a-f]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
             archive.revoke_api_token(require_user(caller_of(req)), req.matches[1]);
             res.status = 204;
           }));

  // -- membership -------------------------------------------------------------
  s.Post(R"(/api/communities/([a-z0-9\-]+)/members)",
         guarded([this](const httplib::Request& req, httplib::Response& res) {
           const std::string manager = require_user(caller_of(req));
           const auto user = opt_string(parse_body(req), "user");
           if (!user) throw Error(ErrorCode::validation, "invalid-request", "user is required", {{"user", "required"}});
           archive.add_member(manager, req.matches[1], *user);
           res.status = 204;
         }));
  s.Delete(R"(/api/communities/([a-z0-9\-]+)/members/([^/]+))",
           guarded([this](const httplib::Request& req, httplib::Response& res) {
             archive.remove_member(require_user(caller_of(req)), req.matches[1], req.matches[2]);
             res.status = 204;
           }));

  // -- records ------------------------------------------------------------------
  s.Post("/api/records", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const Caller caller = caller_of(req);
           require_user(caller);
           const auto v = archive.create_draft(caller, metadata_from_json(parse_body(req)));
           send_json(res, version_summary(v), 201);
         }));
  s.Get(rec, guarded([this](const httplib::Request& req, httplib::Response& res) {
          const Caller caller = caller_of(req);
          const auto v = archive.view_record(caller, req.matches[1], version_param(req), requester(req, caller));
          send_json(res, version_summary(v));
        }));
  s.Get(rec + "/versions", guarded([this](const httplib::Request& req, httplib::Response& res) {
          json out = json::array();
          for (const auto& v : archive.list_versions(caller_of(req), req.matches[1])) out.push_back(version_summary(v));
          send_json(res, out);
        }));
  s.Post(rec + "/versions", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const json body = parse_body(req);
           const bool import = body.value("import_files", false);
           send_json(res, version_summary(archive.new_version(caller_of(req), req.matches[1], import)), 201);
         }));
  s.Put(rec + "/draft", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto m = metadata_from_json(parse_body(req));
          send_json(res, version_summary(archive.update_metadata(caller_of(req), req.matches[1], version_param(req), m)));
        }));
  s.Delete(rec + "/draft", guarded([this](const httplib::Request& req, httplib::Response& res) {
             archive.discard_draft(caller_of(req), req.matches[1]);
             res.status = 204;
           }));
  s.Put(rec + "/draft/files/([^/]+)",
        [this](const httplib::Request& req, httplib::Response& res, const httplib::ContentReader& reader) {
          upload(req, res, reader);
        });
  s.Delete(rec + "/draft/files/([^/]+)", guarded([this](const httplib::Request& req, httplib::Response& res) {
             archive.remove_file(caller_of(req), req.matches[1], req.matches[2]);
             res.status = 204;
           }));
  s.Get(rec + "/files/([^/]+)",
        guarded([this](const httplib::Request& req, httplib::Response& res) { download(req, res); }));

  s.Post(rec + "/actions/share", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const json body = parse_body(req);
           const auto tier_text = opt_string(body, "tier");
           const auto tier = tier_text ? parse_tier(*tier_text) : std::nullopt;
           if (!tier || *tier == Tier::none) {
             throw Error(ErrorCode::validation, "invalid-request", "tier must be community or consortium",
                         {{"tier", "must be community or consortium"}});
           }
           const auto v = archive.share(caller_of(req), req.matches[1], *tier, opt_string(body, "community"));
           send_json(res, version_summary(v));
         }));

  s.Post(rec + "/links", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const json body = parse_body(req);
           const auto perm_text = opt_string(body, "permission");
           const auto perm = perm_text ? parse_link_permission(*perm_text) : std::nullopt;
           if (!perm) {
             throw Error(ErrorCode::validation, "invalid-request", "permission must be view or edit",
                         {{"permission", "must be view or edit"}});
           }
           std::optional<Timestamp> expires;
           if (auto e = opt_string(body, "expires_at")) {
             expires = parse_timestamp(*e);
             if (!expires) {
               throw Error(ErrorCode::validation, "invalid-request", "expires_at is not a timestamp",
                           {{"expires_at", "invalid timestamp"}});
             }
           }
           const auto minted = archive.mint_share_link(caller_of(req), req.matches[1], *perm, expires);
           json out{{"record_id", minted.link.record_id},
                    {"permission", to_string(minted.link.permission)},
                    {"token", minted.token},
                    {"url", minted.url},
                    {"created_at", format_timestamp(minted.link.created_at)}};
           if (expires) out["expires_at"] = format_timestamp(*expires);
           send_json(res, out, 201);
         }));
  s.Delete(R"(/api/links/([A-Za-z0-9_\-]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
             archive.revoke_share_link(caller_of(req), req.matches[1]);
             res.status = 204;
           }));

  s.Get(rec + "/export/([a-z\\-]+)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto format = parse_export_format(req.matches[2].str());
          if (!format) throw_not_found("export format");
          const auto doc = archive.export_record(caller_of(req), req.matches[1], version_param(req), *format);
          res.set_content(doc.body, doc.media_type);
        }));

  s.Get(rec + "/stats", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto stats = archive.record_stats(caller_of(req), req.matches[1]);
          json versions = json::array();
          for (const auto& [v, agg] : stats.versions) {
            versions.push_back({{"version_id", v.version_id}, {"version_index", v.version_index},
                                {"stats", aggregate_to_json(agg)}});
          }
          send_json(res, {{"record_id", std::string(req.matches[1])},
                          {"cumulative", aggregate_to_json(stats.cumulative)},
                          {"versions", versions}});
        }));
  s.Get(rec + "/versions/([0-9]+)/stats", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const int index = parse_int(req.matches[2], "version");
          const auto agg = archive.version_stats(caller_of(req), req.matches[1], index);
          send_json(res, {{"version_id", make_version_id(std::string(req.matches[1]), index)},
                          {"version_index", index},
                          {"stats", aggregate_to_json(agg)}});
        }));

  // -- search -------------------------------------------------------------------
  s.Get("/api/search", guarded([this](const httplib::Request& req, httplib::Response& res) {
          SearchQuery q;
          q.text = req.get_param_value("q");
          if (req.has_param("community")) q.community = req.get_param_value("community");
          if (req.has_param("type")) {
            q.resource_type = parse_resource_type(req.get_param_value("type"));
            if (!q.resource_type) throw Error(ErrorCode::bad_request, "bad-filter", "unknown resource type");
          }
          for (std::size_t i = 0; i < req.get_param_value_count("keyword"); ++i) {
            q.keywords.push_back(req.get_param_value("keyword", i));
          }
          q.owner_me = req.get_param_value("owner") == "me";
          if (req.has_param("sort")) {
            q.sort = parse_sort_order(req.get_param_value("sort"));
            if (!q.sort) throw Error(ErrorCode::bad_request, "bad-sort", "unknown sort order");
          }
          if (req.has_param("page")) q.page = parse_int(req.get_param_value("page"), "page");
          if (req.has_param("size")) q.page_size = parse_int(req.get_param_value("size"), "size");

          const auto page = archive.search(caller_of(req), q);
          json hits = json::array();
          for (const auto& h : page.hits) {
            json d = index_document_to_json(h.doc);
            d["score"] = h.score;
            hits.push_back(std::move(d));
          }
          send_json(res, {{"total", page.total}, {"page", page.page}, {"size", page.page_size}, {"hits", hits}});
        }));
}

RestServer::RestServer(Archive& archive) : impl_(std::make_unique<Impl>(archive)) {}

RestServer::~RestServer() { stop(); }

void RestServer::mount_static(const std::filesystem::path& dir) {
  if (!impl_->server.set_mount_point("/", dir.string())) {
    throw Error(ErrorCode::bad_request, "bad-static-dir", "cannot serve static assets from " + dir.string());
  }
}

int RestServer::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
  } else {
    impl_->port = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (impl_->port < 0) throw Error(ErrorCode::internal, "bind-failed", "cannot bind " + host);
  return impl_->port;
}

void RestServer::run() { impl_->server.listen_after_bind(); }

int RestServer::start(const std::string& host, int port) {
  const int bound = bind(host, port);
  impl_->thread = std::thread([this] { run(); });
  impl_->server.wait_until_ready();
  return bound;
}

void RestServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int RestServer::port() const { return impl_->port; }

}  // namespace archive
