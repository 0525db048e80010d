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

// archive: command-line client for the archive REST API.
//
// Exit codes: 0 ok, 1 validation or local problem, 2 authentication,
// 3 network, 4 permission / quota / conflict / not found, 5 checksum mismatch.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "archive/api_client.hpp"
#include "archive/crypto.hpp"
#include "archive/error.hpp"
#include "archive/export.hpp"
#include "archive/model.hpp"
#include "archive/tar.hpp"
#include "archive/time.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using archive::client::ApiClient;
using archive::client::ClientConfig;
using archive::client::ClientError;

namespace {

constexpr const char* kBackupLicense = "bm-2030";

struct Globals {
  std::string url;
  std::string token;
  std::string community;
  bool json = false;
};

std::string env(const char* name) {
  const char* v = std::getenv(name);
  return v == nullptr ? std::string() : std::string(v);
}

json read_config_file() {
  fs::path path = env("ARCHIVE_CONFIG");
  if (path.empty()) {
    const std::string home = env("HOME");
    if (home.empty()) return json::object();
    path = fs::path(home) / ".config" / "archive" / "config.json";
  }
  std::ifstream in(path);
  if (!in) return json::object();
  try {
    return json::parse(in);
  } catch (const json::exception&) {
    throw ClientError(ClientError::Kind::local, "cannot parse config file " + path.string());
  }
}

// flag > environment > config file
ClientConfig resolve_config(const Globals& g, bool need_token) {
  const json file = read_config_file();
  auto pick = [&](const std::string& flag, const char* var, const char* key) {
    if (!flag.empty()) return flag;
    if (auto e = env(var); !e.empty()) return e;
    return file.contains(key) && file[key].is_string() ? file[key].get<std::string>() : std::string();
  };
  ClientConfig cfg;
  cfg.server_url = pick(g.url, "ARCHIVE_URL", "server_url");
  cfg.bearer_token = pick(g.token, "ARCHIVE_TOKEN", "token");
  if (auto c = pick(g.community, "ARCHIVE_COMMUNITY", "default_community"); !c.empty()) cfg.default_community = c;
  if (cfg.server_url.empty()) {
    throw ClientError(ClientError::Kind::local, "no server URL configured (--url, ARCHIVE_URL or config file)");
  }
  if (need_token && cfg.bearer_token.empty()) {
    throw ClientError(ClientError::Kind::http, "no API token configured (--token, ARCHIVE_TOKEN or config file)",
                      401, "unauthenticated");
  }
  return cfg;
}

// Accepts either a bare record id or a share-link URL, which also carries the
// server location and the link token.
struct Target {
  ApiClient client;
  std::string record_id;
};

Target target_for(const Globals& g, const std::string& id_or_url) {
  if (auto link = archive::client::parse_share_link(id_or_url)) {
    ClientConfig cfg;
    cfg.server_url = link->base_url;
    cfg.bearer_token = g.token.empty() ? env("ARCHIVE_TOKEN") : g.token;
    ApiClient client(cfg);
    client.set_link_token(link->token);
    return {std::move(client), link->record_id};
  }
  return {ApiClient(resolve_config(g, false)), id_or_url};
}

json read_metadata_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ClientError(ClientError::Kind::local, "cannot read metadata file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ClientError(ClientError::Kind::local, "metadata file is not valid JSON: " + std::string(e.what()));
  }
  // Local structural check; the server remains the authority on content.
  try {
    return archive::metadata_to_json(archive::metadata_from_json(j));
  } catch (const archive::Error& e) {
    json fields = json::array();
    for (const auto& f : e.field_errors()) fields.push_back({{"field", f.field}, {"reason", f.reason}});
    throw ClientError(ClientError::Kind::local, e.what(), 0, "invalid-request", fields);
  }
}

std::string record_url(const ClientConfig& cfg, const std::string& id) {
  std::string base = cfg.server_url;
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base + "/records/" + id;
}

std::pair<std::string, std::optional<std::string>> tier_of(const std::string& target,
                                                           const std::optional<std::string>& fallback) {
  if (target == "consortium") return {"consortium", std::nullopt};
  if (!target.empty()) return {"community", target};
  if (fallback) return {"community", fallback};
  return {"consortium", std::nullopt};
}

void print_version(const json& v) {
  std::cout << v["id"].get<std::string>() << "  " << v["metadata"]["title"].get<std::string>() << '\n'
            << "state: " << v["state"].get<std::string>() << "  tier: " << v["tier"].get<std::string>();
  if (v.contains("community")) std::cout << "  community: " << v["community"].get<std::string>();
  std::cout << '\n';
  for (const auto& f : v["files"]) {
    std::cout << "  " << f["name"].get<std::string>() << "  " << f["size"].get<std::uint64_t>() << "  "
              << f["checksum"].get<std::string>() << '\n';
  }
}

void print_stats_line(const std::string& label, const json& s) {
  std::cout << label << "  views=" << s["unique_views"].get<std::int64_t>()
            << "  downloads=" << s["unique_downloads"].get<std::int64_t>() << '\n';
}

// -- commands ------------------------------------------------------------------

int cmd_upload(const Globals& g, const std::string& metadata_path, const std::vector<std::string>& files,
               const std::string& share_target) {
  const ClientConfig cfg = resolve_config(g, true);
  const json metadata = read_metadata_file(metadata_path);
  for (const auto& f : files) {
    if (!fs::is_regular_file(f)) throw ClientError(ClientError::Kind::local, "not a readable file: " + f);
  }
  ApiClient api(cfg);
  json version = api.create_record(metadata);
  const std::string id = version["record_id"];
  for (const auto& f : files) api.upload_file(id, fs::path(f).filename().string(), f);
  if (!share_target.empty()) {
    auto [tier, community] = tier_of(share_target, std::nullopt);
    version = api.share(id, tier, community);
  } else {
    version = api.get_record(id);
  }
  if (g.json) {
    std::cout << json{{"record_id", id}, {"url", record_url(cfg, id)}, {"version", version}}.dump(2) << '\n';
  } else {
    std::cout << id << '\n' << record_url(cfg, id) << '\n';
  }
  return 0;
}

int cmd_get(const Globals& g, const std::string& id, std::optional<int> version) {
  Target t = target_for(g, id);
  const json v = t.client.get_record(t.record_id, version);
  if (g.json) {
    std::cout << v.dump(2) << '\n';
  } else {
    print_version(v);
  }
  return 0;
}

int cmd_download(const Globals& g, const std::string& id, const std::string& dest, std::optional<int> version) {
  Target t = target_for(g, id);
  const json v = t.client.get_record(t.record_id, version);
  fs::create_directories(dest);
  json report = json::array();
  bool mismatch = false;
  for (const auto& f : v["files"]) {
    const std::string name = f["name"];
    const std::string expected = f["checksum"];
    const auto got = t.client.download_file(t.record_id, name, fs::path(dest) / name, v["version_index"].get<int>());
    const bool ok = got.checksum == expected;
    mismatch = mismatch || !ok;
    report.push_back({{"name", name}, {"size", got.size}, {"checksum", got.checksum}, {"verified", ok}});
    if (!g.json) std::cout << name << "  " << got.size << "  " << got.checksum << (ok ? "  ok" : "  MISMATCH") << '\n';
  }
  if (g.json) std::cout << json{{"id", v["id"]}, {"files", report}}.dump(2) << '\n';
  if (mismatch) throw ClientError(ClientError::Kind::checksum, "downloaded content does not match the manifest");
  return 0;
}

int cmd_search(const Globals& g, archive::client::SearchParams params) {
  ApiClient api(resolve_config(g, false));
  const json page = api.search(params);
  if (g.json) {
    std::cout << page.dump(2) << '\n';
    return 0;
  }
  for (const auto& h : page["hits"]) {
    std::cout << h["record_id"].get<std::string>() << "  v" << h["version_index"].get<int>() << "  "
              << h["state"].get<std::string>() << "  " << h["title"].get<std::string>() << '\n';
  }
  std::cout << page["total"].get<std::int64_t>() << " result(s)\n";
  return 0;
}

int cmd_update(const Globals& g, const std::string& id, const std::string& metadata_path,
               std::optional<int> version) {
  ApiClient api(resolve_config(g, true));
  const json v = api.update_draft(id, read_metadata_file(metadata_path), version);
  if (g.json) {
    std::cout << v.dump(2) << '\n';
  } else {
    std::cout << v["id"].get<std::string>() << '\n';
  }
  return 0;
}

int cmd_share(const Globals& g, const std::string& id, const std::string& tier, std::string community) {
  const ClientConfig cfg = resolve_config(g, true);
  if (tier == "community" && community.empty() && cfg.default_community) community = *cfg.default_community;
  ApiClient api(cfg);
  const json v = api.share(id, tier, community.empty() ? std::nullopt : std::optional<std::string>(community));
  if (g.json) {
    std::cout << v.dump(2) << '\n';
  } else {
    std::cout << v["id"].get<std::string>() << "  " << v["tier"].get<std::string>() << '\n';
  }
  return 0;
}

int cmd_new_version(const Globals& g, const std::string& id, bool import_files) {
  ApiClient api(resolve_config(g, true));
  const json v = api.new_version(id, import_files);
  if (g.json) {
    std::cout << v.dump(2) << '\n';
  } else {
    std::cout << v["id"].get<std::string>() << '\n';
  }
  return 0;
}

int cmd_link(const Globals& g, const std::string& id, const std::string& permission,
             const std::optional<std::string>& expires) {
  ApiClient api(resolve_config(g, true));
  const json link = api.mint_link(id, permission, expires);
  if (g.json) {
    std::cout << link.dump(2) << '\n';
  } else {
    std::cout << link["url"].get<std::string>() << '\n';
  }
  return 0;
}

int cmd_stats(const Globals& g, const std::string& id) {
  Target t = target_for(g, id);
  const json s = t.client.record_stats(t.record_id);
  if (g.json) {
    std::cout << s.dump(2) << '\n';
    return 0;
  }
  for (const auto& v : s["versions"]) print_stats_line(v["version_id"].get<std::string>(), v["stats"]);
  print_stats_line("cumulative", s["cumulative"]);
  return 0;
}

int cmd_export(const Globals& g, const std::string& id, const std::string& format, std::optional<int> version,
               const std::string& output) {
  Target t = target_for(g, id);
  const std::string body = t.client.export_record(t.record_id, format, version);
  if (output.empty()) {
    std::cout << body;
    if (!body.empty() && body.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream out(output, std::ios::binary);
    out << body;
    if (!out) throw ClientError(ClientError::Kind::local, "cannot write " + output);
  }
  return 0;
}

// Finds the caller's record whose title is exactly `label`; oldest wins.
std::optional<std::string> find_labelled_record(ApiClient& api, const std::string& label) {
  std::optional<std::string> best;
  std::string best_created;
  archive::client::SearchParams p;
  p.text = label;
  p.owner_me = true;
  p.size = 100;
  for (;; ++p.page) {
    const json page = api.search(p);
    for (const auto& h : page["hits"]) {
      if (h["title"] != label) continue;
      const std::string created = h["created_at"];
      if (!best || created < best_created || (created == best_created && h["record_id"] < *best)) {
        best = h["record_id"].get<std::string>();
        best_created = created;
      }
    }
    if (static_cast<std::int64_t>(p.page) * p.size >= page["total"].get<std::int64_t>()) break;
  }
  return best;
}

int cmd_backup(const Globals& g, const std::string& path, const std::string& label) {
  const ClientConfig cfg = resolve_config(g, true);
  std::error_code ec;
  const auto status = fs::status(path, ec);
  if (ec || (!fs::is_regular_file(status) && !fs::is_directory(status))) {
    throw ClientError(ClientError::Kind::local, "not a readable file or directory: " + path);
  }

  fs::path upload_path = path;
  std::string file_name = fs::path(path).filename().string();
  std::optional<fs::path> scratch;
  if (fs::is_directory(status)) {
    if (file_name.empty()) file_name = fs::path(path).parent_path().filename().string();
    file_name += ".tar";
    scratch = fs::temp_directory_path() / ("archive-backup-" + archive::crypto::random_id(10) + ".tar");
    std::ofstream out(*scratch, std::ios::binary);
    archive::tar::write_directory(path, out);
    out.close();
    upload_path = *scratch;
  } else {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw ClientError(ClientError::Kind::local, "not a readable file: " + path);
  }
  struct Cleanup {
    std::optional<fs::path> p;
    ~Cleanup() {
      std::error_code ignored;
      if (p) fs::remove(*p, ignored);
    }
  } cleanup{scratch};

  ApiClient api(cfg);
  auto [tier, community] = tier_of({}, cfg.default_community);

  std::string record_id;
  bool created = false;
  if (auto existing = find_labelled_record(api, label)) {
    record_id = *existing;
    api.new_version(record_id, false);
  } else {
    json metadata{{"title", label},
                  {"description", "Scheduled backup"},
                  {"license", kBackupLicense},
                  {"resource_type", "dataset"},
                  {"publication_date", archive::format_date(archive::date_of(archive::system_clock()()))}};
    record_id = api.create_record(metadata)["record_id"].get<std::string>();
    created = true;
  }

  json version;
  try {
    api.upload_file(record_id, file_name, upload_path);
    version = api.share(record_id, tier, community);
  } catch (const ClientError&) {
    // Leave no half-filled draft behind for the next scheduled run.
    try {
      api.discard_draft(record_id);
    } catch (const ClientError&) {
    }
    throw;
  }
  if (g.json) {
    std::cout << json{{"record_id", record_id}, {"created", created}, {"version", version}}.dump(2) << '\n';
  } else {
    std::cout << version["id"].get<std::string>() << '\n';
  }
  return 0;
}

int cmd_publish(const Globals& g, const std::string& id, const std::string& target_url,
                const std::string& target_token) {
  ApiClient source(resolve_config(g, true));
  json v;
  for (const auto& candidate : source.list_versions(id)) {
    if (candidate["state"] == "shared") v = candidate;
  }
  if (v.is_null()) {
    throw ClientError(ClientError::Kind::http, "only shared records can be published", 409, "not-shared");
  }
  const int index = v["version_index"];
  const archive::MetadataDocument metadata = archive::import_json_export(source.export_record(id, "json", index));

  ApiClient target(ClientConfig{target_url, target_token, std::nullopt});
  const std::string remote_id = target.create_record(archive::metadata_to_json(metadata))["record_id"];

  const fs::path scratch = fs::temp_directory_path() / ("archive-publish-" + archive::crypto::random_id(10));
  fs::create_directories(scratch);
  auto abort_remote = [&] {
    try {
      target.discard_draft(remote_id);
    } catch (const ClientError&) {
    }
  };
  std::map<std::string, std::string> expected;
  try {
    for (const auto& f : v["files"]) {
      const std::string name = f["name"];
      expected[name] = f["checksum"];
      const auto local = source.download_file(id, name, scratch / name, index);
      if (local.checksum != expected[name]) {
        throw ClientError(ClientError::Kind::checksum, "source file " + name + " does not match its checksum");
      }
      const json uploaded = target.upload_file(remote_id, name, scratch / name);
      if (uploaded["checksum"] != expected[name]) {
        throw ClientError(ClientError::Kind::checksum, "target stored " + name + " with a different checksum");
      }
      fs::remove(scratch / name);
    }
    const json remote = target.get_record(remote_id);
    std::map<std::string, std::string> actual;
    for (const auto& f : remote["files"]) actual[f["name"]] = f["checksum"];
    if (actual != expected) throw ClientError(ClientError::Kind::checksum, "remote checksum set differs");
    if (archive::metadata_from_json(remote["metadata"]) != metadata) {
      throw ClientError(ClientError::Kind::local, "remote metadata differs from the source");
    }
  } catch (...) {
    abort_remote();
    std::error_code ignored;
    fs::remove_all(scratch, ignored);
    throw;
  }
  fs::remove_all(scratch);

  if (g.json) {
    std::cout << json{{"remote_record_id", remote_id}, {"files", expected.size()}}.dump(2) << '\n';
  } else {
    std::cout << remote_id << '\n';
  }
  return 0;
}

void report(const ClientError& e) {
  std::cerr << "archive: " << e.what();
  if (!e.code().empty() && e.code() != "invalid-request") std::cerr << " (" << e.code() << ')';
  std::cerr << '\n';
  for (const auto& f : e.field_errors()) {
    std::cerr << "  " << f.value("field", "") << ": " << f.value("reason", "") << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Command-line client for the consortium archive"};
  app.require_subcommand(1);

  Globals g;
  app.add_option("--url", g.url, "Server URL (env ARCHIVE_URL)");
  app.add_option("--token", g.token, "API token (env ARCHIVE_TOKEN)");
  app.add_option("--community", g.community, "Default community slug (env ARCHIVE_COMMUNITY)");
  app.add_flag("--json", g.json, "Machine-readable output");

  // Each subcommand also accepts --json so it can follow the command name.
  auto json_flag = [&](CLI::App* sub) { sub->add_flag("--json", g.json, "Machine-readable output"); };

  std::string metadata;
  std::vector<std::string> files;
  std::string share_target;
  auto* upload = app.add_subcommand("upload", "Create a record, attach files, optionally share");
  upload->add_option("--metadata", metadata, "Metadata JSON file")->required();
  upload->add_option("--file", files, "File to attach (repeatable)");
  upload->add_option("--share", share_target, "Community slug or 'consortium'");
  json_flag(upload);

  std::string id;
  std::optional<int> version;
  auto* get = app.add_subcommand("get", "Show a record version");
  get->add_option("id", id, "Record id or share-link URL")->required();
  get->add_option("--version", version, "Version index");
  json_flag(get);

  std::string dest = ".";
  auto* download = app.add_subcommand("download", "Download and verify a version's files");
  download->add_option("id", id, "Record id or share-link URL")->required();
  download->add_option("--dest", dest, "Destination directory");
  download->add_option("--version", version, "Version index");
  json_flag(download);

  archive::client::SearchParams sp;
  std::string sp_community, sp_type, sp_sort;
  auto* search = app.add_subcommand("search", "Search readable records");
  search->add_option("-q,--query", sp.text, "Free text");
  search->add_option("--community", sp_community, "Restrict to a community");
  search->add_option("--type", sp_type, "Resource type");
  search->add_flag("--mine", sp.owner_me, "Only my records, drafts included");
  search->add_option("--sort", sp_sort, "newest, oldest or best-match");
  search->add_option("--page", sp.page, "Page number");
  search->add_option("--size", sp.size, "Page size");
  json_flag(search);

  auto* update = app.add_subcommand("update", "Replace a version's metadata");
  update->add_option("id", id, "Record id")->required();
  update->add_option("--metadata", metadata, "Metadata JSON file")->required();
  update->add_option("--version", version, "Version index (default: latest)");
  json_flag(update);

  std::string tier;
  std::string share_community;
  auto* share = app.add_subcommand("share", "Share the latest version");
  share->add_option("id", id, "Record id")->required();
  share->add_option("--tier", tier, "community or consortium")->required()->check(
      CLI::IsMember({"community", "consortium"}));
  share->add_option("--community", share_community, "Community slug for the community tier");
  json_flag(share);

  bool import_files = false;
  auto* new_version = app.add_subcommand("new-version", "Open a new draft version");
  new_version->add_option("id", id, "Record id")->required();
  new_version->add_flag("--import-files", import_files, "Carry files over from the latest version");
  json_flag(new_version);

  std::string permission;
  std::optional<std::string> expires;
  auto* link = app.add_subcommand("link", "Mint a share link");
  link->add_option("id", id, "Record id")->required();
  link->add_option("--permission", permission, "view or edit")->required()->check(CLI::IsMember({"view", "edit"}));
  link->add_option("--expires", expires, "Expiry timestamp (YYYY-MM-DDTHH:MM:SSZ)");
  json_flag(link);

  auto* stats = app.add_subcommand("stats", "Usage statistics per version and cumulative");
  stats->add_option("id", id, "Record id or share-link URL")->required();
  json_flag(stats);

  std::string format;
  std::string output;
  auto* exp = app.add_subcommand("export", "Export a version's metadata");
  exp->add_option("id", id, "Record id or share-link URL")->required();
  exp->add_option("--format", format, "json, json-ld, datacite-xml or dublincore-xml")
      ->required()
      ->check(CLI::IsMember({"json", "json-ld", "datacite-xml", "dublincore-xml"}));
  exp->add_option("--version", version, "Version index");
  exp->add_option("-o,--output", output, "Write to a file instead of standard output");
  json_flag(exp);

  std::string backup_path;
  std::string label;
  auto* backup = app.add_subcommand("backup", "Upload a snapshot as the next version of a labelled record");
  backup->add_option("path", backup_path, "File or directory")->required();
  backup->add_option("--record-label", label, "Title of the backup record")->required();
  json_flag(backup);

  std::string target_url;
  std::string target_token;
  auto* publish = app.add_subcommand("publish", "Copy a shared record into a draft on another archive");
  publish->add_option("id", id, "Record id")->required();
  publish->add_option("--target-url", target_url, "Target server URL")->required();
  publish->add_option("--target-token", target_token, "API token on the target")->required();
  json_flag(publish);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*upload) return cmd_upload(g, metadata, files, share_target);
    if (*get) return cmd_get(g, id, version);
    if (*download) return cmd_download(g, id, dest, version);
    if (*search) {
      if (!sp_community.empty()) sp.community = sp_community;
      if (!sp_type.empty()) sp.resource_type = sp_type;
      if (!sp_sort.empty()) sp.sort = sp_sort;
      return cmd_search(g, sp);
    }
    if (*update) return cmd_update(g, id, metadata, version);
    if (*share) return cmd_share(g, id, tier, share_community);
    if (*new_version) return cmd_new_version(g, id, import_files);
    if (*link) return cmd_link(g, id, permission, expires);
    if (*stats) return cmd_stats(g, id);
    if (*exp) return cmd_export(g, id, format, version, output);
    if (*backup) return cmd_backup(g, backup_path, label);
    if (*publish) return cmd_publish(g, id, target_url, target_token);
  } catch (const ClientError& e) {
    report(e);
    return archive::client::exit_code_for(e);
  } catch (const archive::Error& e) {
    std::cerr << "archive: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "archive: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
