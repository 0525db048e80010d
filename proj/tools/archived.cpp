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

// archived: runs the archive service, or performs one-off admin tasks
// against its data directory.

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "archive/archive.hpp"
#include "archive/error.hpp"
#include "archive/rest_server.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consortium archive server"};
  app.require_subcommand(1);

  std::string config_path;
  std::string host;
  int port = -1;
  std::string ui_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", config_path, "Deployment configuration file")->required();
  serve->add_option("--host", host, "Override listen_host");
  serve->add_option("--port", port, "Override listen_port (0 picks a free port)");
  serve->add_option("--ui-dir", ui_dir, "Serve browser assets from this directory");

  std::string user;
  std::string label = "cli";
  auto* mint = app.add_subcommand("mint-token", "Create an API token for a user and print it once");
  mint->add_option("--config", config_path, "Deployment configuration file")->required();
  mint->add_option("--user", user, "User id")->required();
  mint->add_option("--label", label, "Token label");

  auto* check = app.add_subcommand("check-index", "Compare the search index with the primary store");
  check->add_option("--config", config_path, "Deployment configuration file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    archive::Archive archive(archive::load_config(config_path));

    if (*mint) {
      std::cout << archive.mint_api_token(user, label) << '\n';
      return 0;
    }
    if (*check) {
      const auto report = archive.verify_consistency();
      for (const auto& id : report.missing_in_index) std::cout << "missing " << id << '\n';
      for (const auto& id : report.stale_in_index) std::cout << "stale " << id << '\n';
      for (const auto& id : report.orphaned_in_index) std::cout << "orphaned " << id << '\n';
      return report.empty() ? 0 : 1;
    }

    archive.start_background_indexing();
    archive::RestServer server(archive);
    if (!ui_dir.empty()) server.mount_static(ui_dir);
    const std::string bind_host = host.empty() ? archive.config().listen_host : host;
    const int bind_port = port >= 0 ? port : archive.config().listen_port;

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    const int bound = server.start(bind_host, bind_port);
    std::cout << "listening on " << bind_host << ':' << bound << std::endl;
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
    server.stop();
    archive.stop_background_indexing();
  } catch (const archive::Error& e) {
    std::cerr << "archived: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "archived: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
