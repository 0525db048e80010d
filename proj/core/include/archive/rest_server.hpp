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

#include <filesystem>
#include <memory>
#include <string>

namespace archive {

class Archive;

/// HTTP front end for an Archive. All routes live under /api; bodies are JSON
/// except raw file bytes and XML exports.
class RestServer {
 public:
  explicit RestServer(Archive& archive);
  ~RestServer();
  RestServer(const RestServer&) = delete;
  RestServer& operator=(const RestServer&) = delete;

  /// Serves prebuilt browser assets from `dir` at the root path.
  void mount_static(const std::filesystem::path& dir);

  /// Binds to `host`; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called. Requires a prior bind().
  void run();

  /// bind() plus run() on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();

  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace archive
