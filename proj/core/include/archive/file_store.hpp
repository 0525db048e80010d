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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "archive/crypto.hpp"

namespace archive {

/// Bytes that have been written and hashed but not yet referenced by a manifest.
struct StoredBlob {
  std::string digest;  // lowercase hex SHA-256
  std::uint64_t size = 0;

  bool operator==(const StoredBlob&) const = default;
};

/// Content-addressed blob store laid out as `<root>/<first 2 hex>/<digest>`.
/// Identical content is stored once.
class FileStore {
 public:
  explicit FileStore(std::filesystem::path root);

  /// Streams bytes into a staging file while hashing them. Abandoned writers
  /// delete their staging file.
  class Writer {
   public:
    Writer(Writer&&) noexcept;
    Writer& operator=(Writer&&) = delete;
    ~Writer();

    void append(std::span<const std::uint8_t> data);
    void append(std::string_view data);
    std::uint64_t bytes_written() const { return size_; }
    StoredBlob commit();

   private:
    friend class FileStore;
    Writer(const FileStore* store, std::filesystem::path staging);

    const FileStore* store_;
    std::filesystem::path staging_;
    std::unique_ptr<std::ofstream> out_;
    std::unique_ptr<crypto::Sha256> hash_;
    std::uint64_t size_ = 0;
    bool done_ = false;
  };

  Writer begin_write() const;
  StoredBlob put(std::string_view bytes) const;

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path_for(std::string_view digest) const;
  bool contains(std::string_view digest) const;
  std::optional<std::uint64_t> size_of(std::string_view digest) const;
  std::string read(std::string_view digest) const;

  /// SHA-256 of the bytes currently on disk for `digest`.
  std::string recompute_digest(std::string_view digest) const;

  void remove(std::string_view digest) const;

 private:
  std::filesystem::path root_;
};

}  // namespace archive
