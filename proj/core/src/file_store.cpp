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

#include "archive/file_store.hpp"

#include <array>
#include <sstream>

#include "archive/error.hpp"

namespace archive {

namespace fs = std::filesystem;

FileStore::FileStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "staging");
}

fs::path FileStore::path_for(std::string_view digest) const {
  if (digest.size() < 2 || digest.find('/') != std::string_view::npos || digest.find('.') != std::string_view::npos) {
    throw Error(ErrorCode::internal, "bad-content-ref", "invalid content reference");
  }
  return root_ / std::string(digest.substr(0, 2)) / std::string(digest);
}

bool FileStore::contains(std::string_view digest) const { return fs::exists(path_for(digest)); }

std::optional<std::uint64_t> FileStore::size_of(std::string_view digest) const {
  std::error_code ec;
  auto size = fs::file_size(path_for(digest), ec);
  if (ec) return std::nullopt;
  return size;
}

std::string FileStore::read(std::string_view digest) const {
  std::ifstream in(path_for(digest), std::ios::binary);
  if (!in) throw_not_found("file content");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string FileStore::recompute_digest(std::string_view digest) const {
  std::ifstream in(path_for(digest), std::ios::binary);
  if (!in) throw_not_found("file content");
  crypto::Sha256 hash;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    hash.update(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())));
  }
  return hash.finish_hex();
}

void FileStore::remove(std::string_view digest) const {
  std::error_code ec;
  fs::remove(path_for(digest), ec);
}

FileStore::Writer FileStore::begin_write() const {
  return Writer(this, root_ / "staging" / crypto::random_id(24));
}

StoredBlob FileStore::put(std::string_view bytes) const {
  auto w = begin_write();
  w.append(bytes);
  return w.commit();
}

FileStore::Writer::Writer(const FileStore* store, fs::path staging)
    : store_(store),
      staging_(std::move(staging)),
      out_(std::make_unique<std::ofstream>(staging_, std::ios::binary | std::ios::trunc)),
      hash_(std::make_unique<crypto::Sha256>()) {
  if (!*out_) throw Error(ErrorCode::internal, "io", "cannot open staging file");
}

FileStore::Writer::Writer(Writer&& other) noexcept
    : store_(other.store_),
      staging_(std::move(other.staging_)),
      out_(std::move(other.out_)),
      hash_(std::move(other.hash_)),
      size_(other.size_),
      done_(other.done_) {
  other.done_ = true;
}

FileStore::Writer::~Writer() {
  if (!done_) {
    out_.reset();
    std::error_code ec;
    fs::remove(staging_, ec);
  }
}

void FileStore::Writer::append(std::span<const std::uint8_t> data) {
  append(std::string_view(reinterpret_cast<const char*>(data.data()), data.size()));
}

void FileStore::Writer::append(std::string_view data) {
  out_->write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!*out_) throw Error(ErrorCode::internal, "io", "write to staging file failed");
  hash_->update(data);
  size_ += data.size();
}

StoredBlob FileStore::Writer::commit() {
  out_->close();
  done_ = true;
  StoredBlob blob{hash_->finish_hex(), size_};
  const auto target = store_->path_for(blob.digest);
  std::error_code ec;
  if (fs::exists(target)) {
    fs::remove(staging_, ec);
  } else {
    fs::create_directories(target.parent_path());
    fs::rename(staging_, target, ec);
    if (ec) {
      fs::remove(staging_, ec);
      throw Error(ErrorCode::internal, "io", "cannot move blob into place");
    }
  }
  return blob;
}

}  // namespace archive
