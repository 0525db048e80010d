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

#include "archive/tar.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace archive::tar {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kBlock = 512;
using Header = std::array<char, kBlock>;

void put_octal(char* field, std::size_t width, std::uint64_t value) {
  // width includes the trailing NUL
  const std::uint64_t limit = std::uint64_t{1} << (3 * (width - 1));
  if (value < limit) {
    std::snprintf(field, width, "%0*llo", static_cast<int>(width - 1), static_cast<unsigned long long>(value));
    return;
  }
  // GNU base-256 extension for sizes beyond the octal range.
  std::memset(field, 0, width);
  for (std::size_t i = width; i-- > 1 && value != 0; value >>= 8) field[i] = static_cast<char>(value & 0xff);
  field[0] = static_cast<char>(0x80);
}

std::uint64_t get_number(const char* field, std::size_t width) {
  if (static_cast<unsigned char>(field[0]) & 0x80) {
    std::uint64_t v = 0;
    for (std::size_t i = 1; i < width; ++i) v = (v << 8) | static_cast<unsigned char>(field[i]);
    return v;
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width && field[i] != '\0' && field[i] != ' '; ++i) {
    if (field[i] < '0' || field[i] > '7') throw std::runtime_error("tar: bad octal field");
    v = v * 8 + static_cast<std::uint64_t>(field[i] - '0');
  }
  return v;
}

unsigned header_checksum(const Header& h) {
  unsigned sum = 0;
  for (std::size_t i = 0; i < kBlock; ++i) {
    sum += (i >= 148 && i < 156) ? ' ' : static_cast<unsigned char>(h[i]);
  }
  return sum;
}

Header make_header(const std::string& name, bool directory, std::uint64_t size) {
  Header h{};
  std::string prefix;
  std::string base = name;
  if (base.size() > 100) {
    // Split at a '/' so that the tail fits in 100 bytes and the head in 155.
    const std::size_t cut = name.rfind('/', name.size() - (directory ? 2 : 1));
    if (cut == std::string::npos || cut > 155 || name.size() - cut - 1 > 100) {
      throw std::runtime_error("tar: path too long: " + name);
    }
    prefix = name.substr(0, cut);
    base = name.substr(cut + 1);
  }
  std::memcpy(h.data(), base.data(), base.size());
  put_octal(h.data() + 100, 8, directory ? 0755 : 0644);
  put_octal(h.data() + 108, 8, 0);
  put_octal(h.data() + 116, 8, 0);
  put_octal(h.data() + 124, 12, directory ? 0 : size);
  put_octal(h.data() + 136, 12, 0);
  h[156] = directory ? '5' : '0';
  std::memcpy(h.data() + 257, "ustar", 6);
  std::memcpy(h.data() + 263, "00", 2);
  std::memcpy(h.data() + 345, prefix.data(), prefix.size());
  std::snprintf(h.data() + 148, 8, "%06o", header_checksum(h));
  h[155] = ' ';
  return h;
}

void pad(std::ostream& out, std::uint64_t written) {
  static const std::array<char, kBlock> zeros{};
  const std::size_t rem = written % kBlock;
  if (rem != 0) out.write(zeros.data(), static_cast<std::streamsize>(kBlock - rem));
}

void finish(std::ostream& out) {
  static const std::array<char, 2 * kBlock> zeros{};
  out.write(zeros.data(), zeros.size());
  if (!out) throw std::runtime_error("tar: write failed");
}

}  // namespace

void write_entries(const std::vector<Entry>& entries, std::ostream& out) {
  std::vector<const Entry*> sorted;
  for (const auto& e : entries) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](const Entry* a, const Entry* b) { return a->name < b->name; });
  for (const Entry* e : sorted) {
    const Header h = make_header(e->name, e->directory, e->content.size());
    out.write(h.data(), h.size());
    if (!e->directory) {
      out.write(e->content.data(), static_cast<std::streamsize>(e->content.size()));
      pad(out, e->content.size());
    }
  }
  finish(out);
}

void write_directory(const fs::path& dir, std::ostream& out) {
  if (!fs::is_directory(dir)) throw std::runtime_error("tar: not a directory: " + dir.string());
  std::vector<std::pair<std::string, fs::path>> items;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_directory() && !entry.is_regular_file()) continue;
    std::string rel = fs::relative(entry.path(), dir).generic_string();
    if (entry.is_directory()) rel += '/';
    items.emplace_back(std::move(rel), entry.path());
  }
  std::sort(items.begin(), items.end());

  std::vector<char> buf(64 * 1024);
  for (const auto& [name, path] : items) {
    const bool directory = name.back() == '/';
    const std::uint64_t size = directory ? 0 : fs::file_size(path);
    const Header h = make_header(name, directory, size);
    out.write(h.data(), h.size());
    if (directory) continue;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("tar: cannot read " + path.string());
    std::uint64_t copied = 0;
    while (copied < size && in) {
      in.read(buf.data(), static_cast<std::streamsize>(std::min<std::uint64_t>(buf.size(), size - copied)));
      out.write(buf.data(), in.gcount());
      copied += static_cast<std::uint64_t>(in.gcount());
    }
    if (copied != size) throw std::runtime_error("tar: file changed while archiving: " + path.string());
    pad(out, size);
  }
  finish(out);
}

std::vector<Entry> read_entries(std::istream& in) {
  std::vector<Entry> out;
  Header h{};
  while (in.read(h.data(), h.size())) {
    if (std::all_of(h.begin(), h.end(), [](char c) { return c == '\0'; })) break;
    if (get_number(h.data() + 148, 8) != header_checksum(h)) throw std::runtime_error("tar: header checksum mismatch");
    Entry e;
    std::string prefix(h.data() + 345, strnlen(h.data() + 345, 155));
    std::string base(h.data(), strnlen(h.data(), 100));
    e.name = prefix.empty() ? base : prefix + "/" + base;
    e.directory = h[156] == '5';
    const std::uint64_t size = get_number(h.data() + 124, 12);
    e.content.resize(size);
    if (size > 0 && !in.read(e.content.data(), static_cast<std::streamsize>(size))) {
      throw std::runtime_error("tar: truncated entry " + e.name);
    }
    in.ignore(static_cast<std::streamsize>((kBlock - size % kBlock) % kBlock));
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace archive::tar
