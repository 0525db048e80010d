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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

namespace archive::crypto {

/// Fills `out` from the OpenSSL CSPRNG. Throws on RNG failure.
void random_bytes(std::span<std::uint8_t> out);
std::vector<std::uint8_t> random_bytes(std::size_t n);

std::string to_hex(std::span<const std::uint8_t> bytes);

/// URL-safe base64 (RFC 4648 section 5) without padding.
std::string base64url(std::span<const std::uint8_t> bytes);

/// Opaque URL-safe token drawn from `entropy_bytes` random bytes.
std::string random_token(std::size_t entropy_bytes = 32);

/// Lowercase alphanumeric identifier, rejection-sampled so every symbol is uniform.
std::string random_id(std::size_t length = 10);

/// Incremental SHA-256.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::span<const std::uint8_t> data);
  void update(std::string_view data);
  std::array<std::uint8_t, 32> finish();
  std::string finish_hex();

 private:
  EVP_MD_CTX* ctx_;
};

std::string sha256_hex(std::string_view data);
std::string sha256_hex(std::span<const std::uint8_t> data);

inline constexpr std::string_view kChecksumPrefix = "sha-256:";

/// "sha-256:<hex>" tag used in file manifests.
std::string tagged_checksum(std::string_view hex_digest);

}  // namespace archive::crypto
