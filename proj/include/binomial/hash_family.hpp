// Copyright 2026 The BinomialHash Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace binomial {

using HashValue = std::uint64_t;

/// Golden-ratio increment of the per-iteration digest stream.
inline constexpr std::uint64_t kStreamGamma = 0x9E3779B97F4A7C15ULL;
/// Level salt for the relocation mixer; kept distinct from kStreamGamma so
/// relocation draws do not line up with iteration draws.
inline constexpr std::uint64_t kLevelSalt = 0xD1B54A32D192ED03ULL;

inline constexpr std::uint64_t kFnvOffsetBasis = 0xCBF29CE484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;

/// 64-bit murmur3 finalizer. Bijective, full avalanche, mix64(0) == 0.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 33;
  x *= 0xFF51AFD7ED558CCDULL;
  x ^= x >> 33;
  x *= 0xC4CEB9FE1A85EC53ULL;
  x ^= x >> 33;
  return x;
}

/// Byte-string digest: FNV-1a fold, XOR seed, then mix64.
///
/// The result is independent of platform endianness since the fold consumes
/// one byte at a time. An empty key folds to the offset basis.
[[nodiscard]] constexpr HashValue digest_key(std::span<const std::uint8_t> bytes,
                                             std::uint64_t seed = 0) noexcept {
  std::uint64_t h = kFnvOffsetBasis;
  for (std::uint8_t byte : bytes) {
    h ^= byte;
    h *= kFnvPrime;
  }
  return mix64(h ^ seed);
}

[[nodiscard]] constexpr HashValue digest_key(std::string_view key,
                                             std::uint64_t seed = 0) noexcept {
  std::uint64_t h = kFnvOffsetBasis;
  for (char ch : key) {
    h ^= static_cast<std::uint8_t>(ch);
    h *= kFnvPrime;
  }
  return mix64(h ^ seed);
}

/// i-th digest of a key whose iteration-0 digest is h0. Random access: the
/// value is a pure function of (h0, i).
[[nodiscard]] constexpr HashValue stream_digest(HashValue h0, std::uint64_t i) noexcept {
  return i == 0 ? h0 : mix64(h0 + i * kStreamGamma);
}

/// Two-argument mixer used by relocation; f is the level mask 2^d - 1.
[[nodiscard]] constexpr HashValue mix(HashValue h, std::uint64_t f) noexcept {
  return mix64(h ^ ((f + 1) * kLevelSalt));
}

/// Cursor over the digest stream of one key. Copyable; advancing a copy
/// leaves the original untouched.
class HashStream {
 public:
  constexpr explicit HashStream(HashValue key_digest) noexcept : key_digest_(key_digest) {}

  [[nodiscard]] constexpr HashValue key_digest() const noexcept { return key_digest_; }
  [[nodiscard]] constexpr std::uint64_t iteration() const noexcept { return iteration_; }
  [[nodiscard]] constexpr HashValue current() const noexcept {
    return stream_digest(key_digest_, iteration_);
  }

  constexpr HashValue advance() noexcept {
    ++iteration_;
    return current();
  }

 private:
  HashValue key_digest_;
  std::uint64_t iteration_ = 0;
};

}  // namespace binomial
