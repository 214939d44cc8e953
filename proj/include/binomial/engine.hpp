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

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "binomial/errors.hpp"
#include "binomial/hash_family.hpp"

namespace binomial {

using Bucket = std::uint64_t;

inline constexpr std::uint64_t kMaxClusterSize = std::uint64_t{1} << 62;
inline constexpr unsigned kDefaultOmega = 6;
inline constexpr unsigned kMaxOmega = 64;

// Hanging-tree shape of a cluster of n buckets.
//
// For n > 1 the enclosing tree is the smallest perfect hanging tree holding
// n buckets (capacity E = 2^height) and the minor tree is the one just below
// it (capacity M = E / 2), so M < n <= E. The lowest level is [M, E); its
// valid part is [M, n). A single-bucket cluster has no meaningful tree and is
// flagged as singleton with height 0, E = 1, M = 0.
struct ClusterGeometry {
  std::uint64_t n = 1;
  unsigned height = 0;
  std::uint64_t enclosing = 1;
  std::uint64_t minor = 0;

  [[nodiscard]] constexpr bool singleton() const noexcept { return n == 1; }
  [[nodiscard]] constexpr std::uint64_t enclosing_mask() const noexcept { return enclosing - 1; }
  [[nodiscard]] constexpr std::uint64_t minor_mask() const noexcept { return minor - 1; }

  friend constexpr bool operator==(const ClusterGeometry&, const ClusterGeometry&) = default;
};

[[nodiscard]] constexpr ClusterGeometry tree_geometry(std::uint64_t n) {
  if (n == 0 || n > kMaxClusterSize) {
    throw InvalidClusterSize("cluster size must be in [1, 2^62], got " + std::to_string(n));
  }
  if (n == 1) {
    return ClusterGeometry{};
  }
  const auto height = static_cast<unsigned>(std::bit_width(n - 1));
  const std::uint64_t enclosing = std::uint64_t{1} << height;
  return ClusterGeometry{n, height, enclosing, enclosing >> 1};
}

/// floor(log2(b)); the depth of bucket b in the hanging tree.
[[nodiscard]] constexpr unsigned highest_one_bit_index(std::uint64_t b) {
  if (b == 0) {
    throw UndefinedDepth("highest_one_bit_index is undefined for 0");
  }
  return static_cast<unsigned>(std::bit_width(b)) - 1;
}

/// Moves b to a position on its own tree level chosen by h. Buckets 0 and 1
/// are the only members of levels 0 and 1 and stay put.
[[nodiscard]] constexpr Bucket relocate_within_level(Bucket b, HashValue h) noexcept {
  if (b < 2) {
    return b;
  }
  const unsigned depth = static_cast<unsigned>(std::bit_width(b)) - 1;
  const std::uint64_t level_base = std::uint64_t{1} << depth;
  const std::uint64_t level_mask = level_base - 1;
  return level_base + (mix(h, level_mask) & level_mask);
}

struct LookupParams {
  unsigned omega = kDefaultOmega;
  std::uint64_t seed = 0;

  constexpr void validate() const {
    if (omega < 1 || omega > kMaxOmega) {
      throw InvalidParameter("omega must be in [1, 64], got " + std::to_string(omega));
    }
  }
};

// Which exit of the lookup loop produced the bucket.
enum class LookupExit : std::uint8_t {
  kSingleton,    // n == 1, no hashing
  kMinorTree,    // candidate fell in the minor tree; original digest remapped there
  kLowestLevel,  // candidate was a valid bucket of the lowest level
  kFallback,     // omega candidates were all invalid; original digest remapped to the minor tree
};

struct LookupTrace {
  Bucket bucket = 0;
  unsigned iterations = 0;  // loop trips taken, in [1, omega] (0 for singleton)
  unsigned advances = 0;    // digest-stream advances, always < omega
  LookupExit exit = LookupExit::kSingleton;
};

/// Lookup that also reports how it terminated.
[[nodiscard]] constexpr LookupTrace lookup_traced(HashValue key_digest, const ClusterGeometry& geometry,
                                                  unsigned omega = kDefaultOmega) noexcept {
  if (geometry.singleton()) {
    return {};
  }
  const std::uint64_t n = geometry.n;
  const std::uint64_t minor = geometry.minor;
  const std::uint64_t enclosing_mask = geometry.enclosing_mask();

  // The minor-tree exits always rehash the original digest, never the
  // current stream value.
  const auto minor_bucket = [&] { return relocate_within_level(key_digest & geometry.minor_mask(), key_digest); };

  HashValue current = key_digest;
  LookupTrace trace;
  for (unsigned i = 0; i < omega; ++i) {
    trace.iterations = i + 1;
    const Bucket candidate = relocate_within_level(current & enclosing_mask, current);
    if (candidate < minor) {
      trace.bucket = minor_bucket();
      trace.exit = LookupExit::kMinorTree;
      return trace;
    }
    if (candidate < n) {
      trace.bucket = candidate;
      trace.exit = LookupExit::kLowestLevel;
      return trace;
    }
    if (i + 1 < omega) {
      current = stream_digest(key_digest, i + 1);
      ++trace.advances;
    }
  }
  trace.bucket = minor_bucket();
  trace.exit = LookupExit::kFallback;
  return trace;
}

/// Bucket in [0, n) for a key digest. Monotone under growth by one bucket and
/// minimally disruptive under removal of the highest bucket.
[[nodiscard]] constexpr Bucket lookup(HashValue key_digest, const ClusterGeometry& geometry,
                                      unsigned omega = kDefaultOmega) noexcept {
  return lookup_traced(key_digest, geometry, omega).bucket;
}

[[nodiscard]] constexpr Bucket lookup(HashValue key_digest, std::uint64_t n, const LookupParams& params = {}) {
  params.validate();
  return lookup(key_digest, tree_geometry(n), params.omega);
}

/// End-to-end lookup of a byte-string key; the seed enters at digestion.
[[nodiscard]] constexpr Bucket lookup_key(std::string_view key, std::uint64_t n, const LookupParams& params = {}) {
  return lookup(digest_key(key, params.seed), n, params);
}

}  // namespace binomial
