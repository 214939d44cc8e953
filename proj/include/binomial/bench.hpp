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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binomial/engine.hpp"
#include "binomial/sim_harness.hpp"

namespace binomial::bench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::size_t kLookupsPerBatch = 10'000;
inline constexpr std::size_t kDefaultLookups = 1'000'000;
inline constexpr unsigned kMinTimingReps = 3;

struct BenchConfig {
  std::vector<std::uint64_t> nodes{10, 100, 1'000, 10'000, 100'000};
  std::uint64_t keys = 100'000;         // total keys (simulate)
  std::uint64_t keys_per_bucket = 1000; // q (balance, theory)
  unsigned omega = kDefaultOmega;
  std::uint64_t seed = 0;
  unsigned reps = 3;
  std::size_t lookups = kDefaultLookups;  // timed lookups per size and repetition
  sim::Parallelism parallelism{};
};

/// "10,100,1000", "2:64" or a mix such as "1:4,16". Ranges may descend.
[[nodiscard]] std::vector<std::uint64_t> parse_sizes(std::string_view text);

/// Walk waypoints: like parse_sizes, but where one token ends on the value the
/// next begins with ("1:64,64:1") the shared size is kept once. An empty
/// string is an empty walk.
[[nodiscard]] std::vector<std::uint64_t> parse_walk(std::string_view text);

// Minimal RFC 4180 writer. Doubles use the shortest round-trip form with a
// '.' separator regardless of locale.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& field(std::string_view value);
  CsvWriter& field(std::uint64_t value);
  CsvWriter& field(double value);
  CsvWriter& field(bool value) { return field(std::uint64_t{value ? 1U : 0U}); }
  void end_row();

  template <typename... Fields>
  void row(const Fields&... fields) {
    (field(fields), ...);
    end_row();
  }

 private:
  void separator();

  std::ostream& out_;
  bool first_ = true;
};

[[nodiscard]] std::string format_double(double value);

struct LatencySample {
  std::uint64_t n = 0;
  double mean_ns = 0;
  double p50_ns = 0;
  double p99_ns = 0;
};

/// Times lookups over pre-generated digests in batches of kLookupsPerBatch.
/// A warmup batch runs first and is not recorded. mean is over all timed
/// lookups; p50/p99 are over the per-lookup time of each batch.
[[nodiscard]] LatencySample measure_lookup_latency(std::uint64_t n, unsigned omega,
                                                   std::span<const HashValue> digests, std::size_t lookups);

int cmd_lookup(std::string_view key, std::uint64_t n, unsigned omega, std::uint64_t seed, std::ostream& out);

/// One row per (size, repetition): n,mean_ns,p50_ns,p99_ns.
std::vector<LatencySample> cmd_bench_lookup(const BenchConfig& config, std::ostream& out);

/// n,min_rel,max_rel,sigma_rel,empirical_P,theory_P with k = q * n per row.
std::vector<sim::BalanceReport> cmd_balance(const BenchConfig& config, std::ostream& out);

/// step,n_from,n_to,moved,violations. Returns kExitViolation if any step
/// had a violation.
int cmd_simulate(const BenchConfig& config, std::span<const std::uint64_t> walk, std::ostream& out);

/// n,P,K,K_prime,gap,sigma,sigma_max_flag. Within each [M, 2M] segment the
/// size nearest to n* = (2 + omega) M / (1 + omega) is flagged with 1.
/// n = 1 rows are skipped.
void cmd_theory(std::span<const std::uint64_t> nodes, unsigned omega, std::uint64_t keys_per_bucket,
                std::ostream& out);

/// Cluster size nearest n* for the segment with minor-tree capacity M.
[[nodiscard]] std::uint64_t nearest_sigma_peak(std::uint64_t minor, unsigned omega);

}  // namespace binomial::bench
