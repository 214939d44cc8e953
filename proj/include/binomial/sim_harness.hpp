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
#include <vector>

#include "binomial/engine.hpp"
#include "binomial/hash_family.hpp"

namespace binomial::sim {

// Proportions are compared at this many standard errors.
inline constexpr double kStandardErrors = 4.0;
// Relative band for empirical variance against structural + sampling variance.
inline constexpr double kVarianceBand = 0.20;
inline constexpr double kChiSquareAlpha = 0.001;

// Uniform pseudo-random key digests. Digest j is mix64(seed + (j + 1) * gamma),
// so a (count, seed) pair always regenerates the same sequence and a longer
// population extends a shorter one with the same seed.
class KeyPopulation {
 public:
  KeyPopulation() = default;
  KeyPopulation(std::size_t count, std::uint64_t seed);

  [[nodiscard]] std::size_t size() const noexcept { return digests_.size(); }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::span<const HashValue> digests() const noexcept { return digests_; }

 private:
  std::uint64_t seed_ = 0;
  std::vector<HashValue> digests_;
};

[[nodiscard]] KeyPopulation generate_keys(std::size_t count, std::uint64_t seed);

// Key loops split into contiguous chunks across this many threads. Counts
// are merged additively so the result does not depend on the worker count.
struct Parallelism {
  unsigned workers = 1;
};

struct SimulationReport {
  std::uint64_t n_before = 0;
  std::uint64_t n_after = 0;
  std::uint64_t moved = 0;
  // Grow: keys that moved onto the added bucket. Shrink: keys that were on
  // the removed bucket.
  std::uint64_t moved_to_new = 0;
  std::uint64_t violations = 0;
  std::vector<std::uint64_t> per_bucket;  // size n_after
};

/// One LIFO step (|n_from - n_to| == 1). A grow violation is a key that lands
/// somewhere other than its old bucket or the new one; a shrink violation is
/// a key that moves although its old bucket survived.
[[nodiscard]] SimulationReport check_resize(const KeyPopulation& population, std::uint64_t n_from,
                                            std::uint64_t n_to, unsigned omega = kDefaultOmega,
                                            Parallelism parallelism = {});

/// Replays sizes[0] -> sizes[1] -> ... one check_resize per adjacent pair.
/// Fewer than two sizes yields no steps.
[[nodiscard]] std::vector<SimulationReport> replay_walk(const KeyPopulation& population,
                                                        std::span<const std::uint64_t> sizes,
                                                        unsigned omega = kDefaultOmega,
                                                        Parallelism parallelism = {});

struct BalanceReport {
  std::uint64_t n = 0;
  std::uint64_t keys = 0;
  unsigned omega = 0;
  std::vector<std::uint64_t> per_bucket;
  double mean = 0;
  double empirical_sigma = 0;  // population std dev over the n counts
  double empirical_p = 0;      // fraction of keys in [M, n); 0 when n == 1
  double min_relative = 0;     // (min - mean) / mean
  double max_relative = 0;     // (max - mean) / mean

  [[nodiscard]] double sigma_relative() const noexcept { return mean > 0 ? empirical_sigma / mean : 0.0; }
};

[[nodiscard]] BalanceReport balance_stats(const KeyPopulation& population, std::uint64_t n,
                                          unsigned omega = kDefaultOmega, Parallelism parallelism = {});

struct ChiSquare {
  double statistic = 0;
  unsigned dof = 0;
  double p_value = 1;

  [[nodiscard]] bool uniform(double alpha = kChiSquareAlpha) const noexcept { return p_value >= alpha; }
};

/// Pearson goodness-of-fit of counts against the uniform distribution.
[[nodiscard]] ChiSquare chi_square_uniform(std::span<const std::uint64_t> counts);

// One row of the empirical-versus-closed-form comparison at k = q * n.
struct TheoryComparison {
  std::uint64_t n = 0;
  std::uint64_t keys = 0;

  double p_theory = 0;
  double p_empirical = 0;
  double p_stderr = 0;
  bool p_pass = false;

  double gap_theory = 0;
  double gap_empirical = 0;  // (mean[0, M) - mean[M, n)) / (k / n)
  double gap_stderr = 0;
  bool gap_pass = false;

  double sigma_empirical = 0;
  double sigma_predicted = 0;  // sqrt(two-group^2 + multinomial sampling term)
  double sigma_closed_form = 0;
  bool sigma_pass = false;
};

[[nodiscard]] std::vector<TheoryComparison> theory_vs_empirical(std::span<const std::uint64_t> sizes,
                                                                std::uint64_t keys_per_bucket, unsigned omega,
                                                                std::uint64_t seed, Parallelism parallelism = {});

}  // namespace binomial::sim
