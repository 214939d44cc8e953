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

namespace binomial::theory {

// Closed-form load model.
//
// Keys that find a valid candidate inside the loop are spread uniformly over
// all n buckets; keys that exhaust omega attempts land in the minor tree.
// The minor-tree buckets therefore expect K keys and the lowest-level buckets
// expect K' <= k/n <= K keys.
//
// Integer-n overloads derive M from the cluster geometry and require n > 1.
// The real-valued overloads take M explicitly and accept n anywhere in
// [M, 2M] for curve analysis; n = M is not a valid cluster size.

/// Probability that a key lands on the lowest level [M, n).
[[nodiscard]] double prob_lowest_level(std::uint64_t n, unsigned omega);

struct ExpectedKeys {
  double minor_tree;    // K, keys per bucket in [0, M)
  double lowest_level;  // K', keys per bucket in [M, n)
};

[[nodiscard]] ExpectedKeys expected_keys(std::uint64_t n, double keys, unsigned omega);

/// (K - K') / (k/n).
[[nodiscard]] double relative_gap(std::uint64_t n, unsigned omega);
[[nodiscard]] double relative_gap(double n, double minor, unsigned omega);

/// Standard deviation of the per-bucket expectations in the form
/// (k/n) * sqrt(x * ((2M - n) / 2M)^omega), x = (n - M) / M. This is the
/// form whose maximum over n sits at n* = (2 + omega) M / (1 + omega).
[[nodiscard]] double std_dev(std::uint64_t n, double keys, unsigned omega);
[[nodiscard]] double std_dev(double n, double minor, double keys, unsigned omega);

/// Population standard deviation of the two-group expectation vector
/// (M buckets at K, n - M buckets at K'), evaluated directly from
/// expected_keys. Equals (k/n) * sqrt(x) * ((2M - n) / 2M)^omega, i.e. is
/// smaller than std_dev by a factor ((2M - n) / 2M)^(omega / 2).
[[nodiscard]] double two_group_std_dev(std::uint64_t n, double keys, unsigned omega);

struct SigmaPeak {
  double n_over_minor;  // n* / M = (2 + omega) / (1 + omega)
  double sigma;         // std_dev at n* with k = q * n*
};

[[nodiscard]] SigmaPeak sigma_max(double keys_per_bucket, unsigned omega);

struct BalanceModel {
  std::uint64_t n = 0;
  double keys = 0;
  unsigned omega = 0;
  double p_lowest = 0;
  double k_minor = 0;
  double k_lowest = 0;
  double gap = 0;
  double sigma = 0;
  double sigma_two_group = 0;
  double keys_per_bucket = 0;
};

[[nodiscard]] BalanceModel balance_model(std::uint64_t n, double keys, unsigned omega);

}  // namespace binomial::theory
