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

#include "binomial/balance_theory.hpp"

#include <cmath>
#include <string>

#include "binomial/engine.hpp"
#include "binomial/errors.hpp"

namespace binomial::theory {
namespace {

ClusterGeometry model_geometry(std::uint64_t n) {
  if (n <= 1) {
    throw ModelDomainError("balance model needs n > 1, got " + std::to_string(n));
  }
  return tree_geometry(n);
}

void check_omega(unsigned omega) {
  if (omega < 1) {
    throw ModelDomainError("balance model needs omega >= 1");
  }
}

void check_keys(double keys) {
  if (!(keys >= 0)) {
    throw ModelDomainError("key count must be non-negative");
  }
}

void check_real_domain(double n, double minor) {
  if (!(minor > 0) || !(n >= minor) || !(n <= 2 * minor)) {
    throw ModelDomainError("real-valued model needs M > 0 and M <= n <= 2M");
  }
}

// ((2M - n) / 2M)^omega; the ratio is taken first so nothing overflows.
double exhaustion_probability(double n, double minor, unsigned omega) {
  return std::pow((2 * minor - n) / (2 * minor), static_cast<double>(omega));
}

}  // namespace

double prob_lowest_level(std::uint64_t n, unsigned omega) {
  check_omega(omega);
  const auto g = model_geometry(n);
  const double nn = static_cast<double>(n);
  const double e = static_cast<double>(g.enclosing);
  const double m = static_cast<double>(g.minor);
  return (nn - m) / nn * (1.0 - std::pow((e - nn) / e, static_cast<double>(omega)));
}

ExpectedKeys expected_keys(std::uint64_t n, double keys, unsigned omega) {
  check_keys(keys);
  const double p = prob_lowest_level(n, omega);
  const auto g = tree_geometry(n);
  const double m = static_cast<double>(g.minor);
  const double lowest = static_cast<double>(n - g.minor);
  return {(1.0 - p) * keys / m, p * keys / lowest};
}

double relative_gap(double n, double minor, unsigned omega) {
  check_omega(omega);
  check_real_domain(n, minor);
  const double x = (n - minor) / minor;
  return std::ldexp(1.0, -static_cast<int>(omega)) * (1.0 + x) * std::pow(1.0 - x, static_cast<double>(omega));
}

double relative_gap(std::uint64_t n, unsigned omega) {
  const auto g = model_geometry(n);
  return relative_gap(static_cast<double>(n), static_cast<double>(g.minor), omega);
}

double std_dev(double n, double minor, double keys, unsigned omega) {
  check_omega(omega);
  check_keys(keys);
  check_real_domain(n, minor);
  const double x = (n - minor) / minor;
  return keys / n * std::sqrt(x * exhaustion_probability(n, minor, omega));
}

double std_dev(std::uint64_t n, double keys, unsigned omega) {
  const auto g = model_geometry(n);
  return std_dev(static_cast<double>(n), static_cast<double>(g.minor), keys, omega);
}

double two_group_std_dev(std::uint64_t n, double keys, unsigned omega) {
  const auto g = model_geometry(n);
  const auto [k_minor, k_lowest] = expected_keys(n, keys, omega);
  const double nn = static_cast<double>(n);
  const double m = static_cast<double>(g.minor);
  const double mean = keys / nn;
  const double variance = (m * (mean - k_minor) * (mean - k_minor) +
                           (nn - m) * (k_lowest - mean) * (k_lowest - mean)) / nn;
  return std::sqrt(variance);
}

SigmaPeak sigma_max(double keys_per_bucket, unsigned omega) {
  check_omega(omega);
  check_keys(keys_per_bucket);
  const double w = static_cast<double>(omega);
  const double ratio = (2.0 + w) / (1.0 + w);
  const double sigma = keys_per_bucket * std::sqrt(1.0 / (1.0 + w) * std::pow(w / (2.0 * (1.0 + w)), w));
  return {ratio, sigma};
}

BalanceModel balance_model(std::uint64_t n, double keys, unsigned omega) {
  BalanceModel model;
  model.n = n;
  model.keys = keys;
  model.omega = omega;
  model.p_lowest = prob_lowest_level(n, omega);
  const auto expected = expected_keys(n, keys, omega);
  model.k_minor = expected.minor_tree;
  model.k_lowest = expected.lowest_level;
  model.gap = relative_gap(n, omega);
  model.sigma = std_dev(n, keys, omega);
  model.sigma_two_group = two_group_std_dev(n, keys, omega);
  model.keys_per_bucket = keys / static_cast<double>(n);
  return model;
}

}  // namespace binomial::theory
