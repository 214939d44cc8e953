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

#include "binomial/sim_harness.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "binomial/balance_theory.hpp"
#include "binomial/errors.hpp"

namespace binomial::sim {
namespace {

// Runs fn(begin, end, slot) over contiguous chunks of [0, count) and returns
// once every chunk is done. slot indexes the per-worker accumulator.
template <typename Fn>
void for_each_chunk(std::size_t count, unsigned workers, Fn&& fn) {
  workers = std::max(1U, workers);
  if (workers == 1 || count < 2 * static_cast<std::size_t>(workers)) {
    fn(std::size_t{0}, count, 0U);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (unsigned slot = 0; slot < workers; ++slot) {
    const std::size_t begin = std::min(count, slot * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    threads.emplace_back([&fn, begin, end, slot] { fn(begin, end, slot); });
  }
}

unsigned effective_workers(Parallelism parallelism) { return std::max(1U, parallelism.workers); }

void require_cluster_size(std::uint64_t n) { (void)tree_geometry(n); }

struct StepTally {
  std::uint64_t moved = 0;
  std::uint64_t moved_to_new = 0;
  std::uint64_t violations = 0;
  std::vector<std::uint64_t> per_bucket;
};

// Computes the assignment at n_to (written into assignment) and compares it
// against the assignment at n_from already stored there.
SimulationReport apply_step(std::span<const HashValue> digests, std::span<Bucket> assignment,
                            std::uint64_t n_from, std::uint64_t n_to, unsigned omega, Parallelism parallelism) {
  const bool grow = n_to == n_from + 1;
  if (!grow && n_to + 1 != n_from) {
    throw UsageError("resize steps must change the cluster size by one: " + std::to_string(n_from) + " -> " +
                     std::to_string(n_to));
  }
  require_cluster_size(n_from);
  require_cluster_size(n_to);
  const auto geometry = tree_geometry(n_to);
  const Bucket touched = grow ? n_from : n_from - 1;

  const unsigned workers = effective_workers(parallelism);
  std::vector<StepTally> tallies(workers);
  for (auto& t : tallies) {
    t.per_bucket.assign(n_to, 0);
  }
  for_each_chunk(digests.size(), workers, [&](std::size_t begin, std::size_t end, unsigned slot) {
    StepTally& t = tallies[slot];
    for (std::size_t j = begin; j < end; ++j) {
      const Bucket before = assignment[j];
      const Bucket after = lookup(digests[j], geometry, omega);
      assignment[j] = after;
      ++t.per_bucket[after];
      if (after != before) {
        ++t.moved;
      }
      if (grow) {
        if (after == touched) {
          ++t.moved_to_new;
        } else if (after != before) {
          ++t.violations;
        }
      } else {
        if (before == touched) {
          ++t.moved_to_new;
        } else if (after != before) {
          ++t.violations;
        }
      }
    }
  });

  SimulationReport report;
  report.n_before = n_from;
  report.n_after = n_to;
  report.per_bucket.assign(n_to, 0);
  for (const auto& t : tallies) {
    report.moved += t.moved;
    report.moved_to_new += t.moved_to_new;
    report.violations += t.violations;
    for (std::uint64_t b = 0; b < n_to; ++b) {
      report.per_bucket[b] += t.per_bucket[b];
    }
  }
  return report;
}

std::vector<Bucket> assign_all(std::span<const HashValue> digests, std::uint64_t n, unsigned omega,
                               Parallelism parallelism) {
  const auto geometry = tree_geometry(n);
  std::vector<Bucket> assignment(digests.size());
  for_each_chunk(digests.size(), effective_workers(parallelism), [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t j = begin; j < end; ++j) {
      assignment[j] = lookup(digests[j], geometry, omega);
    }
  });
  return assignment;
}

std::vector<std::uint64_t> histogram(std::span<const HashValue> digests, std::uint64_t n, unsigned omega,
                                     Parallelism parallelism) {
  const auto geometry = tree_geometry(n);
  const unsigned workers = effective_workers(parallelism);
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(n, 0));
  for_each_chunk(digests.size(), workers, [&](std::size_t begin, std::size_t end, unsigned slot) {
    auto& counts = partial[slot];
    for (std::size_t j = begin; j < end; ++j) {
      ++counts[lookup(digests[j], geometry, omega)];
    }
  });
  std::vector<std::uint64_t> counts(n, 0);
  for (const auto& p : partial) {
    for (std::uint64_t b = 0; b < n; ++b) {
      counts[b] += p[b];
    }
  }
  return counts;
}

void validate_omega(unsigned omega) { LookupParams{omega, 0}.validate(); }

}  // namespace

KeyPopulation::KeyPopulation(std::size_t count, std::uint64_t seed) : seed_(seed), digests_(count) {
  for (std::size_t j = 0; j < count; ++j) {
    digests_[j] = mix64(seed + (static_cast<std::uint64_t>(j) + 1) * kStreamGamma);
  }
}

KeyPopulation generate_keys(std::size_t count, std::uint64_t seed) { return KeyPopulation(count, seed); }

SimulationReport check_resize(const KeyPopulation& population, std::uint64_t n_from, std::uint64_t n_to,
                              unsigned omega, Parallelism parallelism) {
  validate_omega(omega);
  if (n_to != n_from + 1 && n_to + 1 != n_from) {
    throw UsageError("resize steps must change the cluster size by one: " + std::to_string(n_from) + " -> " +
                     std::to_string(n_to));
  }
  auto assignment = assign_all(population.digests(), n_from, omega, parallelism);
  return apply_step(population.digests(), assignment, n_from, n_to, omega, parallelism);
}

std::vector<SimulationReport> replay_walk(const KeyPopulation& population, std::span<const std::uint64_t> sizes,
                                          unsigned omega, Parallelism parallelism) {
  validate_omega(omega);
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    const auto a = sizes[i - 1];
    const auto b = sizes[i];
    if (b != a + 1 && b + 1 != a) {
      throw UsageError("walk step " + std::to_string(i) + " is not adjacent: " + std::to_string(a) + " -> " +
                       std::to_string(b));
    }
  }
  std::vector<SimulationReport> reports;
  if (sizes.size() < 2) {
    return reports;
  }
  reports.reserve(sizes.size() - 1);
  auto assignment = assign_all(population.digests(), sizes.front(), omega, parallelism);
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    reports.push_back(apply_step(population.digests(), assignment, sizes[i - 1], sizes[i], omega, parallelism));
  }
  return reports;
}

BalanceReport balance_stats(const KeyPopulation& population, std::uint64_t n, unsigned omega,
                            Parallelism parallelism) {
  validate_omega(omega);
  const auto geometry = tree_geometry(n);
  BalanceReport report;
  report.n = n;
  report.keys = population.size();
  report.omega = omega;
  report.per_bucket = histogram(population.digests(), n, omega, parallelism);

  const double nn = static_cast<double>(n);
  report.mean = static_cast<double>(report.keys) / nn;
  double sum_sq = 0;
  for (auto c : report.per_bucket) {
    const double d = static_cast<double>(c) - report.mean;
    sum_sq += d * d;
  }
  report.empirical_sigma = std::sqrt(sum_sq / nn);

  if (!geometry.singleton() && report.keys > 0) {
    std::uint64_t lowest = 0;
    for (std::uint64_t b = geometry.minor; b < n; ++b) {
      lowest += report.per_bucket[b];
    }
    report.empirical_p = static_cast<double>(lowest) / static_cast<double>(report.keys);
  }
  if (report.mean > 0) {
    const auto [lo, hi] = std::minmax_element(report.per_bucket.begin(), report.per_bucket.end());
    report.min_relative = (static_cast<double>(*lo) - report.mean) / report.mean;
    report.max_relative = (static_cast<double>(*hi) - report.mean) / report.mean;
  }
  return report;
}

ChiSquare chi_square_uniform(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) {
    throw UsageError("chi-square needs at least two cells");
  }
  std::uint64_t total = 0;
  for (auto c : counts) {
    total += c;
  }
  if (total == 0) {
    throw UsageError("chi-square needs at least one observation");
  }
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  ChiSquare result;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    result.statistic += d * d / expected;
  }
  result.dof = static_cast<unsigned>(counts.size() - 1);
  result.p_value = boost::math::gamma_q(result.dof / 2.0, result.statistic / 2.0);
  return result;
}

std::vector<TheoryComparison> theory_vs_empirical(std::span<const std::uint64_t> sizes,
                                                  std::uint64_t keys_per_bucket, unsigned omega, std::uint64_t seed,
                                                  Parallelism parallelism) {
  if (keys_per_bucket < 100) {
    throw UsageError("theory comparison needs at least 100 keys per bucket");
  }
  validate_omega(omega);
  std::vector<TheoryComparison> rows;
  rows.reserve(sizes.size());
  for (const auto n : sizes) {
    if (n < 2) {
      throw UsageError("theory comparison needs cluster sizes > 1");
    }
    const auto geometry = tree_geometry(n);
    const std::uint64_t keys = keys_per_bucket * n;
    const auto population = generate_keys(keys, seed);
    const auto report = balance_stats(population, n, omega, parallelism);
    const auto model = theory::balance_model(n, static_cast<double>(keys), omega);

    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(keys);
    const double m = static_cast<double>(geometry.minor);
    const double lowest = nn - m;

    TheoryComparison row;
    row.n = n;
    row.keys = keys;

    row.p_theory = model.p_lowest;
    row.p_empirical = report.empirical_p;
    row.p_stderr = std::sqrt(model.p_lowest * (1 - model.p_lowest) / kk);
    row.p_pass = std::abs(row.p_empirical - row.p_theory) <= kStandardErrors * row.p_stderr;

    // The group totals are one binomial draw, so the gap's error follows
    // from the error of the lowest-level fraction.
    const double mean = kk / nn;
    const double minor_mean = kk * (1 - report.empirical_p) / m;
    const double lowest_mean = kk * report.empirical_p / lowest;
    row.gap_theory = model.gap;
    row.gap_empirical = (minor_mean - lowest_mean) / mean;
    row.gap_stderr = nn * (1 / m + 1 / lowest) * row.p_stderr;
    row.gap_pass = std::abs(row.gap_empirical - row.gap_theory) <= kStandardErrors * row.gap_stderr;

    const double p_minor = model.k_minor / kk;
    const double p_low = model.k_lowest / kk;
    const double sampling = (m * model.k_minor * (1 - p_minor) + lowest * model.k_lowest * (1 - p_low)) / nn;
    const double predicted_var = model.sigma_two_group * model.sigma_two_group + sampling;
    const double empirical_var = report.empirical_sigma * report.empirical_sigma;
    row.sigma_empirical = report.empirical_sigma;
    row.sigma_predicted = std::sqrt(predicted_var);
    row.sigma_closed_form = model.sigma;
    row.sigma_pass = std::abs(empirical_var - predicted_var) <= kVarianceBand * predicted_var;

    rows.push_back(row);
  }
  return rows;
}

}  // namespace binomial::sim
