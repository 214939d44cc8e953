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

#include "binomial/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <string>
#include <system_error>

#include "binomial/balance_theory.hpp"
#include "binomial/errors.hpp"

namespace binomial::bench {
namespace {

std::atomic<std::uint64_t> g_lookup_sink{0};

constexpr std::uint64_t kMaxRangeLength = std::uint64_t{1} << 24;

std::uint64_t parse_size(std::string_view token) {
  std::uint64_t value = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (token.empty() || ec != std::errc{} || ptr != last) {
    throw UsageError("not a cluster size: '" + std::string(token) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Expands each comma-separated token ("a" or "a:b") and hands the expanded
// run to sink.
template <typename Sink>
void for_each_token(std::string_view text, Sink&& sink) {
  text = trim(text);
  if (text.empty()) {
    return;
  }
  while (true) {
    const auto comma = text.find(',');
    const auto token = trim(text.substr(0, comma));
    std::vector<std::uint64_t> run;
    const auto colon = token.find(':');
    if (colon == std::string_view::npos) {
      run.push_back(parse_size(token));
    } else {
      const auto from = parse_size(trim(token.substr(0, colon)));
      const auto to = parse_size(trim(token.substr(colon + 1)));
      const auto span = from <= to ? to - from : from - to;
      if (span >= kMaxRangeLength) {
        throw UsageError("range too long: '" + std::string(token) + "'");
      }
      for (auto v = from;; from <= to ? ++v : --v) {
        run.push_back(v);
        if (v == to) break;
      }
    }
    sink(std::move(run));
    if (comma == std::string_view::npos) {
      break;
    }
    text.remove_prefix(comma + 1);
  }
}

void require_sizes(std::span<const std::uint64_t> sizes) {
  for (auto n : sizes) {
    (void)tree_geometry(n);
  }
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) {
    return 0;
  }
  std::sort(values.begin(), values.end());
  const double rank = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(values.size() - 1, lo + 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

}  // namespace

std::vector<std::uint64_t> parse_sizes(std::string_view text) {
  std::vector<std::uint64_t> sizes;
  for_each_token(text, [&](std::vector<std::uint64_t> run) { sizes.insert(sizes.end(), run.begin(), run.end()); });
  return sizes;
}

std::vector<std::uint64_t> parse_walk(std::string_view text) {
  std::vector<std::uint64_t> walk;
  for_each_token(text, [&](std::vector<std::uint64_t> run) {
    auto begin = run.begin();
    if (!walk.empty() && !run.empty() && run.front() == walk.back()) {
      ++begin;
    }
    walk.insert(walk.end(), begin, run.end());
  });
  return walk;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void CsvWriter::separator() {
  if (!first_) {
    out_ << ',';
  }
  first_ = false;
}

CsvWriter& CsvWriter::field(std::string_view value) {
  separator();
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
    out_ << value;
    return *this;
  }
  out_ << '"';
  for (char ch : value) {
    if (ch == '"') out_ << '"';
    out_ << ch;
  }
  out_ << '"';
  return *this;
}

CsvWriter& CsvWriter::field(std::uint64_t value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::field(double value) {
  separator();
  out_ << format_double(value);
  return *this;
}

void CsvWriter::end_row() {
  out_ << "\r\n";
  first_ = true;
}

LatencySample measure_lookup_latency(std::uint64_t n, unsigned omega, std::span<const HashValue> digests,
                                     std::size_t lookups) {
  if (digests.empty()) {
    throw UsageError("latency measurement needs digests");
  }
  LookupParams{omega, 0}.validate();
  const auto geometry = tree_geometry(n);
  const std::size_t batches = std::max<std::size_t>(1, lookups / kLookupsPerBatch);
  using Clock = std::chrono::steady_clock;

  std::uint64_t sink = 0;
  std::size_t cursor = 0;
  const auto run_batch = [&] {
    for (std::size_t j = 0; j < kLookupsPerBatch; ++j) {
      sink += lookup(digests[cursor], geometry, omega);
      if (++cursor == digests.size()) cursor = 0;
    }
  };

  run_batch();  // warmup
  std::vector<double> per_lookup;
  per_lookup.reserve(batches);
  double total_ns = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    const auto start = Clock::now();
    run_batch();
    const auto elapsed = std::chrono::duration<double, std::nano>(Clock::now() - start).count();
    total_ns += elapsed;
    per_lookup.push_back(elapsed / static_cast<double>(kLookupsPerBatch));
  }
  // Keeps the loop observable.
  g_lookup_sink.fetch_xor(sink, std::memory_order_relaxed);

  LatencySample sample;
  sample.n = n;
  sample.mean_ns = total_ns / static_cast<double>(batches * kLookupsPerBatch);
  sample.p50_ns = percentile(per_lookup, 0.50);
  sample.p99_ns = percentile(per_lookup, 0.99);
  return sample;
}

int cmd_lookup(std::string_view key, std::uint64_t n, unsigned omega, std::uint64_t seed, std::ostream& out) {
  out << lookup_key(key, n, LookupParams{omega, seed}) << '\n';
  return kExitOk;
}

std::vector<LatencySample> cmd_bench_lookup(const BenchConfig& config, std::ostream& out) {
  if (config.reps < kMinTimingReps) {
    throw UsageError("timing needs at least " + std::to_string(kMinTimingReps) + " repetitions");
  }
  if (config.lookups < kLookupsPerBatch) {
    throw UsageError("timing needs at least " + std::to_string(kLookupsPerBatch) + " lookups per size");
  }
  require_sizes(config.nodes);
  // Digest generation is kept out of the timed region.
  const auto population = sim::generate_keys(std::min<std::size_t>(config.lookups, 1U << 20), config.seed);

  CsvWriter csv(out);
  csv.row(std::string_view("n"), std::string_view("mean_ns"), std::string_view("p50_ns"), std::string_view("p99_ns"));
  std::vector<LatencySample> samples;
  for (auto n : config.nodes) {
    for (unsigned rep = 0; rep < config.reps; ++rep) {
      const auto s = measure_lookup_latency(n, config.omega, population.digests(), config.lookups);
      csv.row(s.n, s.mean_ns, s.p50_ns, s.p99_ns);
      samples.push_back(s);
    }
  }
  return samples;
}

std::vector<sim::BalanceReport> cmd_balance(const BenchConfig& config, std::ostream& out) {
  if (config.keys_per_bucket < 100) {
    throw UsageError("balance needs at least 100 keys per bucket");
  }
  require_sizes(config.nodes);
  CsvWriter csv(out);
  csv.row(std::string_view("n"), std::string_view("min_rel"), std::string_view("max_rel"),
          std::string_view("sigma_rel"), std::string_view("empirical_P"), std::string_view("theory_P"));
  std::vector<sim::BalanceReport> reports;
  reports.reserve(config.nodes.size());
  for (auto n : config.nodes) {
    const auto population = sim::generate_keys(config.keys_per_bucket * n, config.seed);
    auto report = sim::balance_stats(population, n, config.omega, config.parallelism);
    const double theory_p = n > 1 ? theory::prob_lowest_level(n, config.omega) : 0.0;
    csv.row(n, report.min_relative, report.max_relative, report.sigma_relative(), report.empirical_p, theory_p);
    reports.push_back(std::move(report));
  }
  return reports;
}

int cmd_simulate(const BenchConfig& config, std::span<const std::uint64_t> walk, std::ostream& out) {
  // Validates the whole walk before printing anything.
  const auto population = sim::generate_keys(config.keys, config.seed);
  const auto reports = sim::replay_walk(population, walk, config.omega, config.parallelism);

  CsvWriter csv(out);
  csv.row(std::string_view("step"), std::string_view("n_from"), std::string_view("n_to"), std::string_view("moved"),
          std::string_view("violations"));
  std::uint64_t violations = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    csv.row(static_cast<std::uint64_t>(i + 1), r.n_before, r.n_after, r.moved, r.violations);
    violations += r.violations;
  }
  return violations == 0 ? kExitOk : kExitViolation;
}

std::uint64_t nearest_sigma_peak(std::uint64_t minor, unsigned omega) {
  const double peak = static_cast<double>(minor) * (2.0 + omega) / (1.0 + omega);
  const auto nearest = static_cast<std::uint64_t>(std::llround(peak));
  return std::clamp(nearest, minor + 1, 2 * minor);
}

void cmd_theory(std::span<const std::uint64_t> nodes, unsigned omega, std::uint64_t keys_per_bucket,
                std::ostream& out) {
  require_sizes(nodes);
  CsvWriter csv(out);
  csv.row(std::string_view("n"), std::string_view("P"), std::string_view("K"), std::string_view("K_prime"),
          std::string_view("gap"), std::string_view("sigma"), std::string_view("sigma_max_flag"));
  for (auto n : nodes) {
    if (n < 2) {
      continue;
    }
    const auto geometry = tree_geometry(n);
    const auto model =
        theory::balance_model(n, static_cast<double>(keys_per_bucket) * static_cast<double>(n), omega);
    const bool peak = n == nearest_sigma_peak(geometry.minor, omega);
    csv.row(n, model.p_lowest, model.k_minor, model.k_lowest, model.gap, model.sigma, peak);
  }
}

}  // namespace binomial::bench
