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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "binomial/bench.hpp"
#include "binomial/errors.hpp"

namespace {

using namespace binomial;

struct Options {
  std::string nodes;
  std::string walk;
  std::string csv;
  std::string key;
  bench::BenchConfig config;
};

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("BINOMIAL_SEED");
  if (env == nullptr || *env == '\0') {
    return fallback;
  }
  try {
    std::size_t used = 0;
    const auto value = std::stoull(env, &used, 0);
    if (env[used] != '\0') throw std::invalid_argument("trailing");
    return value;
  } catch (const std::exception&) {
    throw UsageError(std::string("BINOMIAL_SEED is not an unsigned integer: '") + env + "'");
  }
}

void add_common(CLI::App* cmd, Options& opt, bool with_nodes = true) {
  if (with_nodes) {
    cmd->add_option("--nodes", opt.nodes, "Cluster sizes: comma list and/or a:b ranges");
  }
  cmd->add_option("--omega", opt.config.omega, "Maximum lookup iterations")->check(CLI::Range(1U, 64U));
  cmd->add_option("--seed", opt.config.seed, "Global seed (BINOMIAL_SEED overrides)");
  cmd->add_option("--csv", opt.csv, "Write CSV here instead of standard output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BinomialHash consistent hashing: lookup, benchmarks, simulation, and balance model"};
  app.require_subcommand(1);
  Options opt;

  auto* lookup_cmd = app.add_subcommand("lookup", "Print the bucket of a key");
  lookup_cmd->add_option("key", opt.key, "Key bytes")->required();
  add_common(lookup_cmd, opt);

  auto* bench_cmd = app.add_subcommand("bench-lookup", "Time lookups per cluster size");
  add_common(bench_cmd, opt);
  bench_cmd->add_option("--reps", opt.config.reps, "Timing repetitions per size (>= 3)");
  bench_cmd->add_option("--lookups", opt.config.lookups, "Timed lookups per size and repetition");

  auto* balance_cmd = app.add_subcommand("balance", "Per-size load balance against the closed-form model");
  add_common(balance_cmd, opt);
  balance_cmd->add_option("--mean-keys", opt.config.keys_per_bucket, "Keys per bucket q (k = q * n)");
  balance_cmd->add_option("--workers", opt.config.parallelism.workers, "Worker threads");

  auto* simulate_cmd = app.add_subcommand("simulate", "Replay a LIFO resize walk and count violations");
  add_common(simulate_cmd, opt, false);
  simulate_cmd->add_option("--walk", opt.walk, "Size sequence, e.g. 1:64,64:1");
  simulate_cmd->add_option("--keys", opt.config.keys, "Number of keys");
  simulate_cmd->add_option("--workers", opt.config.parallelism.workers, "Worker threads");

  auto* theory_cmd = app.add_subcommand("theory", "Tabulate the closed-form balance model");
  add_common(theory_cmd, opt);
  theory_cmd->add_option("--mean-keys", opt.config.keys_per_bucket, "Keys per bucket q (k = q * n)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? bench::kExitOk : bench::kExitUsage;
  }

  try {
    opt.config.seed = seed_from_env(opt.config.seed);
    if (!opt.nodes.empty()) {
      opt.config.nodes = bench::parse_sizes(opt.nodes);
    }

    std::ofstream file;
    if (!opt.csv.empty()) {
      file.open(opt.csv, std::ios::binary);
      if (!file) {
        std::cerr << "error: cannot open " << opt.csv << '\n';
        return bench::kExitUsage;
      }
    }
    std::ostream& out = opt.csv.empty() ? std::cout : file;

    if (*lookup_cmd) {
      if (opt.config.nodes.size() != 1) {
        throw UsageError("lookup takes exactly one cluster size via --nodes");
      }
      return bench::cmd_lookup(opt.key, opt.config.nodes.front(), opt.config.omega, opt.config.seed, out);
    }
    if (*bench_cmd) {
      (void)bench::cmd_bench_lookup(opt.config, out);
    } else if (*balance_cmd) {
      (void)bench::cmd_balance(opt.config, out);
    } else if (*simulate_cmd) {
      const auto walk = bench::parse_walk(opt.walk);
      const int code = bench::cmd_simulate(opt.config, walk, out);
      if (code != bench::kExitOk) {
        std::cerr << "error: consistency violations detected\n";
      }
      return code;
    } else if (*theory_cmd) {
      bench::cmd_theory(opt.config.nodes, opt.config.omega, opt.config.keys_per_bucket, out);
    }
    return bench::kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bench::kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bench::kExitUsage;
  }
}
