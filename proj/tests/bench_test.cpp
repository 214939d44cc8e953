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

#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "binomial/errors.hpp"

namespace binomial::bench {
namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(std::move(fields));
  }
  return rows;
}

TEST(ParseSizesTest, ListsAndRanges) {
  EXPECT_EQ(parse_sizes("10,100,1000"), (std::vector<std::uint64_t>{10, 100, 1000}));
  EXPECT_EQ(parse_sizes("2:5"), (std::vector<std::uint64_t>{2, 3, 4, 5}));
  EXPECT_EQ(parse_sizes("3:1, 7"), (std::vector<std::uint64_t>{3, 2, 1, 7}));
  EXPECT_TRUE(parse_sizes("").empty());
  EXPECT_THROW((void)parse_sizes("1,x"), UsageError);
  EXPECT_THROW((void)parse_sizes("1:"), UsageError);
  EXPECT_THROW((void)parse_sizes("-3"), UsageError);
  EXPECT_THROW((void)parse_sizes("1:100000000"), UsageError);
}

TEST(ParseWalkTest, JoinsSharedWaypoints) {
  const auto walk = parse_walk("1:4,4:2");
  EXPECT_EQ(walk, (std::vector<std::uint64_t>{1, 2, 3, 4, 3, 2}));
  EXPECT_EQ(parse_walk("8,9,10"), (std::vector<std::uint64_t>{8, 9, 10}));
  EXPECT_TRUE(parse_walk("  ").empty());
}

TEST(CsvWriterTest, QuotingAndNumbers) {
  std::ostringstream out;
  CsvWriter csv(out);
  csv.row(std::string_view("a,b"), std::string_view("say \"hi\""), std::uint64_t{7}, 0.1, 1e-20);
  EXPECT_EQ(out.str(), "\"a,b\",\"say \"\"hi\"\"\",7,0.1,1e-20\r\n");
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(std::stod(format_double(0.2724733)), 0.2724733);
}

TEST(CmdLookupTest, GoldenAndDeterministic) {
  std::ostringstream a;
  std::ostringstream b;
  EXPECT_EQ(cmd_lookup("key1", 11, 6, 0, a), kExitOk);
  EXPECT_EQ(cmd_lookup("key1", 11, 6, 0, b), kExitOk);
  EXPECT_EQ(a.str(), "9\n");
  EXPECT_EQ(a.str(), b.str());
  std::ostringstream one;
  cmd_lookup("anything", 1, 6, 0, one);
  EXPECT_EQ(one.str(), "0\n");
  std::ostringstream bad;
  EXPECT_THROW(cmd_lookup("key1", 0, 6, 0, bad), InvalidClusterSize);
}

TEST(CmdTheoryTest, FlagsNearestPeak) {
  std::ostringstream out;
  const std::vector<std::uint64_t> nodes{1, 8, 9, 10, 15, 16};
  cmd_theory(nodes, 6, 1000, out);
  const auto rows = parse_csv(out.str());
  ASSERT_EQ(rows.size(), 6U);  // header + n > 1
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "P", "K", "K_prime", "gap", "sigma", "sigma_max_flag"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][6], rows[i][0] == "9" ? "1" : "0") << rows[i][0];
  }
  // n = 16 is a power of two: balanced, gap and sigma vanish.
  EXPECT_EQ(rows[5][0], "16");
  EXPECT_EQ(rows[5][1], "0.5");
  EXPECT_EQ(rows[5][4], "0");
  EXPECT_EQ(rows[5][5], "0");
  // n = 8 ends the previous segment and is also balanced.
  EXPECT_EQ(rows[1][4], "0");
  EXPECT_EQ(nearest_sigma_peak(8, 6), 9U);
  EXPECT_EQ(nearest_sigma_peak(1, 6), 2U);
  EXPECT_EQ(nearest_sigma_peak(64, 5), 75U);
}

TEST(CmdTheoryTest, SigmaAtPeakForOmegaFive) {
  std::ostringstream out;
  const std::vector<std::uint64_t> nodes{75};
  cmd_theory(nodes, 5, 1000, out);
  const auto rows = parse_csv(out.str());
  ASSERT_EQ(rows.size(), 2U);
  EXPECT_EQ(rows[1][6], "1");
  EXPECT_NEAR(std::stod(rows[1][5]) / 1000, 0.0458, 0.0005);
}

TEST(CmdBalanceTest, PowerOfTwoTheoryAndShape) {
  BenchConfig config;
  config.nodes = {1, 11, 16};
  config.keys_per_bucket = 1000;
  std::ostringstream out;
  const auto reports = cmd_balance(config, out);
  ASSERT_EQ(reports.size(), 3U);
  const auto rows = parse_csv(out.str());
  ASSERT_EQ(rows.size(), 4U);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "min_rel", "max_rel", "sigma_rel", "empirical_P", "theory_P"}));
  EXPECT_EQ(rows[1][5], "0");
  EXPECT_EQ(rows[3][5], "0.5");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(std::stod(rows[i][3]), 0.05);
  }
  config.keys_per_bucket = 99;
  EXPECT_THROW((void)cmd_balance(config, out), UsageError);
}

TEST(CmdBalanceTest, ElevenAtHighDensity) {
  BenchConfig config;
  config.nodes = {11};
  config.keys_per_bucket = 100'000;
  std::ostringstream out;
  const auto reports = cmd_balance(config, out);
  EXPECT_NEAR(reports.front().empirical_p, 0.2724733, 0.003);
}

TEST(CmdSimulateTest, WalkAndExitCodes) {
  BenchConfig config;
  config.keys = 20'000;
  std::ostringstream out;
  const auto walk = parse_walk("1:64,64:1");
  EXPECT_EQ(cmd_simulate(config, walk, out), kExitOk);
  const auto rows = parse_csv(out.str());
  ASSERT_EQ(rows.size(), 1 + walk.size() - 1);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"step", "n_from", "n_to", "moved", "violations"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][4], "0");
  }
  // Row for 8 -> 9 moves K'(9) keys onto the new bucket.
  EXPECT_EQ(rows[8][1], "8");
  EXPECT_NEAR(std::stod(rows[8][3]) / 20'000, 0.110328, 0.01);

  std::ostringstream empty;
  EXPECT_EQ(cmd_simulate(config, std::vector<std::uint64_t>{}, empty), kExitOk);
  EXPECT_EQ(empty.str(), "step,n_from,n_to,moved,violations\r\n");

  std::ostringstream bad;
  EXPECT_THROW(cmd_simulate(config, std::vector<std::uint64_t>{3, 5}, bad), UsageError);
  EXPECT_TRUE(bad.str().empty());
}

TEST(CmdBenchLookupTest, OneRowPerSizeAndRepetition) {
  BenchConfig config;
  config.nodes = {10, 1000};
  config.reps = 3;
  config.lookups = 20'000;
  std::ostringstream out;
  const auto samples = cmd_bench_lookup(config, out);
  ASSERT_EQ(samples.size(), 6U);
  const auto rows = parse_csv(out.str());
  ASSERT_EQ(rows.size(), 7U);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "mean_ns", "p50_ns", "p99_ns"}));
  EXPECT_EQ(rows[1][0], "10");
  EXPECT_EQ(rows[4][0], "1000");
  for (const auto& s : samples) {
    EXPECT_GT(s.mean_ns, 0);
    EXPECT_LE(s.p50_ns, s.p99_ns);
  }
  config.reps = 2;
  EXPECT_THROW((void)cmd_bench_lookup(config, out), UsageError);
  config.reps = 3;
  config.lookups = 9'999;
  EXPECT_THROW((void)cmd_bench_lookup(config, out), UsageError);
}

TEST(CmdBenchLookupTest, OmegaCostIsBounded) {
  const auto keys = sim::generate_keys(1 << 16, 5);
  double one = 1e300;
  double six = 1e300;
  // Best of a few runs damps scheduler noise.
  for (int i = 0; i < 3; ++i) {
    one = std::min(one, measure_lookup_latency(9, 1, keys.digests(), 200'000).mean_ns);
    six = std::min(six, measure_lookup_latency(9, 6, keys.digests(), 200'000).mean_ns);
  }
  // n = 9 exhausts the loop most often; six iterations cost at most six times one.
  EXPECT_LE(six, 6 * one);
}

}  // namespace
}  // namespace binomial::bench
