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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>

#include "binomial/engine.hpp"
#include "binomial/errors.hpp"

namespace binomial::theory {
namespace {

TEST(BalanceTheoryTest, ProbLowestLevelExamples) {
  EXPECT_DOUBLE_EQ(prob_lowest_level(11, 6), 4571343.0 / 16777216.0);
  EXPECT_DOUBLE_EQ(prob_lowest_level(16, 1), 0.5);
  EXPECT_DOUBLE_EQ(prob_lowest_level(16, 9), 0.5);
  EXPECT_DOUBLE_EQ(prob_lowest_level(12, 1), 0.25);
  EXPECT_THROW((void)prob_lowest_level(1, 6), ModelDomainError);
  EXPECT_THROW((void)prob_lowest_level(11, 0), ModelDomainError);
}

TEST(BalanceTheoryTest, ExpectedKeysExamples) {
  const auto balanced = expected_keys(16, 16000, 6);
  EXPECT_DOUBLE_EQ(balanced.minor_tree, 1000);
  EXPECT_DOUBLE_EQ(balanced.lowest_level, 1000);

  const double k = 11e6;
  const double p = prob_lowest_level(11, 6);
  const auto eleven = expected_keys(11, k, 6);
  EXPECT_DOUBLE_EQ(eleven.lowest_level, p * k / 3);
  EXPECT_DOUBLE_EQ(eleven.minor_tree, (1 - p) * k / 8);

  const auto empty = expected_keys(37, 0, 6);
  EXPECT_EQ(empty.minor_tree, 0);
  EXPECT_EQ(empty.lowest_level, 0);
  EXPECT_THROW((void)expected_keys(37, -1, 6), ModelDomainError);
}

TEST(BalanceTheoryTest, ModelInvariantsOverSweep) {
  for (unsigned omega = 1; omega <= 12; ++omega) {
    for (std::uint64_t n = 2; n <= 2048; ++n) {
      const auto g = tree_geometry(n);
      const double k = 1000.0 * static_cast<double>(n);
      const auto m = balance_model(n, k, omega);
      const double q = k / static_cast<double>(n);
      ASSERT_GE(m.p_lowest, 0);
      ASSERT_LE(m.p_lowest, static_cast<double>(n - g.minor) / static_cast<double>(n) + 1e-15);
      ASSERT_LE(m.k_lowest, q * (1 + 1e-12));
      ASSERT_GE(m.k_minor, q * (1 - 1e-12));
      ASSERT_LE(m.gap, std::ldexp(1.0, -static_cast<int>(omega)) * (1 + 1e-12));
      const double mass = static_cast<double>(g.minor) * m.k_minor + static_cast<double>(n - g.minor) * m.k_lowest;
      ASSERT_NEAR(mass / k, 1.0, 1e-12) << "n=" << n << " omega=" << omega;
    }
  }
}

TEST(BalanceTheoryTest, GapClosedFormMatchesExpectedKeys) {
  for (unsigned omega = 1; omega <= 12; ++omega) {
    for (std::uint64_t n = 3; n <= 4096; ++n) {
      const auto g = tree_geometry(n);
      if (n == g.enclosing) continue;  // gap is exactly 0 there
      const double k = 7.0e6;
      const auto e = expected_keys(n, k, omega);
      const double derived = (e.minor_tree - e.lowest_level) / (k / static_cast<double>(n));
      const double closed = relative_gap(n, omega);
      // K - K' cancels near n = 2M; the absolute floor covers that rounding.
      ASSERT_NEAR(closed, derived, 1e-9 * closed + 1e-13) << "n=" << n << " omega=" << omega;
    }
  }
}

TEST(BalanceTheoryTest, GapExamples) {
  for (unsigned omega : {1U, 4U, 6U, 10U}) {
    EXPECT_DOUBLE_EQ(relative_gap(8.0, 8.0, omega), std::ldexp(1.0, -static_cast<int>(omega)));
    EXPECT_EQ(relative_gap(16.0, 8.0, omega), 0.0);
    const double x = 7.999 / 8.0;
    const double near_end = std::ldexp(1.0, -static_cast<int>(omega)) * (1 + x) * std::pow(1 - x, omega);
    EXPECT_NEAR(relative_gap(15.999, 8.0, omega), near_end, 1e-9 * near_end);
  }
  EXPECT_NEAR(relative_gap(9, 6), (1.0 / 64) * (9.0 / 8) * std::pow(7.0 / 8, 6), 1e-15);
  EXPECT_NEAR(relative_gap(9, 6), 0.0078890, 1e-6);
  EXPECT_EQ(relative_gap(std::uint64_t{16}, 6), 0.0);
  EXPECT_THROW((void)relative_gap(7.9, 8.0, 6), ModelDomainError);
  EXPECT_THROW((void)relative_gap(16.1, 8.0, 6), ModelDomainError);
}

TEST(BalanceTheoryTest, GapMonotoneAndBounded) {
  for (unsigned omega = 1; omega <= 12; ++omega) {
    const double bound = std::ldexp(1.0, -static_cast<int>(omega));
    for (std::uint64_t minor = 2; minor <= 1024; minor *= 2) {
      double prev = relative_gap(static_cast<double>(minor), static_cast<double>(minor), omega);
      ASSERT_LE(prev, bound);
      for (std::uint64_t n = minor + 1; n < 2 * minor; ++n) {
        const double gap = relative_gap(n, omega);
        ASSERT_LT(gap, prev) << "M=" << minor << " n=" << n << " omega=" << omega;
        prev = gap;
      }
    }
  }
}

TEST(BalanceTheoryTest, StdDevExamples) {
  EXPECT_EQ(std_dev(16, 16000, 6), 0.0);
  EXPECT_EQ(std_dev(8.0, 8.0, 8000, 6), 0.0);
  EXPECT_NEAR(std_dev(9, 9000, 6), 1000 * std::sqrt(0.125 * std::pow(7.0 / 16, 6)), 1e-12);
  EXPECT_NEAR(std_dev(9, 9000, 6), 29.6066, 1e-4);
  EXPECT_EQ(std_dev(9, 0, 6), 0.0);
}

// The closed form with the exponent under the root and the direct two-group
// standard deviation differ by exactly ((2M - n) / 2M)^(omega / 2).
TEST(BalanceTheoryTest, ClosedFormVersusTwoGroupVariance) {
  EXPECT_NEAR(two_group_std_dev(9, 9000, 6), 2.47927, 1e-5);
  for (unsigned omega = 1; omega <= 12; ++omega) {
    for (std::uint64_t n = 3; n <= 2048; ++n) {
      const auto g = tree_geometry(n);
      const double k = 1000.0 * static_cast<double>(n);
      const double direct = two_group_std_dev(n, k, omega);
      const double closed = std_dev(n, k, omega);
      const double m = static_cast<double>(g.minor);
      const double factor = std::pow((2 * m - static_cast<double>(n)) / (2 * m), omega / 2.0);
      const double x = (static_cast<double>(n) - m) / m;
      const double exact = 1000.0 * std::sqrt(x) * std::pow((1 - x) / 2, omega);
      if (n == g.enclosing) {
        ASSERT_NEAR(direct, 0.0, 1e-9);
        ASSERT_EQ(closed, 0.0);
        continue;
      }
      // The direct route subtracts near-equal expectations; allow for that.
      const double tolerance = 1e-9 * exact + 1e-10;
      ASSERT_NEAR(direct, exact, tolerance) << "n=" << n << " omega=" << omega;
      ASSERT_NEAR(direct, closed * factor, tolerance) << "n=" << n << " omega=" << omega;
    }
  }
}

TEST(BalanceTheoryTest, SigmaMaxExamples) {
  EXPECT_NEAR(sigma_max(1, 5).sigma, 0.0458, 0.0005);
  EXPECT_NEAR(sigma_max(1000, 5).sigma, 45.8, 0.5);
  EXPECT_NEAR(sigma_max(1, 6).n_over_minor, 8.0 / 7.0, 1e-15);
  EXPECT_EQ(sigma_max(0, 6).sigma, 0.0);
  double prev = sigma_max(1, 1).sigma;
  for (unsigned omega = 2; omega <= 40; ++omega) {
    const double s = sigma_max(1, omega).sigma;
    ASSERT_LT(s, prev);
    prev = s;
  }
}

TEST(BalanceTheoryTest, StdDevPeakMatchesGridSearch) {
  constexpr double q = 1000;
  for (unsigned omega = 1; omega <= 12; ++omega) {
    for (double minor = 8; minor <= 1024; minor *= 2) {
      const double step = minor / 1000;
      double best_n = minor;
      double best = -1;
      for (int i = 0; i <= 1000; ++i) {
        const double n = minor + i * step;
        const double s = std_dev(n, minor, q * n, omega);
        if (s > best) {
          best = s;
          best_n = n;
        }
      }
      const auto peak = sigma_max(q, omega);
      ASSERT_LE(std::abs(best_n - peak.n_over_minor * minor), step) << "omega=" << omega << " M=" << minor;
      ASSERT_NEAR(best / peak.sigma, 1.0, 1e-4);
    }
  }
}

}  // namespace
}  // namespace binomial::theory
