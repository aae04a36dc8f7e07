// Copyright 2026 The pacp-sim Authors
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

#include "pacp/lp.hpp"

#include <vector>

#include "gtest/gtest.h"
#include "pacp/rng.hpp"

namespace pacp {
namespace {

TEST(SimplexTest, SingleVariable) {
  const lp::Result r = lp::maximize({1.0}, {{1.0}, {1.0}}, {10.0, 8.0});
  ASSERT_EQ(r.status, lp::Status::kOptimal);
  EXPECT_DOUBLE_EQ(r.x[0], 8.0);
  EXPECT_DOUBLE_EQ(r.objective, 8.0);
}

TEST(SimplexTest, BudgetToLargerCoefficient) {
  const lp::Result r = lp::maximize(
      {2.0, 1.0}, {{1, 0}, {0, 1}, {1, 1}}, {10.0, 10.0, 8.0});
  EXPECT_DOUBLE_EQ(r.x[0], 8.0);
  EXPECT_DOUBLE_EQ(r.x[1], 0.0);
}

TEST(SimplexTest, ZeroObjectiveStaysAtOrigin) {
  const lp::Result r = lp::maximize({0.0, 0.0}, {{1, 1}}, {5.0});
  EXPECT_EQ(r.x, (std::vector<double>{0.0, 0.0}));
}

TEST(SimplexTest, Unbounded) {
  const lp::Result r = lp::maximize({1.0, 1.0}, {{1.0, -1.0}}, {1.0});
  EXPECT_EQ(r.status, lp::Status::kUnbounded);
}

TEST(SimplexTest, RejectsBadShapes) {
  EXPECT_THROW(lp::maximize({1.0}, {{1.0, 2.0}}, {1.0}),
               std::invalid_argument);
  EXPECT_THROW(lp::maximize({1.0}, {{1.0}}, {-1.0}), std::invalid_argument);
  EXPECT_THROW(lp::maximize({1.0}, {}, {1.0}), std::invalid_argument);
}

TEST(SimplexTest, DegenerateVertex) {
  // Several constraints tight at the optimum.
  const lp::Result r = lp::maximize(
      {1, 1}, {{1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2}}, {1, 1, 2, 3, 3});
  EXPECT_NEAR(r.objective, 2.0, 1e-12);
}

// Box plus one budget row, as in the per-receiver rate problem; compared
// with a grid search over the box.
TEST(SimplexTest, MatchesGridSearch) {
  Rng rng(17);
  for (int k = 0; k < 60; ++k) {
    const std::size_t m = 1 + rng.below(3);
    std::vector<double> c(m), cap(m);
    std::vector<std::vector<double>> a(m + 1, std::vector<double>(m, 0.0));
    std::vector<double> b(m + 1);
    for (std::size_t q = 0; q < m; ++q) {
      c[q] = rng.uniform(0, 3);
      cap[q] = 0.5 * (1 + rng.below(20));
      a[q][q] = 1.0;
      a[m][q] = 1.0;
      b[q] = cap[q];
    }
    b[m] = 0.5 * rng.below(30);
    const lp::Result r = lp::maximize(c, a, b);
    ASSERT_EQ(r.status, lp::Status::kOptimal);

    const double step = 0.5;
    double best = 0.0;
    std::vector<int> idx(m, 0);
    for (;;) {
      double load = 0.0, val = 0.0;
      for (std::size_t q = 0; q < m; ++q) {
        load += idx[q] * step;
        val += c[q] * idx[q] * step;
      }
      if (load <= b[m] + 1e-12) best = std::max(best, val);
      std::size_t q = 0;
      while (q < m && (idx[q] + 1) * step > cap[q] + 1e-12) idx[q++] = 0;
      if (q == m) break;
      ++idx[q];
    }
    // All data sit on the grid, so the grid contains an optimal vertex.
    EXPECT_NEAR(r.objective, best, 1e-9) << k;
    double load = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
      EXPECT_GE(r.x[q], 0.0);
      EXPECT_LE(r.x[q], cap[q] + 1e-12);
      load += r.x[q];
    }
    EXPECT_LE(load, b[m] + 1e-9);
  }
}

}  // namespace
}  // namespace pacp
