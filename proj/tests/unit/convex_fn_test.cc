// Copyright 2026 The privopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "privopt/convex_fn.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "privopt/errors.h"
#include "privopt/random.h"

namespace privopt {
namespace {

PiecewiseLinearConvex AbsAt03() { return PiecewiseLinearConvex({0.0, 0.3, 1.0}, {-1.0, 1.0}); }

TEST(SubgradientTest, InteriorSegmentsAndKink) {
  const auto f = AbsAt03();
  EXPECT_EQ(f.Subgradient(0.5), 1.0);
  EXPECT_EQ(f.Subgradient(0.1), -1.0);
  EXPECT_EQ(f.Subgradient(0.3), 0.0);
  EXPECT_EQ(f.Subgradient(0.3, SubgradientRule::kLeft), -1.0);
  EXPECT_EQ(f.Subgradient(0.3, SubgradientRule::kRight), 1.0);
  EXPECT_EQ(f.Subgradient(0.0), -1.0);
  EXPECT_EQ(f.Subgradient(1.0), 1.0);
}

TEST(SubgradientTest, RejectsQueriesOutsideUnitInterval) {
  const auto f = AbsAt03();
  EXPECT_THROW(f.Subgradient(-1e-9), DomainError);
  EXPECT_THROW(f.Subgradient(1.5), DomainError);
  EXPECT_THROW(f.Subgradient(std::nan("")), DomainError);
}

TEST(PiecewiseLinearConvexTest, ValidatesRepresentation) {
  EXPECT_THROW(PiecewiseLinearConvex({0.0, 1.0}, {1.0, 2.0}), DomainError);
  EXPECT_THROW(PiecewiseLinearConvex({0.1, 1.0}, {1.0}), DomainError);
  EXPECT_THROW(PiecewiseLinearConvex({0.0, 0.5, 0.5, 1.0}, {-1, 1, 2}), DomainError);
  EXPECT_THROW(PiecewiseLinearConvex({0.0, 0.5, 1.0}, {1.0, -1.0}), DomainError);
  EXPECT_THROW(PiecewiseLinearConvex({0.0, 0.5, 1.0}, {-1.0, 0.0}), DomainError);
}

TEST(PiecewiseLinearConvexTest, MinimizerAndValue) {
  const PiecewiseLinearConvex f({0.0, 0.2, 0.6, 1.0}, {-2.0, -0.5, 3.0});
  EXPECT_EQ(f.minimizer(), 0.6);
  EXPECT_NEAR(f.Value(0.2), -0.4, 1e-15);
  EXPECT_NEAR(f.Value(0.6), -0.6, 1e-15);
  EXPECT_NEAR(f.Value(1.0), 0.6, 1e-15);
  // Monotone-to-the-right: minimizer at 0 when every slope is positive.
  EXPECT_EQ(PiecewiseLinearConvex({0.0, 1.0}, {1.0}).minimizer(), 0.0);
}

TEST(SandwichTest, BuildsVShape) {
  const auto f = MakeSandwichFunction(0.3, 1.0);
  EXPECT_EQ(std::vector<double>(f.breakpoints().begin(), f.breakpoints().end()),
            (std::vector<double>{0.0, 0.3, 1.0}));
  EXPECT_EQ(std::vector<double>(f.slopes().begin(), f.slopes().end()),
            (std::vector<double>{-1.0, 1.0}));
  const auto g = MakeSandwichFunction(0.5, 2.0);
  EXPECT_EQ(g.slopes()[0], -2.0);
  EXPECT_EQ(g.slopes()[1], 2.0);
  EXPECT_EQ(g.minimizer(), 0.5);
  EXPECT_THROW(MakeSandwichFunction(0.0, 1.0), DomainError);
  EXPECT_THROW(MakeSandwichFunction(1.0, 1.0), DomainError);
}

TEST(SubgradientProperty, MonotoneAndSignedAroundMinimizer) {
  Rng rng = MakeStream(11, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const int segments = 2 + static_cast<int>(Uniform01(rng) * 6);
    std::vector<double> cuts;
    for (int i = 1; i < segments; ++i) cuts.push_back(Uniform01(rng));
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> bp = {0.0};
    for (double c : cuts) {
      if (c > bp.back() && c < 1.0) bp.push_back(c);
    }
    bp.push_back(1.0);
    const int n = static_cast<int>(bp.size()) - 1;
    if (n < 2) continue;
    const int flip = 1 + static_cast<int>(Uniform01(rng) * (n - 1));
    std::vector<double> slopes;
    for (int i = 0; i < n; ++i) {
      const double magnitude = 0.1 + Uniform01(rng);
      slopes.push_back(i < flip ? -magnitude : magnitude);
    }
    std::sort(slopes.begin(), slopes.end());
    const PiecewiseLinearConvex f(bp, slopes);
    const double x_star = f.minimizer();
    double prev = -INFINITY;
    for (int k = 0; k <= 400; ++k) {
      const double q = k / 400.0;
      const double g = f.Subgradient(q);
      EXPECT_LE(prev, g);
      prev = g;
      const bool at_breakpoint =
          std::find(bp.begin(), bp.end(), q) != bp.end();
      if (!at_breakpoint && q < x_star) EXPECT_LT(g, 0.0);
      if (!at_breakpoint && q > x_star) EXPECT_GT(g, 0.0);
    }
  }
}

TEST(ResistingOracleTest, FirstQueryAtMidpointKeepsRightHalf) {
  ResistingOracle oracle({0.0, 1.0}, 1e-3);
  EXPECT_LT(oracle.Respond(0.5), 0.0);
  EXPECT_EQ(oracle.active(), (Interval{0.5, 1.0}));
  EXPECT_LT(oracle.Respond(0.75), 0.0);
  EXPECT_EQ(oracle.active(), (Interval{0.75, 1.0}));
}

TEST(ResistingOracleTest, OffIntervalQueryIsNegativeBetweenNeighbours) {
  ResistingOracle oracle({0.0, 1.0}, 1e-3);
  const double at_half = oracle.Respond(0.5);
  const double r = oracle.Respond(0.2);
  EXPECT_LT(r, 0.0);
  EXPECT_GT(r, -1.0);
  EXPECT_LT(r, at_half);
  EXPECT_EQ(oracle.active(), (Interval{0.5, 1.0}));
  // Repeated query returns the cached answer.
  EXPECT_EQ(oracle.Respond(0.2), r);
}

TEST(ResistingOracleTest, KeepsLongerSide) {
  ResistingOracle oracle({0.0, 1.0}, 1e-3);
  EXPECT_GT(oracle.Respond(0.8), 0.0);
  EXPECT_EQ(oracle.active(), (Interval{0.0, 0.8}));
  EXPECT_LT(oracle.Respond(0.1), 0.0);
  EXPECT_EQ(oracle.active(), (Interval{0.1, 0.8}));
}

// Replays a random query sequence and checks every state invariant.
TEST(ResistingOracleProperty, ConsistentWithRealizedFunction) {
  Rng rng = MakeStream(5, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = 0.5 * Uniform01(rng), b = 0.5 + 0.5 * Uniform01(rng);
    ResistingOracle oracle({a, b}, 1e-4);
    for (int step = 0; step < 25; ++step) {
      const double before = oracle.active().length();
      double q;
      if (Uniform01(rng) < 0.6) {
        q = oracle.active().lo + Uniform01(rng) * oracle.active().length();
      } else {
        q = Uniform01(rng);
      }
      const bool in_active = oracle.active().ContainsInterior(q);
      oracle.Respond(q);
      if (in_active) EXPECT_GE(oracle.active().length(), 0.5 * before);
    }
    const auto& answered = oracle.answered();
    double prev = -INFINITY;
    for (const auto& [x, v] : answered) {
      EXPECT_LT(prev, v);
      prev = v;
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
      if (x <= oracle.active().lo) EXPECT_LT(v, 0.0);
      if (x >= oracle.active().hi) EXPECT_GT(v, 0.0);
    }
    const PiecewiseLinearConvex g = oracle.Realize();
    EXPECT_TRUE(oracle.active().ContainsInterior(g.minimizer()));
    for (const auto& [x, v] : answered) EXPECT_EQ(g.Subgradient(x), v) << "x=" << x;
  }
}

TEST(BisectionStepsTest, CountsHalvings) {
  EXPECT_EQ(BisectionSteps(1.0, std::ldexp(1.0, -6)), 6);
  EXPECT_EQ(BisectionSteps(0.5, std::ldexp(1.0, -6)), 5);
  EXPECT_EQ(BisectionSteps(0.3, 0.1), 2);
  EXPECT_EQ(BisectionSteps(0.1, 0.1), 0);
}

TEST(ResistingCountTest, SpecExamples) {
  const double eps = std::ldexp(1.0, -6);
  EXPECT_GE(ResistingCount(PlainBisectionStrategy(eps), {0.0, 1.0}, eps).host_queries, 6);
  EXPECT_GE(ResistingCount(PlainBisectionStrategy(eps), {0.0, 0.5}, eps).host_queries, 5);
  EXPECT_GE(ResistingCount(PlainBisectionStrategy(0.6), {0.0, 0.5}, 0.6).host_queries, 0);
}

TEST(ResistingCountTest, BudgetGuard) {
  const Strategy runaway = [](const GradientOracle& oracle) {
    for (;;) oracle(0.5);
    return 0.5;
  };
  EXPECT_THROW(ResistingCount(runaway, {0.0, 1.0}, 0.01, 50), BudgetExceededError);
}

TEST(ResistingCountProperty, LowerBoundOnRandomConfigurations) {
  Rng rng = MakeStream(17, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const double lo = 0.9 * Uniform01(rng);
    const double hi = lo + (1.0 - lo) * (0.05 + 0.95 * Uniform01(rng));
    const double eps = std::ldexp(1.0, -(4 + static_cast<int>(Uniform01(rng) * 12)));
    const auto result = ResistingCount(PlainBisectionStrategy(eps), {lo, hi}, eps);
    const double need = std::ceil(std::log2((hi - lo) / eps));
    EXPECT_GE(result.host_queries, std::max(0.0, need)) << lo << " " << hi << " " << eps;
  }
}

}  // namespace
}  // namespace privopt
