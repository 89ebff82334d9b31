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

#include "privopt/learner_minimax.h"

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "privopt/convex_fn.h"
#include "privopt/errors.h"
#include "privopt/random.h"

namespace privopt {
namespace {

constexpr double P(int e) { return e >= 0 ? static_cast<double>(1 << e) : 1.0 / (1 << -e); }

// Exhaustive reference for the grid-regime K.
int SmallestK(double delta, int L) {
  for (int K = 0; K < L; ++K) {
    const double len = std::pow(2.0, -K) / (L - K);
    if (len >= delta && len <= 2 * delta) return K;
  }
  return -1;
}

TEST(SolveGridKTest, SpecExamples) {
  EXPECT_EQ(SolveGridK(0.1, 4), 1);
  EXPECT_EQ(SolveGridK(0.3, 2), 0);
  EXPECT_THROW(SolveGridK(P(-5), 4), InfeasibleError);
}

TEST(SolveGridKTest, MatchesExhaustiveSearch) {
  Rng rng = MakeStream(31, 0);
  for (int i = 0; i < 2000; ++i) {
    const int L = 1 + static_cast<int>(Uniform01(rng) * 12);
    const double lo = std::pow(2.0, -L);
    const double delta = lo + (1.0 / L - lo) * Uniform01(rng);
    if (!(delta > lo)) continue;
    const int expected = SmallestK(delta, L);
    ASSERT_GE(expected, 0) << "a solution always exists for delta > 2^-L";
    const int K = SolveGridK(delta, L);
    EXPECT_EQ(K, expected) << delta << " " << L;
    const double len = GridLength(K, L);
    EXPECT_GE(len, delta * (1 - 1e-12));
    EXPECT_LE(len, 2 * delta * (1 + 1e-12));
  }
}

TEST(MinimaxConfigTest, RegimeChecks) {
  EXPECT_NO_THROW((MinimaxConfig{P(-10), P(-6), 4}.Validate()));
  EXPECT_THROW((MinimaxConfig{P(-5), P(-6), 4}.Validate()), DomainError);
  EXPECT_THROW((MinimaxConfig{P(-10), 0.3, 4}.Validate()), DomainError);
  EXPECT_THROW((MinimaxConfig{P(-10), P(-6), 0}.Validate()), DomainError);
  try {
    MinimaxConfig{P(-10), 0.3, 4}.Validate();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("delta <= 1/L"), std::string::npos);
  }
}

TEST(RunMinimaxTest, BisectionRegimeCountIsExact) {
  const MinimaxConfig cfg{P(-10), P(-6), 4};
  const auto f = MakeSandwichFunction(0.77);
  const auto run = RunMinimax(cfg, f.AsOracle());
  EXPECT_EQ(run.transcript.ReportedCount(), 14);
  EXPECT_EQ(static_cast<int64_t>(run.transcript.size()), 14);
  EXPECT_EQ(MinimaxQueryCount(cfg), 14);
  EXPECT_LE(std::abs(run.estimate - 0.77), cfg.eps / 2);
}

TEST(RunMinimaxTest, GridRegimeCountWithinBound) {
  const MinimaxConfig cfg{P(-10), P(-3), 4};
  for (double x : {0.001, 0.2, 0.5004, 0.77, 0.999}) {
    const auto run = RunMinimax(cfg, MakeSandwichFunction(x).AsOracle());
    EXPECT_LE(run.transcript.ReportedCount(), 15);
    EXPECT_EQ(run.transcript.ReportedCount(), MinimaxQueryCount(cfg));
    EXPECT_EQ(run.transcript.CountPhase(QueryPhase::kTrivial), 1);
    EXPECT_EQ(run.transcript.queries()[0], 0.0);
    EXPECT_LE(std::abs(run.estimate - x), cfg.eps / 2);
  }
}

TEST(RunMinimaxTest, CorrectFirstGuessTakesRightHalves) {
  const MinimaxConfig cfg{P(-10), P(-6), 4};
  const double x = 0.5 + 0.3 * cfg.eps;
  const auto run = RunMinimax(cfg, MakeSandwichFunction(x).AsOracle());
  const auto q = run.transcript.queries();
  const std::vector<double> guesses = {0.5, 0.75, 0.875, 0.9375};
  for (int g = 0; g < 4; ++g) {
    EXPECT_EQ(q[2 * g], guesses[g]);
    EXPECT_EQ(q[2 * g + 1], guesses[g] + cfg.eps);
  }
  for (size_t i = 8; i < q.size(); ++i) {
    EXPECT_EQ(q[i], 1.0);
    EXPECT_EQ(run.transcript.phases()[i], QueryPhase::kFill);
  }
  EXPECT_LE(std::abs(run.estimate - x), cfg.eps / 2);
}

TEST(PlantedCandidatesTest, BisectionRegime) {
  const MinimaxConfig cfg{P(-10), P(-4), 3};
  const auto c = ExtractPlantedCandidates(cfg);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0], (Interval{0.5, 0.5 + cfg.eps}));
  EXPECT_EQ(c[1], (Interval{0.75, 0.75 + cfg.eps}));
  EXPECT_EQ(c[2], (Interval{0.875, 0.875 + cfg.eps}));
}

TEST(PlantedCandidatesTest, GridRegime) {
  const MinimaxConfig cfg{P(-10), P(-3), 4};
  ASSERT_EQ(SolveGridK(cfg.delta, cfg.L), 0);
  const auto c = ExtractPlantedCandidates(cfg);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0].lo, 0.0);
  EXPECT_EQ(c[1].lo, 0.25);
  EXPECT_EQ(c[2].lo, 0.5);
  EXPECT_EQ(c[3].lo, 0.75);
  const auto d = ExtractPlantedCandidates({P(-10), 0.1, 4});  // K = 1
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(d[1].lo, 0.5);
  EXPECT_NEAR(d[2].lo, 0.5 + 0.5 / 3, 1e-15);
  EXPECT_NEAR(d[3].lo, 0.5 + 1.0 / 3, 1e-15);
}

struct Case {
  double eps, delta;
  int L;
};

std::vector<Case> Configs() {
  return {{P(-10), P(-6), 4}, {P(-10), P(-3), 4}, {P(-12), P(-9), 8}, {P(-8), 0.1, 4},
          {P(-10), 0.3, 2},   {P(-10), P(-2), 2}, {P(-9), P(-3), 1},  {0.003, 0.011, 6},
          {1e-4, 0.07, 9},    {P(-14), P(-10), 8}};
}

TEST(PlantedCandidatesTest, SeparatedAndTranscriptInvariant) {
  for (const Case& k : Configs()) {
    const MinimaxConfig cfg{k.eps, k.delta, k.L};
    const auto cands = ExtractPlantedCandidates(cfg);
    ASSERT_EQ(static_cast<int>(cands.size()), cfg.L);
    for (size_t i = 1; i < cands.size(); ++i) {
      EXPECT_GE(cands[i].lo - cands[i - 1].lo, cfg.delta * (1 - 1e-12));
    }
    std::string reference;
    for (size_t i = 0; i < cands.size(); ++i) {
      for (double u : {0.1, 0.5, 0.9}) {
        const double x = cands[i].lo + u * cfg.eps;
        const auto run = RunMinimax(cfg, MakeSandwichFunction(x, 0.7).AsOracle());
        EXPECT_LE(std::abs(run.estimate - x), cfg.eps / 2);
        EXPECT_TRUE(run.transcript.CountPhase(QueryPhase::kBisect) == 0);
        const std::string bytes = run.transcript.ToJsonLines();
        if (reference.empty()) reference = bytes;
        EXPECT_EQ(bytes, reference) << "candidate " << i;
      }
    }
  }
}

TEST(RunMinimaxProperty, AccurateWithExactCounts) {
  Rng rng = MakeStream(41, 0);
  for (const Case& k : Configs()) {
    const MinimaxConfig cfg{k.eps, k.delta, k.L};
    const int64_t expected = MinimaxQueryCount(cfg);
    for (int i = 0; i < 400; ++i) {
      double x = 0.0;
      while (x == 0.0) x = Uniform01(rng);
      const auto rule = static_cast<SubgradientRule>(i % 3);
      const auto f = MakeSandwichFunction(x, 0.5 + Uniform01(rng));
      const auto run = RunMinimax(cfg, f.AsOracle(rule));
      ASSERT_LE(std::abs(run.estimate - x), cfg.eps / 2) << x;
      EXPECT_EQ(run.transcript.ReportedCount(), expected);
    }
  }
}

// Three-segment truths whose kink lands exactly on a query point.
TEST(RunMinimaxProperty, KinksOnQueryPoints) {
  const MinimaxConfig cfg{P(-10), P(-6), 4};
  for (double x : {0.5, 0.75, 0.5 + P(-10), 0.25, 0.375}) {
    for (int rule = 0; rule < 3; ++rule) {
      const PiecewiseLinearConvex f({0.0, x / 2, x, 1.0}, {-2.0, -1.0, 1.0});
      const auto run = RunMinimax(cfg, f.AsOracle(static_cast<SubgradientRule>(rule)));
      EXPECT_LE(std::abs(run.estimate - x), cfg.eps / 2) << x << " rule " << rule;
    }
  }
}

TEST(RunMinimaxTest, BudgetGuard) {
  const MinimaxConfig cfg{P(-10), P(-6), 4};
  EXPECT_THROW(RunMinimax(cfg, MakeSandwichFunction(0.3).AsOracle(), 0, 5),
               BudgetExceededError);
}

TEST(RunMinimaxTest, TranscriptSerialization) {
  const MinimaxConfig cfg{P(-4), P(-2), 2};
  const auto run = RunMinimax(cfg, MakeSandwichFunction(0.3).AsOracle(), 77);
  EXPECT_EQ(run.transcript.seed(), 77u);
  const std::string lines = run.transcript.ToJsonLines(true);
  EXPECT_EQ(lines.rfind("{\"i\":0,\"phase\":\"guess\",\"q\":0.5}\n", 0), 0u);
  EXPECT_NE(lines.find("learner_private"), std::string::npos);
  EXPECT_EQ(run.transcript.ToJsonLines().find("learner_private"), std::string::npos);
}

TEST(MinimaxSearchTest, StepwiseMatchesRunMinimax) {
  const MinimaxConfig cfg{P(-10), 0.1, 4};
  const auto f = MakeSandwichFunction(0.61);
  MinimaxSearch search(cfg);
  std::vector<double> queries;
  while (!search.done()) {
    queries.push_back(search.query());
    search.Observe(f.Subgradient(search.query()));
  }
  const auto run = RunMinimax(cfg, f.AsOracle());
  EXPECT_EQ(queries, std::vector<double>(run.transcript.queries().begin(),
                                         run.transcript.queries().end()));
  EXPECT_EQ(search.Estimate(), run.estimate);
  EXPECT_THROW(search.query(), DomainError);
}

}  // namespace
}  // namespace privopt
