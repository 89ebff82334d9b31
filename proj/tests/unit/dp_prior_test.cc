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

#include "privopt/dp_prior.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "privopt/errors.h"
#include "privopt/marginal_nu.h"
#include "privopt/random.h"
#include "privopt/stats.h"

namespace privopt {
namespace {

DPFunctionSample SingleAtom(double location, double gamma_plus = 1.0) {
  StickBreakingDraw draw;
  draw.atoms = {{location, 1.0}};
  draw.residual_mass = 0.0;
  return DPFunctionSample(gamma_plus, 1.0, draw);
}

TEST(DPFunctionSampleTest, StepFunctionCdf) {
  const auto s = SingleAtom(0.4);
  EXPECT_EQ(s.Cdf(0.0), 0.0);
  EXPECT_EQ(s.Cdf(0.39), 0.0);
  EXPECT_EQ(s.Cdf(0.41), 1.0);
  EXPECT_EQ(s.minimizer(), 0.4);
}

TEST(DPFunctionSampleTest, GradientFormula) {
  StickBreakingDraw draw;
  draw.atoms = {{0.2, 0.8}, {0.7, 0.2}};
  draw.residual_mass = 0.0;
  const DPFunctionSample s(0.5, 1.0, draw);
  EXPECT_NEAR(s.Gradient(0.5), 0.3, 1e-15);  // gamma+ = 0.5, F = 0.8
  EXPECT_EQ(s.Gradient(0.0), -0.5);
  EXPECT_EQ(s.minimizer(), 0.2);
  EXPECT_EQ(s.first_stick(), 0.8);
  EXPECT_EQ(s.largest_stick(), 0.8);

  StickBreakingDraw half;
  half.atoms = {{0.3, 0.5}, {0.6, 0.5}};
  half.residual_mass = 0.0;
  const DPFunctionSample h(1.0, 1.0, half);
  EXPECT_EQ(h.Gradient(0.4), 0.0);
  EXPECT_EQ(h.minimizer(), 0.3);
}

TEST(DPFunctionSampleTest, ValueIntegratesGradient) {
  Rng rng = MakeStream(2, 0);
  const auto s = SampleStickBreaking(2.0, rng);
  // Trapezoid integration of the gradient on a fine grid.
  const int n = 200000;
  double integral = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = static_cast<double>(i) / n, b = static_cast<double>(i + 1) / n;
    integral += 0.5 * (s.Gradient(a) + s.Gradient(b)) / n;
    if ((i + 1) % 50000 == 0) EXPECT_NEAR(s.Value(b), integral, 2e-5);
  }
  // The minimizer is a global minimizer of the value on a grid.
  const double best = s.Value(s.minimizer());
  for (int i = 0; i <= 1000; ++i) EXPECT_GE(s.Value(i / 1000.0), best - 1e-12);
}

TEST(SampleStickBreakingTest, Invariants) {
  for (double alpha : {0.1, 1.0, 5.0}) {
    for (int i = 0; i < 200; ++i) {
      Rng rng = MakeStream(7, i);
      const auto s = SampleStickBreaking(alpha, rng);
      double total = 0.0, prev = -1.0;
      for (const Atom& a : s.atoms()) {
        EXPECT_GT(a.weight, 0.0);
        EXPECT_GE(a.location, prev);
        prev = a.location;
        total += a.weight;
      }
      EXPECT_LT(s.residual_mass(), 1e-12);
      EXPECT_NEAR(total + s.residual_mass(), 1.0, 1e-12);
      EXPECT_NEAR(s.Cdf(1.0), 1.0 - s.residual_mass(), 1e-12);
      EXPECT_GT(s.gamma_plus(), 0.0);
      EXPECT_LE(s.gamma_plus(), 1.0);
      // Median: first location where the cumulative weight reaches 1/2.
      EXPECT_GE(s.Cdf(s.minimizer()), 0.5);
      EXPECT_LT(s.mass_below_minimizer(), 0.5);
      for (double u : {1e-9, 1e-4, 0.01, 0.1}) {
        if (s.minimizer() - u >= 0.0) EXPECT_LE(s.Gradient(s.minimizer() - u), 0.0);
        if (s.minimizer() + u <= 1.0) EXPECT_GE(s.Gradient(s.minimizer() + u), 0.0);
      }
      double last = -2.0;
      for (int k = 0; k <= 100; ++k) {
        const double g = s.Gradient(k / 100.0);
        EXPECT_LE(last, g);
        last = g;
      }
    }
  }
}

TEST(SampleStickBreakingTest, TinyConcentrationGivesOneAtom) {
  Rng rng = MakeStream(9, 0);
  const auto s = SampleStickBreaking(1e-9, rng);
  EXPECT_GE(s.first_stick(), 1.0 - 1e-12);
  EXPECT_EQ(s.atoms().size(), 1u);
}

TEST(SampleStickBreakingTest, RejectsBadArguments) {
  Rng rng = MakeStream(0, 0);
  EXPECT_THROW(SampleStickBreaking(0.0, rng), DomainError);
  EXPECT_THROW(SampleStickBreaking(-1.0, rng), DomainError);
  PriorOptions loose;
  loose.truncation = 1e-3;
  EXPECT_THROW(SampleStickBreaking(1.0, rng, loose), DomainError);
}

TEST(SampleStickBreakingTest, CustomGradientScaleLaw) {
  PriorOptions options;
  options.gradient_scale_quantile = [](double u) { return 0.5 + 0.5 * u; };
  for (int i = 0; i < 100; ++i) {
    Rng rng = MakeStream(4, i);
    const auto s = SampleStickBreaking(1.0, rng, options);
    EXPECT_GE(s.gamma_plus(), 0.5);
  }
}

TEST(SampleStickBreakingTest, FirstStickMomentsAtAlphaOne) {
  const int n = 100000;
  RunningStats first;
  int64_t over = 0, largest_over = 0;
  for (int i = 0; i < n; ++i) {
    Rng rng = MakeStream(21, i);
    const auto s = SampleStickBreaking(1.0, rng);
    first.Add(s.first_stick());
    over += s.first_stick() > 0.5;
    largest_over += s.largest_stick() > 0.5;
  }
  EXPECT_NEAR(first.mean(), 0.5, 0.005);
  const double se = BinomialStandardError(0.5, n);
  EXPECT_NEAR(static_cast<double>(over) / n, 0.5, 4 * se);
  EXPECT_GE(largest_over, over);
}

TEST(SampleStickBreakingTest, Reproducible) {
  Rng a = MakeStream(99, 3), b = MakeStream(99, 3);
  const auto s = SampleStickBreaking(1.0, a), t = SampleStickBreaking(1.0, b);
  ASSERT_EQ(s.atoms().size(), t.atoms().size());
  EXPECT_EQ(s.minimizer(), t.minimizer());
  EXPECT_EQ(s.gamma_plus(), t.gamma_plus());
}

TEST(SampleDirichletTest, MeansAndNormalization) {
  const std::vector<double> shape = {1.0, 2.0, 3.0};
  Rng rng = MakeStream(8, 0);
  std::vector<RunningStats> stats(3);
  for (int i = 0; i < 40000; ++i) {
    const auto w = SampleDirichlet(shape, rng);
    EXPECT_NEAR(w[0] + w[1] + w[2], 1.0, 1e-12);
    for (int c = 0; c < 3; ++c) stats[c].Add(w[c]);
  }
  for (int c = 0; c < 3; ++c) {
    EXPECT_NEAR(stats[c].mean(), shape[c] / 6.0, 4 * stats[c].standard_error());
  }
}

}  // namespace
}  // namespace privopt
