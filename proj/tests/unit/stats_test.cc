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

#include "privopt/stats.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "privopt/random.h"

namespace privopt {
namespace {

TEST(KolmogorovTest, KnownQuantiles) {
  // Classical critical values of the limiting distribution.
  EXPECT_NEAR(KolmogorovSurvival(1.3581), 0.05, 1e-4);
  EXPECT_NEAR(KolmogorovSurvival(1.6276), 0.01, 1e-4);
  EXPECT_NEAR(KolmogorovSurvival(1.9495), 0.001, 1e-5);
  EXPECT_EQ(KolmogorovSurvival(0.0), 1.0);
}

TEST(KsTest, AcceptsUniformSamplesAndRejectsShifted) {
  Rng rng = MakeStream(1, 0);
  std::vector<double> u(20000), v(20000);
  for (auto& x : u) x = Uniform01(rng);
  for (auto& x : v) x = Uniform01(rng);
  const auto identity = [](double x) { return std::clamp(x, 0.0, 1.0); };
  EXPECT_GT(KsOneSample(u, identity).p_value, 1e-3);
  EXPECT_GT(KsTwoSample(u, v).p_value, 1e-3);
  std::vector<double> shifted = u;
  for (auto& x : shifted) x = x * x;
  EXPECT_LT(KsOneSample(shifted, identity).p_value, 1e-6);
  EXPECT_LT(KsTwoSample(u, shifted).p_value, 1e-6);
}

// Half the mass sits in an atom at 0, the rest is uniform on (0, 1].
TEST(KsTest, LeftLimitHandlesAtoms) {
  Rng rng = MakeStream(2, 0);
  std::vector<double> xs(20000);
  for (auto& x : xs) x = Uniform01(rng) < 0.5 ? 0.0 : Uniform01(rng);
  const auto cdf = [](double x) { return x < 0 ? 0.0 : 0.5 + 0.5 * std::min(x, 1.0); };
  const auto left = [](double x) { return x <= 0 ? 0.0 : 0.5 + 0.5 * std::min(x, 1.0); };
  const auto with_left = KsOneSample(xs, cdf, left);
  EXPECT_GT(with_left.p_value, 1e-3);
  EXPECT_LT(with_left.statistic, 0.02);
  // Ignoring the atom's left limit inflates the statistic to the atom size.
  EXPECT_NEAR(KsOneSample(xs, cdf).statistic, 0.5, 1e-12);
  // A wrong atom size is still rejected.
  const auto heavy = [](double x) { return x < 0 ? 0.0 : 0.6 + 0.4 * std::min(x, 1.0); };
  const auto heavy_left = [](double x) { return x <= 0 ? 0.0 : 0.6 + 0.4 * std::min(x, 1.0); };
  EXPECT_LT(KsOneSample(xs, heavy, heavy_left).p_value, 1e-9);
}

TEST(ChiSquareTest, SurvivalMatchesBoost) {
  for (int dof : {1, 3, 7, 20}) {
    boost::math::chi_squared dist(dof);
    for (double x : {0.5, 3.0, 11.0, 40.0}) {
      EXPECT_NEAR(ChiSquareSurvival(x, dof), boost::math::cdf(boost::math::complement(dist, x)),
                  1e-12);
    }
  }
}

TEST(ChiSquareTest, UniformAndIndependence) {
  const std::vector<int64_t> flat = {250, 250, 250, 250};
  EXPECT_EQ(ChiSquareUniform(flat).statistic, 0.0);
  EXPECT_EQ(ChiSquareUniform(flat).dof, 3);
  const std::vector<int64_t> skew = {400, 200, 200, 200};
  EXPECT_NEAR(ChiSquareUniform(skew).statistic, 120.0, 1e-12);
  EXPECT_LT(ChiSquareUniform(skew).p_value, 1e-20);
  // Product table: no dependence at all.
  const std::vector<std::vector<int64_t>> product = {{10, 20, 30}, {20, 40, 60}, {0, 0, 0}};
  const TestResult r = ChiSquareIndependence(product);
  EXPECT_NEAR(r.statistic, 0.0, 1e-12);
  EXPECT_EQ(r.dof, 2);
  const std::vector<std::vector<int64_t>> dependent = {{90, 10}, {10, 90}};
  EXPECT_LT(ChiSquareIndependence(dependent).p_value, 1e-20);
}

// The Wilson interval's coverage is checked against exact binomial
// probabilities for every n <= 20.
TEST(WilsonTest, CoverageAgainstExactBinomial) {
  for (int n = 1; n <= 20; ++n) {
    for (int k = 0; k <= n; ++k) {
      const Interval ci = WilsonInterval(k, n);
      EXPECT_LE(ci.lo, static_cast<double>(k) / n + 1e-15);
      EXPECT_GE(ci.hi, static_cast<double>(k) / n - 1e-15);
      EXPECT_GE(ci.lo, 0.0);
      EXPECT_LE(ci.hi, 1.0);
    }
    // Average coverage over a grid of p stays near the nominal 95%.
    double coverage_sum = 0.0;
    int grid = 0;
    for (double p = 0.05; p < 0.951; p += 0.05, ++grid) {
      boost::math::binomial dist(n, p);
      double coverage = 0.0;
      for (int k = 0; k <= n; ++k) {
        const Interval ci = WilsonInterval(k, n);
        if (ci.lo <= p && p <= ci.hi) coverage += boost::math::pdf(dist, k);
      }
      coverage_sum += coverage;
    }
    EXPECT_GT(coverage_sum / grid, 0.92) << n;
  }
  // Closed form check at one point: k = 5, n = 10.
  const double z = 1.959963984540054, p = 0.5, n = 10;
  const double center = (p + z * z / (2 * n)) / (1 + z * z / n);
  const double half = z / (1 + z * z / n) * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  EXPECT_NEAR(WilsonInterval(5, 10).lo, center - half, 1e-14);
  EXPECT_NEAR(WilsonInterval(5, 10).hi, center + half, 1e-14);
}

TEST(RunningStatsTest, MeanVarianceExtremes) {
  RunningStats s;
  for (double x : {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) s.Add(x);
  EXPECT_EQ(s.count(), 8);
  EXPECT_DOUBLE_EQ(s.mean(), 5.0);
  EXPECT_DOUBLE_EQ(s.variance(), 32.0 / 7.0);
  EXPECT_DOUBLE_EQ(s.standard_error(), std::sqrt(32.0 / 7.0 / 8.0));
  EXPECT_EQ(s.min(), 2.0);
  EXPECT_EQ(s.max(), 9.0);
}

}  // namespace
}  // namespace privopt
