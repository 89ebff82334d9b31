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

// Small statistics toolkit for the Monte Carlo checks: goodness-of-fit
// tests and binomial confidence intervals.

#ifndef PRIVOPT_STATS_H_
#define PRIVOPT_STATS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "privopt/interval.h"

namespace privopt {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int dof = 0;  // chi-square tests only
};

// Survival function of the Kolmogorov distribution,
// Q(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2).
double KolmogorovSurvival(double lambda);

// One-sample Kolmogorov-Smirnov test of `samples` against `cdf`. For a law
// with atoms pass its left limit `cdf_left(x) = P{X < x}`; the statistic is
// then the exact sup distance and the p-value is conservative.
TestResult KsOneSample(std::vector<double> samples,
                       const std::function<double(double)>& cdf,
                       const std::function<double(double)>& cdf_left = nullptr);

// Two-sample Kolmogorov-Smirnov test.
TestResult KsTwoSample(std::vector<double> a, std::vector<double> b);

// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double ChiSquareSurvival(double statistic, int dof);

// Chi-square goodness of fit of `counts` against the uniform distribution.
TestResult ChiSquareUniform(std::span<const int64_t> counts);

// Chi-square test of independence on a rows x cols contingency table.
// Empty rows and columns are dropped before counting degrees of freedom.
TestResult ChiSquareIndependence(
    const std::vector<std::vector<int64_t>>& table);

// Wilson score interval for a binomial proportion; z defaults to the
// two-sided 95% quantile.
Interval WilsonInterval(int64_t successes, int64_t trials,
                        double z = 1.959963984540054);

// Standard error sqrt(p (1 - p) / n).
double BinomialStandardError(double p, int64_t trials);

// Streaming mean / variance (Welford).
class RunningStats {
 public:
  void Add(double x);
  int64_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const;
  double standard_error() const;
  double min() const { return min_; }
  double max() const { return max_; }

 private:
  int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

}  // namespace privopt

#endif  // PRIVOPT_STATS_H_
