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

// Numerical and statistical checks of the Dirichlet-process prior and of
// the density bounds on the law of its median.

#ifndef PRIVOPT_DP_CHECKS_H_
#define PRIVOPT_DP_CHECKS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace privopt {

// n equally spaced points from lo to hi inclusive.
std::vector<double> UniformGrid(double lo, double hi, int n);

struct Lemma3Report {
  double alpha = 0.0;
  double fd_step = 0.0;
  double tolerance = 0.0;
  double lower_bound = 0.0;  // h_alpha
  double upper_bound = 0.0;  // H_alpha
  std::vector<double> grid;
  std::vector<double> derivatives;
  std::vector<bool> point_pass;
  double min_derivative = 0.0;
  double max_derivative = 0.0;
  // Largest |d(t) - d(1-t)| over the grid.
  double max_asymmetry = 0.0;
  bool pass = false;

  nlohmann::json ToJson() const;
};

// Central finite differences of t -> nu([0,t]) on `grid`, each checked
// against [h_alpha - tol, H_alpha + tol] with
// tol = 1e-3 + 2 * 1e-10 / fd_step. Grid points must lie in
// (fd_step, 1 - fd_step); anything else throws DomainError.
Lemma3Report VerifyLemma3(double alpha, std::span<const double> grid,
                          double fd_step = 1e-4);

struct DpCheckOptions {
  int64_t trials = 100000;
  // Per-report family-wise level; split evenly over the tests it runs.
  double significance = 1e-3;
  std::vector<double> test_points = {0.25, 0.5, 0.75};
  double truncation = 1e-12;
  uint64_t seed = 0;
  int threads = 0;
};

// A KS entry passes when p_value > threshold. Tolerance entries carry a
// NaN p_value and pass when |statistic - point| is within threshold.
struct CheckStatistic {
  std::string name;
  double point = 0.0;
  double statistic = 0.0;
  double p_value = 1.0;
  double threshold = 0.0;
  bool pass = false;
};

struct DpCheckReport {
  std::string check;
  double alpha = 0.0;
  std::vector<double> partition;
  int64_t trials = 0;
  std::vector<CheckStatistic> statistics;
  bool pass = false;

  nlohmann::json ToJson() const;
};

// Marginals of DP(alpha, Lebesgue[0,1]) drawn by stick-breaking:
//  * F(t) ~ Beta(alpha t, alpha (1-t)) at each test point (one-sample KS);
//  * mu(B) ~ Beta(alpha |B|, alpha (1-|B|)) for each cell B of the
//    partition cut at `cuts` (one-sample KS), or mu([0,1]) = 1 when `cuts`
//    is empty;
//  * self-similarity: F built from Dirichlet cell masses and independent
//    rescaled DP(alpha |B|) draws inside each cell matches direct draws at
//    every test point (two-sample KS).
// Draws are within the truncation level of exact ones, so every mass is
// compared after censoring to [1e3 truncation, 1 - 1e3 truncation].
// Significance is Bonferroni-split over all tests. Trials must be >= 1e4.
DpCheckReport CheckDpMarginals(double alpha, std::span<const double> cuts,
                               const DpCheckOptions& options = {});

// Stick-length facts: E[beta_1] = 1/(1+alpha), P{beta_1 > 1/2} = 2^-alpha
// (each within 4 standard errors) and P{largest stick > 1/2} not below it.
DpCheckReport CheckStickLengths(double alpha, const DpCheckOptions& options = {});

// Law of the median X*: one-sample KS against nu, or against Unif[0,1]
// when `against_uniform` is set, plus a histogram whose per-bin density
// must lie in [h_alpha, H_alpha] up to 4 binomial standard errors.
DpCheckReport CheckMinimizerLaw(double alpha, const DpCheckOptions& options = {},
                                bool against_uniform = false, int bins = 20);

}  // namespace privopt

#endif  // PRIVOPT_DP_CHECKS_H_
