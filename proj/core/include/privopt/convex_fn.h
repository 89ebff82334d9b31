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

// Convex functions on [0,1] and the oracles that serve their subgradients.

#ifndef PRIVOPT_CONVEX_FN_H_
#define PRIVOPT_CONVEX_FN_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "privopt/interval.h"

namespace privopt {

// Which element of the subdifferential to report at a kink.
enum class SubgradientRule { kMidpoint, kLeft, kRight };

// Convex piecewise-linear function on [0,1] given by its breakpoints
// 0 = b_0 < b_1 < ... < b_n = 1 and the slope on each of the n segments.
// Slopes are nondecreasing and nonzero, so the minimizer is unique.
class PiecewiseLinearConvex {
 public:
  // Throws DomainError when the representation is malformed.
  PiecewiseLinearConvex(std::vector<double> breakpoints,
                        std::vector<double> slopes);

  // Subgradient at q in [0,1]. At an interior breakpoint the rule picks the
  // left slope, the right slope, or their midpoint.
  double Subgradient(double q,
                     SubgradientRule rule = SubgradientRule::kMidpoint) const;

  // f(x) - f(0).
  double Value(double x) const;

  double minimizer() const { return minimizer_; }
  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> slopes() const { return slopes_; }

  GradientOracle AsOracle(
      SubgradientRule rule = SubgradientRule::kMidpoint) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> slopes_;
  double minimizer_ = 0.0;
};

// V-shaped witness with slopes -base_slope / +base_slope meeting at
// `minimizer`, which must lie in the open interval (0,1).
PiecewiseLinearConvex MakeSandwichFunction(double minimizer,
                                           double base_slope = 1.0);

// Adaptive adversarial oracle. It answers so that some convex
// piecewise-linear function stays consistent with every response, while
// the set of still-possible minimizers inside `host` (the active interval)
// shrinks by at most half per query that lands inside it.
//
// Sign rule: answers left of the active interval are negative, answers
// right of it are positive. Values are midpoints of their monotone
// neighbours, with sentinels -1 below 0 and +1 above 1.
class ResistingOracle {
 public:
  ResistingOracle(Interval host, double accuracy);

  double Respond(double q);

  const Interval& active() const { return active_; }
  const Interval& host() const { return host_; }
  double accuracy() const { return accuracy_; }
  const std::map<double, double>& answered() const { return answered_; }
  int64_t queries() const { return queries_; }
  int64_t host_queries() const { return host_queries_; }

  // A function consistent with every answer so far, minimized at the
  // midpoint of the active interval.
  PiecewiseLinearConvex Realize() const;

 private:
  double Interpolate(double q, bool negative) const;

  Interval host_;
  Interval active_;
  double accuracy_;
  std::map<double, double> answered_;
  int64_t queries_ = 0;
  int64_t host_queries_ = 0;
};

// Query-budget guard: 10 * (ceil(log2(1/eps)) + 2L).
int64_t DefaultQueryBudget(double eps, int privacy_level = 1);

// Number of halvings that take an interval of length `length` down to at
// most `eps`: the least n with length * 2^-n <= eps.
int BisectionSteps(double length, double eps);

// Plain bisection on `interval`: query the midpoint, keep [m, hi] when the
// response is <= 0 (minimizer at or right of m), else [lo, m]. Stops after
// BisectionSteps(interval.length(), eps) queries and returns the final
// interval.
Interval Bisect(Interval interval, double eps,
                const std::function<double(double)>& query);

// A learner run against an oracle; returns its estimate of the minimizer.
using Strategy = std::function<double(const GradientOracle&)>;

// Bisection over [0,1] to accuracy eps, estimating the final midpoint.
Strategy PlainBisectionStrategy(double eps);

struct ResistingResult {
  int64_t host_queries = 0;
  int64_t total_queries = 0;
  Interval active;
  double estimate = 0.0;
};

// Runs `strategy` against a fresh ResistingOracle on `host` and reports
// how many of its queries landed in `host`. Throws BudgetExceededError when
// the strategy submits more than `budget` queries (<= 0 selects
// DefaultQueryBudget(eps)).
ResistingResult ResistingCount(const Strategy& strategy, Interval host,
                               double eps, int64_t budget = 0);

}  // namespace privopt

#endif  // PRIVOPT_CONVEX_FN_H_
