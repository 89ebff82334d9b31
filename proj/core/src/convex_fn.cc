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
#include <iterator>
#include <string>
#include <utility>

#include "privopt/errors.h"

namespace privopt {
namespace {

void CheckUnitQuery(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw DomainError("query " + std::to_string(q) + " outside [0,1]");
  }
}

}  // namespace

PiecewiseLinearConvex::PiecewiseLinearConvex(std::vector<double> breakpoints,
                                             std::vector<double> slopes)
    : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)) {
  if (breakpoints_.size() < 2 || slopes_.size() + 1 != breakpoints_.size()) {
    throw DomainError("need n+1 breakpoints for n segments");
  }
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0) {
    throw DomainError("breakpoints must start at 0 and end at 1");
  }
  for (size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1])) {
      throw DomainError("breakpoints must be strictly increasing");
    }
  }
  for (size_t i = 0; i < slopes_.size(); ++i) {
    if (!std::isfinite(slopes_[i]) || slopes_[i] == 0.0) {
      throw DomainError("segment slopes must be finite and nonzero");
    }
    if (i > 0 && slopes_[i] < slopes_[i - 1]) {
      throw DomainError("slopes must be nondecreasing (convexity)");
    }
  }
  // First positive segment starts at the minimizer.
  auto first_positive = std::find_if(slopes_.begin(), slopes_.end(),
                                     [](double s) { return s > 0.0; });
  minimizer_ = breakpoints_[std::distance(slopes_.begin(), first_positive)];
}

double PiecewiseLinearConvex::Subgradient(double q,
                                          SubgradientRule rule) const {
  CheckUnitQuery(q);
  if (q == 0.0) return slopes_.front();
  if (q == 1.0) return slopes_.back();
  // Index of the first breakpoint strictly greater than q.
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), q);
  const size_t right = std::distance(breakpoints_.begin(), it);
  if (breakpoints_[right - 1] != q) return slopes_[right - 1];
  const double left_slope = slopes_[right - 2];
  const double right_slope = slopes_[right - 1];
  switch (rule) {
    case SubgradientRule::kLeft:
      return left_slope;
    case SubgradientRule::kRight:
      return right_slope;
    case SubgradientRule::kMidpoint:
      break;
  }
  return 0.5 * (left_slope + right_slope);
}

double PiecewiseLinearConvex::Value(double x) const {
  CheckUnitQuery(x);
  double value = 0.0;
  for (size_t i = 0; i < slopes_.size(); ++i) {
    const double lo = breakpoints_[i];
    if (x <= lo) break;
    value += slopes_[i] * (std::min(x, breakpoints_[i + 1]) - lo);
  }
  return value;
}

GradientOracle PiecewiseLinearConvex::AsOracle(SubgradientRule rule) const {
  return [f = *this, rule](double q) { return f.Subgradient(q, rule); };
}

PiecewiseLinearConvex MakeSandwichFunction(double minimizer,
                                           double base_slope) {
  if (!(minimizer > 0.0 && minimizer < 1.0)) {
    throw DomainError("sandwich minimizer must lie in (0,1)");
  }
  if (!(base_slope > 0.0)) throw DomainError("base slope must be positive");
  return PiecewiseLinearConvex({0.0, minimizer, 1.0},
                               {-base_slope, base_slope});
}

ResistingOracle::ResistingOracle(Interval host, double accuracy)
    : host_(host), active_(host), accuracy_(accuracy) {
  if (!(host.lo >= 0.0 && host.hi <= 1.0 && host.lo < host.hi)) {
    throw DomainError("host interval must be a nonempty subinterval of [0,1]");
  }
  if (!(accuracy > 0.0)) throw DomainError("accuracy must be positive");
}

double ResistingOracle::Interpolate(double q, bool negative) const {
  double lower = -1.0;
  double upper = 1.0;
  auto above = answered_.upper_bound(q);
  if (above != answered_.end()) upper = above->second;
  if (above != answered_.begin()) lower = std::prev(above)->second;
  if (negative) return 0.5 * (lower + std::min(upper, 0.0));
  return 0.5 * (std::max(lower, 0.0) + upper);
}

double ResistingOracle::Respond(double q) {
  CheckUnitQuery(q);
  ++queries_;
  if (host_.Contains(q)) ++host_queries_;
  if (auto it = answered_.find(q); it != answered_.end()) return it->second;

  bool negative;
  if (active_.ContainsInterior(q)) {
    // Keep the longer side; ties keep the right side.
    if (q - active_.lo > active_.hi - q) {
      active_.hi = q;
      negative = false;
    } else {
      active_.lo = q;
      negative = true;
    }
  } else {
    negative = q <= active_.lo;
  }
  const double value = Interpolate(q, negative);
  answered_.emplace(q, value);
  return value;
}

PiecewiseLinearConvex ResistingOracle::Realize() const {
  const double kink = active_.midpoint();
  std::vector<double> breakpoints{0.0};
  std::vector<double> slopes;
  // Each answered point owns a segment carrying its value; segment borders
  // sit halfway between neighbours, except across the sign change, which
  // happens at the kink.
  double prev_x = -1.0;
  for (const auto& [x, value] : answered_) {
    if (!slopes.empty()) {
      const bool crossing = slopes.back() < 0.0 && value > 0.0;
      breakpoints.push_back(crossing ? kink : 0.5 * (prev_x + x));
    } else if (value > 0.0) {
      // No negative answer: open with a descending piece up to the kink.
      slopes.push_back(-1.0);
      breakpoints.push_back(kink);
    }
    slopes.push_back(value);
    prev_x = x;
  }
  if (slopes.empty()) {
    slopes.push_back(-1.0);
    breakpoints.push_back(kink);
  }
  if (slopes.back() < 0.0) {
    slopes.push_back(1.0);
    breakpoints.push_back(kink);
  }
  breakpoints.push_back(1.0);
  return PiecewiseLinearConvex(std::move(breakpoints), std::move(slopes));
}

int64_t DefaultQueryBudget(double eps, int privacy_level) {
  const double log_term = std::ceil(std::log2(1.0 / eps));
  return 10 * (static_cast<int64_t>(log_term) + 2 * privacy_level);
}

int BisectionSteps(double length, double eps) {
  int steps = 0;
  while (std::ldexp(length, -steps) > eps) ++steps;
  return steps;
}

Interval Bisect(Interval interval, double eps,
                const std::function<double(double)>& query) {
  const int steps = BisectionSteps(interval.length(), eps);
  for (int i = 0; i < steps; ++i) {
    const double mid = interval.midpoint();
    if (query(mid) <= 0.0) {
      interval.lo = mid;
    } else {
      interval.hi = mid;
    }
  }
  return interval;
}

Strategy PlainBisectionStrategy(double eps) {
  return [eps](const GradientOracle& oracle) {
    return Bisect(Interval{0.0, 1.0}, eps, oracle).midpoint();
  };
}

ResistingResult ResistingCount(const Strategy& strategy, Interval host,
                               double eps, int64_t budget) {
  if (budget <= 0) budget = DefaultQueryBudget(eps);
  ResistingOracle oracle(host, eps);
  GradientOracle guarded = [&oracle, budget](double q) {
    if (oracle.queries() >= budget) {
      throw BudgetExceededError("strategy exceeded its budget of " +
                                std::to_string(budget) + " queries");
    }
    return oracle.Respond(q);
  };
  ResistingResult result;
  result.estimate = strategy(guarded);
  result.host_queries = oracle.host_queries();
  result.total_queries = oracle.queries();
  result.active = oracle.active();
  return result;
}

}  // namespace privopt
