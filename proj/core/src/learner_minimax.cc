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

#include "privopt/convex_fn.h"
#include "privopt/errors.h"

namespace privopt {
namespace {

// Relative slack for the [delta, 2 delta] membership test, which involves
// a division by L - K.
constexpr double kGridSlack = 1e-12;

}  // namespace

void MinimaxConfig::Validate() const {
  if (L < 1) throw DomainError("privacy level L must be >= 1");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive");
  if (!(2.0 * eps <= delta)) throw DomainError("regime violated: 2 eps <= delta");
  if (!(delta <= 1.0 / L)) throw DomainError("regime violated: delta <= 1/L");
}

bool MinimaxConfig::grid_regime() const { return delta > std::ldexp(1.0, -L); }

double GridLength(int K, int L) { return std::ldexp(1.0, -K) / (L - K); }

int SolveGridK(double delta, int L) {
  if (L < 1) throw DomainError("privacy level L must be >= 1");
  if (!(delta > std::ldexp(1.0, -L))) {
    throw InfeasibleError("grid regime needs delta > 2^-L");
  }
  for (int K = 0; K < L; ++K) {
    const double len = GridLength(K, L);
    if (len >= delta * (1.0 - kGridSlack) && len <= 2.0 * delta * (1.0 + kGridSlack)) {
      return K;
    }
  }
  throw InfeasibleError("no K in {0..L-1} with 2^-K/(L-K) in [delta, 2 delta]");
}

int64_t MinimaxQueryCount(const MinimaxConfig& cfg) {
  cfg.Validate();
  if (!cfg.grid_regime()) {
    return 2 * cfg.L + BisectionSteps(std::ldexp(1.0, -cfg.L), cfg.eps);
  }
  const int K = SolveGridK(cfg.delta, cfg.L);
  return 2 * cfg.L - 1 + BisectionSteps(GridLength(K, cfg.L), cfg.eps);
}

std::vector<Interval> ExtractPlantedCandidates(const MinimaxConfig& cfg) {
  cfg.Validate();
  std::vector<Interval> out;
  auto add = [&](double lo) { out.push_back({lo, lo + cfg.eps}); };
  if (!cfg.grid_regime()) {
    for (int i = 1; i <= cfg.L; ++i) add(1.0 - std::ldexp(1.0, -i));
    return out;
  }
  const int K = SolveGridK(cfg.delta, cfg.L);
  add(0.0);
  for (int i = 1; i <= K; ++i) add(1.0 - std::ldexp(1.0, -i));
  const double base = 1.0 - std::ldexp(1.0, -K);
  const double step = std::ldexp(1.0, -K) / (cfg.L - K);
  for (int i = 1; i <= cfg.L - K - 1; ++i) add(base + i * step);
  return out;
}

MinimaxSearch::MinimaxSearch(const MinimaxConfig& cfg)
    : cfg_(cfg), grid_regime_(false) {
  cfg_.Validate();
  grid_regime_ = cfg_.grid_regime();
  if (grid_regime_) k_ = SolveGridK(cfg_.delta, cfg_.L);
}

bool MinimaxSearch::IsBisectionGuess(int g) const {
  return grid_regime_ ? (g >= 1 && g <= k_) : true;
}

bool MinimaxSearch::IsGridGuess(int g) const { return grid_regime_ && g > k_; }

double MinimaxSearch::GridPoint(int i) const {
  return interval_.lo + i * (interval_.length() / (cfg_.L - k_));
}

double MinimaxSearch::GuessLocation(int g) const {
  if (grid_regime_ && g == 0) return 0.0;
  if (IsGridGuess(g)) return GridPoint(g - k_);
  return interval_.midpoint();
}

double MinimaxSearch::query() const {
  switch (stage_) {
    case Stage::kGuesses:
      return GuessLocation(guess_) + (half_ == 1 ? cfg_.eps : 0.0);
    case Stage::kTail:
      return found_ ? 1.0 : interval_.midpoint();
    case Stage::kDone:
      break;
  }
  throw DomainError("search already finished");
}

QueryPhase MinimaxSearch::phase() const {
  switch (stage_) {
    case Stage::kGuesses:
      if (grid_regime_ && guess_ == 0 && half_ == 0) return QueryPhase::kTrivial;
      return IsGridGuess(guess_) ? QueryPhase::kGrid : QueryPhase::kGuess;
    case Stage::kTail:
      return found_ ? QueryPhase::kFill : QueryPhase::kBisect;
    case Stage::kDone:
      break;
  }
  throw DomainError("search already finished");
}

void MinimaxSearch::Observe(double response) {
  switch (stage_) {
    case Stage::kGuesses:
      if (half_ == 0) {
        first_response_ = response;
        half_ = 1;
        return;
      }
      half_ = 0;
      if (!found_ && first_response_ <= 0.0 && response > 0.0) {
        found_ = true;
        found_at_ = GuessLocation(guess_);
      }
      FinishGuess();
      return;
    case Stage::kTail:
      if (!found_) {
        const double mid = interval_.midpoint();
        if (response <= 0.0) {
          interval_.lo = mid;
        } else {
          interval_.hi = mid;
        }
      }
      if (++tail_done_ == tail_steps_) stage_ = Stage::kDone;
      return;
    case Stage::kDone:
      break;
  }
  throw DomainError("search already finished");
}

void MinimaxSearch::FinishGuess() {
  const int g = guess_;
  if (IsBisectionGuess(g)) {
    const double q = interval_.midpoint();
    if (found_ || first_response_ <= 0.0) {
      interval_.lo = q;
    } else {
      interval_.hi = q;
    }
  } else if (IsGridGuess(g)) {
    grid_responses_.push_back(first_response_);
  }
  if (++guess_ == cfg_.L) EnterTail();
}

void MinimaxSearch::EnterTail() {
  double nominal = std::ldexp(1.0, -cfg_.L);
  if (grid_regime_) {
    nominal = GridLength(k_, cfg_.L);
    if (!found_) {
      // Responses are monotone in the grid point, so the nonpositive ones
      // form a prefix; the minimizer lies right of the last of them.
      int s = 0;
      for (size_t i = 0; i < grid_responses_.size(); ++i) {
        if (grid_responses_[i] <= 0.0) s = static_cast<int>(i) + 1;
      }
      const double lo = GridPoint(s);
      const double hi = s + 1 == cfg_.L - k_ ? interval_.hi : GridPoint(s + 1);
      interval_ = {lo, hi};
    }
  }
  tail_steps_ = BisectionSteps(nominal, cfg_.eps);
  stage_ = tail_steps_ == 0 ? Stage::kDone : Stage::kTail;
}

double MinimaxSearch::Estimate() const {
  if (!done()) throw DomainError("estimate requested before the search finished");
  return found_ ? found_at_ + 0.5 * cfg_.eps : interval_.midpoint();
}

MinimaxResult RunMinimax(const MinimaxConfig& cfg, const GradientOracle& oracle,
                         uint64_t seed, int64_t budget) {
  MinimaxSearch search(cfg);
  if (budget <= 0) budget = DefaultQueryBudget(cfg.eps, cfg.L);
  MinimaxResult result{QueryTranscript(seed), 0.0};
  while (!search.done()) {
    if (static_cast<int64_t>(result.transcript.size()) >= budget) {
      throw BudgetExceededError("minimax strategy exceeded its query budget of " +
                                std::to_string(budget));
    }
    const double q = search.query();
    const QueryPhase phase = search.phase();
    const double r = oracle(q);
    result.transcript.Append(q, r, phase);
    search.Observe(r);
  }
  result.estimate = search.Estimate();
  return result;
}

}  // namespace privopt
