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

// Minimax-private querying strategy. The learner submits L "guesses"
// (query pairs q, q + eps) that are delta-separated, so that L truths with
// delta-separated minimizers produce the same query sequence, then
// finishes with bisection or, once a guess has hit, with filler queries
// at 1.

#ifndef PRIVOPT_LEARNER_MINIMAX_H_
#define PRIVOPT_LEARNER_MINIMAX_H_

#include <cstdint>
#include <vector>

#include "privopt/interval.h"
#include "privopt/transcript.h"

namespace privopt {

struct MinimaxConfig {
  double eps = 0.0;    // learner accuracy
  double delta = 0.0;  // adversary accuracy
  int L = 1;           // privacy level

  // Throws DomainError unless 0 < eps, 2 eps <= delta <= 1/L and L >= 1.
  void Validate() const;

  // delta > 2^-L: the strategy opens with a guess at 0 and ends its guesses
  // on a uniform grid.
  bool grid_regime() const;
};

// Smallest K in {0, ..., L-1} with l_K = 2^-K / (L-K) in [delta, 2 delta].
// Throws InfeasibleError when delta <= 2^-L or no K qualifies.
int SolveGridK(double delta, int L);

// l_K = 2^-K / (L - K).
double GridLength(int K, int L);

// Reported query count of RunMinimax; it does not depend on the truth.
// 2L + BisectionSteps(2^-L, eps) when delta <= 2^-L, otherwise
// 2L - 1 + BisectionSteps(l_K, eps). The trivial query at 0 is not counted.
int64_t MinimaxQueryCount(const MinimaxConfig& cfg);

// The L eps-intervals whose truths share one query sequence: the guess
// intervals along the always-right bisection path, preceded by [0, eps]
// and followed by the grid guesses in the grid regime.
std::vector<Interval> ExtractPlantedCandidates(const MinimaxConfig& cfg);

// Resumable form of the strategy: read query(), feed the oracle's answer
// to Observe(), repeat until done(). Lets several searches share one
// vector-query clock.
class MinimaxSearch {
 public:
  explicit MinimaxSearch(const MinimaxConfig& cfg);

  bool done() const { return stage_ == Stage::kDone; }
  double query() const;
  QueryPhase phase() const;
  void Observe(double response);

  // Midpoint of the final eps-interval. Valid once done().
  double Estimate() const;

  bool found() const { return found_; }
  const Interval& interval() const { return interval_; }
  int grid_k() const { return k_; }

 private:
  enum class Stage { kGuesses, kTail, kDone };

  double GuessLocation(int g) const;
  bool IsBisectionGuess(int g) const;
  bool IsGridGuess(int g) const;
  double GridPoint(int i) const;
  void FinishGuess();
  void EnterTail();

  MinimaxConfig cfg_;
  bool grid_regime_;
  int k_ = 0;
  Stage stage_ = Stage::kGuesses;
  Interval interval_{0.0, 1.0};
  int guess_ = 0;     // index of the current guess, 0..L-1
  int half_ = 0;      // 0: query at q, 1: query at q + eps
  double first_response_ = 0.0;
  bool found_ = false;
  double found_at_ = 0.0;
  std::vector<double> grid_responses_;
  int tail_steps_ = 0;
  int tail_done_ = 0;
};

struct MinimaxResult {
  QueryTranscript transcript;
  double estimate = 0.0;
};

// Runs the strategy against `oracle`. The strategy is deterministic; `seed`
// is recorded in the transcript. Throws BudgetExceededError past `budget`
// queries (<= 0 selects DefaultQueryBudget(eps, L)).
MinimaxResult RunMinimax(const MinimaxConfig& cfg, const GradientOracle& oracle,
                         uint64_t seed = 0, int64_t budget = 0);

}  // namespace privopt

#endif  // PRIVOPT_LEARNER_MINIMAX_H_
