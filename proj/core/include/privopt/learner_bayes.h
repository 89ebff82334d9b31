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

// Four-phase private querying strategy under the Dirichlet-process prior.
//
//  1. Median bisection in nu-probability until the interval I holding X*
//     has nu(I) <= 4 delta L H_alpha.
//  2. Cut I into L pieces I_j of equal nu-mass and find the piece I_{j*}
//     holding X*.
//  3. Query the nu-median m_j of every piece. The answer at m_{j*} picks
//     one side, and the same side J_j of every piece is kept, so the kept
//     halves are separated by the discarded ones.
//  4. Draw decoys X_j ~ nu restricted to J_j for j != j*, then bisect every
//     J_j to accuracy eps: against the oracle for j*, against the decoy
//     otherwise.
//
// All nu-mass bookkeeping is done in probability space: an interval is a
// pair (p_lo, mass) and its endpoints are nu-quantiles.

#ifndef PRIVOPT_LEARNER_BAYES_H_
#define PRIVOPT_LEARNER_BAYES_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "privopt/interval.h"
#include "privopt/marginal_nu.h"
#include "privopt/random.h"
#include "privopt/transcript.h"

namespace privopt {

struct BayesConfig {
  double eps = 0.0;
  double delta = 0.0;
  int L = 1;
  double alpha = 1.0;

  // Throws DomainError unless 0 < eps, 2 eps <= delta,
  // delta < 1 / (2 L H_alpha), L >= 1 and alpha > 0. The message names the
  // violated inequality.
  void Validate() const;
};

// Number of phase-1 queries: the first k with 2^-k <= 4 delta L H_alpha.
int Phase1Steps(const BayesConfig& cfg);

// c2 = log2(16 H_alpha / h_alpha).
double GapConstant(double alpha);

// L ceil(log2(delta/eps)) + c2 L + log2(1/(delta L)) + 3L.
double BayesCountBound(const BayesConfig& cfg);

// Sends one query and returns the response.
using QueryFn = std::function<double(double)>;

struct Phase1Result {
  Interval interval;
  double p_lo = 0.0;  // nu([0, interval.lo])
  double mass = 1.0;  // nu(interval)
  int steps = 0;
};

// Queries the nu-median of the current interval; a response <= 0 keeps the
// upper half. Stops at the first mass <= 4 delta L H_alpha.
Phase1Result Phase1Localize(const BayesConfig& cfg, const MarginalNu& nu,
                            const QueryFn& ask);

struct Phase2Result {
  std::vector<double> kappas;  // L + 1 cut points, kappas[0] = I.lo
  int j_star = 1;              // 1-based
};

// Queries kappa_1..kappa_{L-1}; j* = 1 + #{j : response <= 0}.
Phase2Result Phase2Partition(const Phase1Result& p1, int L, const MarginalNu& nu,
                             const QueryFn& ask);

struct Phase3Result {
  std::vector<double> medians;   // m_1..m_L
  std::vector<Interval> kept;    // J_1..J_L
  std::vector<double> kept_p_lo; // nu-mass left of each J_j
  double kept_mass = 0.0;        // nu(J_j), the same for every j
  bool left_half = false;        // response at m_{j*} > 0
};

// Queries every m_j and keeps the same half of every piece.
Phase3Result Phase3Medians(const Phase1Result& p1, const Phase2Result& p2, int L,
                           const MarginalNu& nu, const QueryFn& ask);

// Supplies decoy X_j for the (1-based) index j given nu(left of J_j) and
// nu(J_j).
using DecoyFn = std::function<double(int j, double p_lo, double mass)>;

// Inverse-CDF draw from nu restricted to (p_lo, mass).
DecoyFn SampleDecoys(const MarginalNu& nu, Rng& rng);

struct Phase4Result {
  std::vector<double> decoys;  // X_1..X_L; entry j* is NaN (unknown X*)
  std::vector<Interval> final_intervals;
  double estimate = 0.0;
};

// Observes every phase-4 query with its response, simulated or not.
using RecordFn = std::function<void(double q, double response)>;

// Bisects J_1..J_L in order. `ask` answers for j*; other intervals are
// answered -1 when q < X_j and +1 otherwise, without touching the oracle.
Phase4Result Phase4DecoySearch(const Phase3Result& p3, int j_star, double eps,
                               const QueryFn& ask, const DecoyFn& decoy,
                               const RecordFn& record = nullptr);

struct PhasePlan {
  Phase1Result phase1;
  Phase2Result phase2;
  Phase3Result phase3;
  Phase4Result phase4;
};

struct BayesResult {
  QueryTranscript transcript;
  double estimate = 0.0;
  PhasePlan plan;
};

BayesResult RunBayes(const BayesConfig& cfg, const GradientOracle& oracle, Rng& rng,
                     uint64_t seed = 0);

// Rebuilds the query sequence from the candidates X_1..X_L alone, the
// first of which must lie in J_1. Used to confirm that the transcript is a
// function of the candidates.
BayesResult ReplayBayes(const BayesConfig& cfg, std::span<const double> candidates);

}  // namespace privopt

#endif  // PRIVOPT_LEARNER_BAYES_H_
