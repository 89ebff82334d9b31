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

// Eavesdropping adversaries. They see the query sequence and the public
// parameters, never the responses.

#ifndef PRIVOPT_ADVERSARY_H_
#define PRIVOPT_ADVERSARY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "privopt/random.h"
#include "privopt/transcript.h"

namespace privopt {

struct AdversaryView {
  std::vector<double> queries;
  double eps = 0.0;
  double delta = 0.0;
  int L = 1;
  // Concentration of the DP prior; 0 in the minimax setting.
  double alpha = 0.0;

  static AdversaryView Of(const QueryTranscript& transcript, double eps, double delta,
                          int L, double alpha = 0.0);
};

// A uniformly random element of the query list. Throws DomainError when
// the view is empty.
double ProportionalSampling(const AdversaryView& view, Rng& rng);

// Pairs (q, q') of consecutive queries with 0 < q' - q <= eps + 1e-12,
// scanned left to right without overlap. Returns {q, q'} per pair.
std::vector<std::pair<double, double>> GuessPairs(std::span<const double> queries,
                                                  double eps);

// Midpoint of a uniformly chosen guess pair, or ProportionalSampling when
// the view has no pair.
double GuessPairAdversary(const AdversaryView& view, Rng& rng);

// Centers of the greedy left-to-right cover: each center sits `radius`
// right of the leftmost uncovered point and covers every point within
// 2 radius of that point. Optimal in one dimension.
std::vector<double> GreedyCover(std::vector<double> points, double radius);

// Size of GreedyCover.
int64_t CoveringNumber1d(std::span<const double> points, double radius);

// Uniform draw among the greedy cover centers of `candidates`. Throws
// DomainError on an empty candidate list.
double CoveringSetAdversary(std::span<const double> candidates, double radius,
                            Rng& rng);

// Candidate set the minimax covering adversary covers: both ends of every
// guess pair, i.e. the eps-intervals the sequence cannot tell apart.
std::vector<double> GuessPairEndpoints(const AdversaryView& view);

// Recovers the L kept intervals of the Bayesian strategy from the query
// sequence and the public parameters, and returns the last query of each
// interval's bisection, which lies within eps of that interval's
// candidate. Throws DomainError if the sequence does not have the shape of
// a Bayesian run.
std::vector<double> ReconstructCandidates(const AdversaryView& view);

// Uniform draw among ReconstructCandidates.
double ReconstructionAdversary(const AdversaryView& view, Rng& rng);

}  // namespace privopt

#endif  // PRIVOPT_ADVERSARY_H_
