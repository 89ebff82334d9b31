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

#include "privopt/adversary.h"

#include <algorithm>

#include "privopt/convex_fn.h"
#include "privopt/errors.h"
#include "privopt/interval.h"
#include "privopt/learner_bayes.h"

namespace privopt {
namespace {

constexpr double kPairSlack = 1e-12;

size_t UniformIndex(size_t n, Rng& rng) {
  return std::min(n - 1, static_cast<size_t>(Uniform01(rng) * n));
}

}  // namespace

AdversaryView AdversaryView::Of(const QueryTranscript& transcript, double eps,
                                double delta, int L, double alpha) {
  const auto q = transcript.queries();
  return {std::vector<double>(q.begin(), q.end()), eps, delta, L, alpha};
}

double ProportionalSampling(const AdversaryView& view, Rng& rng) {
  if (view.queries.empty()) throw DomainError("adversary view has no queries");
  return view.queries[UniformIndex(view.queries.size(), rng)];
}

std::vector<std::pair<double, double>> GuessPairs(std::span<const double> queries,
                                                  double eps) {
  std::vector<std::pair<double, double>> pairs;
  for (size_t i = 0; i + 1 < queries.size();) {
    const double gap = queries[i + 1] - queries[i];
    if (gap > 0.0 && gap <= eps + kPairSlack) {
      pairs.emplace_back(queries[i], queries[i + 1]);
      i += 2;
    } else {
      i += 1;
    }
  }
  return pairs;
}

double GuessPairAdversary(const AdversaryView& view, Rng& rng) {
  const auto pairs = GuessPairs(view.queries, view.eps);
  if (pairs.empty()) return ProportionalSampling(view, rng);
  const auto& [lo, hi] = pairs[UniformIndex(pairs.size(), rng)];
  return 0.5 * (lo + hi);
}

std::vector<double> GreedyCover(std::vector<double> points, double radius) {
  if (!(radius > 0.0)) throw DomainError("cover radius must be positive");
  std::sort(points.begin(), points.end());
  std::vector<double> centers;
  for (size_t i = 0; i < points.size();) {
    const double left = points[i];
    centers.push_back(left + radius);
    while (i < points.size() && points[i] - left <= 2.0 * radius) ++i;
  }
  return centers;
}

int64_t CoveringNumber1d(std::span<const double> points, double radius) {
  return static_cast<int64_t>(
      GreedyCover(std::vector<double>(points.begin(), points.end()), radius).size());
}

double CoveringSetAdversary(std::span<const double> candidates, double radius,
                            Rng& rng) {
  if (candidates.empty()) throw DomainError("covering adversary needs candidates");
  const auto centers =
      GreedyCover(std::vector<double>(candidates.begin(), candidates.end()), radius);
  return centers[UniformIndex(centers.size(), rng)];
}

std::vector<double> GuessPairEndpoints(const AdversaryView& view) {
  std::vector<double> out;
  for (const auto& [lo, hi] : GuessPairs(view.queries, view.eps)) {
    out.push_back(lo);
    out.push_back(hi);
  }
  return out;
}

std::vector<double> ReconstructCandidates(const AdversaryView& view) {
  const BayesConfig cfg{view.eps, view.delta, view.L, view.alpha};
  const int L = cfg.L;
  const size_t k = Phase1Steps(cfg);
  const auto& q = view.queries;
  if (q.size() < k + 2 * L - 1) {
    throw DomainError("query sequence too short for a Bayesian run");
  }
  const auto p1 = std::span(q).subspan(0, k);
  const auto p2 = std::span(q).subspan(k, L - 1);
  const auto p3 = std::span(q).subspan(k + L - 1, L);
  const auto p4 = std::span(q).subspan(k + 2 * L - 1);

  // Every phase-1 query is an endpoint of I or lies outside it.
  Interval whole{0.0, 1.0};
  for (double x : p1) {
    if (x <= p3.front()) whole.lo = std::max(whole.lo, x);
    if (x >= p3.back()) whole.hi = std::min(whole.hi, x);
  }
  std::vector<double> kappas = {whole.lo};
  kappas.insert(kappas.end(), p2.begin(), p2.end());
  kappas.push_back(whole.hi);

  // Try both sides; the right one makes each bisection block open at the
  // midpoint of its interval and uses up the sequence exactly.
  for (bool left_half : {true, false}) {
    std::vector<double> estimates;
    size_t pos = 0;
    bool consistent = true;
    for (int j = 0; j < L && consistent; ++j) {
      const Interval kept = left_half ? Interval{kappas[j], p3[j]}
                                      : Interval{p3[j], kappas[j + 1]};
      const size_t steps = BisectionSteps(kept.length(), cfg.eps);
      if (pos + steps > p4.size()) {
        consistent = false;
        break;
      }
      if (steps == 0) {
        estimates.push_back(kept.midpoint());
        continue;
      }
      if (p4[pos] != kept.midpoint()) {
        consistent = false;
        break;
      }
      estimates.push_back(p4[pos + steps - 1]);
      pos += steps;
    }
    if (consistent && pos == p4.size()) return estimates;
  }
  throw DomainError("query sequence does not match the Bayesian phase structure");
}

double ReconstructionAdversary(const AdversaryView& view, Rng& rng) {
  const auto candidates = ReconstructCandidates(view);
  return candidates[UniformIndex(candidates.size(), rng)];
}

}  // namespace privopt
