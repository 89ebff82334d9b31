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

#include "privopt/learner_bayes.h"

#include <cmath>
#include <limits>

#include "privopt/convex_fn.h"
#include "privopt/errors.h"

namespace privopt {

void BayesConfig::Validate() const {
  if (L < 1) throw DomainError("privacy level L must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("concentration alpha must be positive");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive");
  if (!(2.0 * eps <= delta)) throw DomainError("regime violated: 2 eps <= delta");
  if (!(2.0 * delta * L * UpperDensityBound(alpha) < 1.0)) {
    throw DomainError("regime violated: delta < 1/(2 L H_alpha)");
  }
}

int Phase1Steps(const BayesConfig& cfg) {
  cfg.Validate();
  const double target = 4.0 * cfg.delta * cfg.L * UpperDensityBound(cfg.alpha);
  int k = 0;
  while (std::ldexp(1.0, -k) > target) ++k;
  return k;
}

double GapConstant(double alpha) {
  return std::log2(16.0 * UpperDensityBound(alpha) / LowerDensityBound(alpha));
}

double BayesCountBound(const BayesConfig& cfg) {
  cfg.Validate();
  const double L = cfg.L;
  return L * std::ceil(std::log2(cfg.delta / cfg.eps)) + GapConstant(cfg.alpha) * L +
         std::log2(1.0 / (cfg.delta * L)) + 3.0 * L;
}

Phase1Result Phase1Localize(const BayesConfig& cfg, const MarginalNu& nu,
                            const QueryFn& ask) {
  Phase1Result out;
  out.steps = Phase1Steps(cfg);
  for (int i = 0; i < out.steps; ++i) {
    const double half = 0.5 * out.mass;
    const double median = nu.Quantile(out.p_lo + half);
    if (ask(median) <= 0.0) {
      out.interval.lo = median;
      out.p_lo += half;
    } else {
      out.interval.hi = median;
    }
    out.mass = half;
  }
  return out;
}

Phase2Result Phase2Partition(const Phase1Result& p1, int L, const MarginalNu& nu,
                             const QueryFn& ask) {
  Phase2Result out;
  out.kappas.push_back(p1.interval.lo);
  for (int j = 1; j < L; ++j) {
    const double kappa = nu.Quantile(p1.p_lo + j * p1.mass / L);
    out.kappas.push_back(kappa);
    if (ask(kappa) <= 0.0) ++out.j_star;
  }
  out.kappas.push_back(p1.interval.hi);
  return out;
}

Phase3Result Phase3Medians(const Phase1Result& p1, const Phase2Result& p2, int L,
                           const MarginalNu& nu, const QueryFn& ask) {
  Phase3Result out;
  const double piece = p1.mass / L;
  double star_response = 0.0;
  for (int j = 1; j <= L; ++j) {
    const double m = nu.Quantile(p1.p_lo + (j - 0.5) * piece);
    out.medians.push_back(m);
    const double r = ask(m);
    if (j == p2.j_star) star_response = r;
  }
  out.left_half = star_response > 0.0;
  out.kept_mass = 0.5 * piece;
  for (int j = 1; j <= L; ++j) {
    const double piece_lo = p1.p_lo + (j - 1) * piece;
    if (out.left_half) {
      out.kept.push_back({p2.kappas[j - 1], out.medians[j - 1]});
      out.kept_p_lo.push_back(piece_lo);
    } else {
      out.kept.push_back({out.medians[j - 1], p2.kappas[j]});
      out.kept_p_lo.push_back(piece_lo + out.kept_mass);
    }
  }
  return out;
}

DecoyFn SampleDecoys(const MarginalNu& nu, Rng& rng) {
  return [&nu, &rng](int, double p_lo, double mass) {
    return nu.Quantile(p_lo + Uniform01(rng) * mass);
  };
}

Phase4Result Phase4DecoySearch(const Phase3Result& p3, int j_star, double eps,
                               const QueryFn& ask, const DecoyFn& decoy,
                               const RecordFn& record) {
  const int L = static_cast<int>(p3.kept.size());
  Phase4Result out;
  out.decoys.assign(L, std::numeric_limits<double>::quiet_NaN());
  // Decoys are drawn up front so the draw order does not depend on j*.
  for (int j = 1; j <= L; ++j) {
    if (j != j_star) out.decoys[j - 1] = decoy(j, p3.kept_p_lo[j - 1], p3.kept_mass);
  }
  for (int j = 1; j <= L; ++j) {
    const double x = out.decoys[j - 1];
    auto answer = [&, j, x](double q) {
      const double r = j == j_star ? ask(q) : (q < x ? -1.0 : 1.0);
      if (record) record(q, r);
      return r;
    };
    out.final_intervals.push_back(Bisect(p3.kept[j - 1], eps, answer));
  }
  out.estimate = out.final_intervals[j_star - 1].midpoint();
  return out;
}

namespace {

BayesResult RunBayesImpl(const BayesConfig& cfg, const GradientOracle& oracle,
                         const DecoyFn& decoy, uint64_t seed) {
  cfg.Validate();
  MarginalNu nu(cfg.alpha);
  BayesResult result{QueryTranscript(seed), 0.0, {}};
  QueryTranscript& t = result.transcript;
  auto channel = [&](QueryPhase phase) {
    return [&t, &oracle, phase](double q) {
      const double r = oracle(q);
      t.Append(q, r, phase);
      return r;
    };
  };
  PhasePlan& plan = result.plan;
  plan.phase1 = Phase1Localize(cfg, nu, channel(QueryPhase::kP1));
  plan.phase2 = Phase2Partition(plan.phase1, cfg.L, nu, channel(QueryPhase::kP2));
  plan.phase3 =
      Phase3Medians(plan.phase1, plan.phase2, cfg.L, nu, channel(QueryPhase::kP3));
  plan.phase4 = Phase4DecoySearch(
      plan.phase3, plan.phase2.j_star, cfg.eps, oracle, decoy,
      [&t](double q, double r) { t.Append(q, r, QueryPhase::kP4); });
  result.estimate = plan.phase4.estimate;
  return result;
}

}  // namespace

BayesResult RunBayes(const BayesConfig& cfg, const GradientOracle& oracle, Rng& rng,
                     uint64_t seed) {
  MarginalNu nu(cfg.alpha);
  return RunBayesImpl(cfg, oracle, SampleDecoys(nu, rng), seed);
}

BayesResult ReplayBayes(const BayesConfig& cfg, std::span<const double> candidates) {
  if (static_cast<int>(candidates.size()) != cfg.L) {
    throw DomainError("replay needs exactly L candidates");
  }
  // Every candidate sits in I and X_1 sits in J_1, so answering phases 1-3
  // relative to X_1 reproduces I, the cut points and the kept side; it also
  // makes j* = 1, after which X_1 plays the role of the truth.
  const double x1 = candidates[0];
  GradientOracle oracle = [x1](double q) { return q < x1 ? -1.0 : 1.0; };
  DecoyFn decoy = [candidates](int j, double, double) { return candidates[j - 1]; };
  return RunBayesImpl(cfg, oracle, decoy, 0);
}

}  // namespace privopt
