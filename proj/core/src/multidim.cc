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

#include "privopt/multidim.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "privopt/adversary.h"
#include "privopt/errors.h"
#include "privopt/parallel.h"
#include "privopt/random.h"
#include "privopt/stats.h"

namespace privopt {

SeparableFunction::SeparableFunction(std::vector<PiecewiseLinearConvex> coordinates)
    : coordinates_(std::move(coordinates)) {
  if (coordinates_.empty()) throw DomainError("separable function needs d >= 1");
}

std::vector<double> SeparableFunction::Gradient(std::span<const double> q,
                                                SubgradientRule rule) const {
  if (q.size() != coordinates_.size()) throw DomainError("query dimension mismatch");
  std::vector<double> g(q.size());
  for (size_t i = 0; i < q.size(); ++i) g[i] = coordinates_[i].Subgradient(q[i], rule);
  return g;
}

std::vector<double> SeparableFunction::Minimizer() const {
  std::vector<double> x;
  for (const auto& c : coordinates_) x.push_back(c.minimizer());
  return x;
}

VectorOracle SeparableFunction::AsOracle(SubgradientRule rule) const {
  return [this, rule](std::span<const double> q) { return Gradient(q, rule); };
}

int MultidimConfig::AxisLevel() const {
  if (d < 1) throw DomainError("dimension d must be >= 1");
  if (L < 1) throw DomainError("privacy level L must be >= 1");
  const int m = static_cast<int>(std::lround(std::pow(L, 1.0 / d)));
  for (int c = std::max(1, m - 1); c <= m + 1; ++c) {
    int64_t power = 1;
    for (int i = 0; i < d && power <= L; ++i) power *= c;
    if (power == L) return c;
  }
  throw DomainError("L^(1/d) must be an integer");
}

void MultidimConfig::Validate() const { Axis().Validate(); }

MinimaxConfig MultidimConfig::Axis() const {
  return MinimaxConfig{eps, delta, AxisLevel()};
}

void VectorTranscript::Append(std::vector<double> query, std::vector<double> response,
                              std::vector<QueryPhase> phases) {
  queries_.push_back(std::move(query));
  responses_.push_back(std::move(response));
  phases_.push_back(std::move(phases));
}

int64_t VectorTranscript::ReportedCount() const {
  int64_t count = 0;
  for (const auto& row : phases_) {
    count += !std::all_of(row.begin(), row.end(),
                          [](QueryPhase p) { return p == QueryPhase::kTrivial; });
  }
  return count;
}

QueryTranscript VectorTranscript::Axis(size_t axis) const {
  QueryTranscript t(seed_);
  for (size_t i = 0; i < size(); ++i) {
    t.Append(queries_[i][axis], responses_[i][axis], phases_[i][axis]);
  }
  return t;
}

std::string VectorTranscript::ToJsonLines(bool include_responses) const {
  std::string out;
  for (size_t i = 0; i < size(); ++i) {
    std::vector<std::string_view> names;
    for (QueryPhase p : phases_[i]) names.push_back(PhaseName(p));
    out += nlohmann::json{{"i", i}, {"q", queries_[i]}, {"phase", names}}.dump();
    out += '\n';
  }
  if (include_responses) {
    nlohmann::json line;
    line["learner_private"]["responses"] = responses_;
    out += line.dump();
    out += '\n';
  }
  return out;
}

MultidimResult RunMinimaxD(const MultidimConfig& cfg, const VectorOracle& oracle,
                           uint64_t seed, int64_t budget) {
  const MinimaxConfig axis = cfg.Axis();
  axis.Validate();
  if (budget <= 0) budget = DefaultQueryBudget(cfg.eps, axis.L);
  std::vector<MinimaxSearch> searches(cfg.d, MinimaxSearch(axis));
  MultidimResult result{VectorTranscript(cfg.d, seed), {}};
  auto all_done = [&] {
    return std::all_of(searches.begin(), searches.end(),
                       [](const MinimaxSearch& s) { return s.done(); });
  };
  while (!all_done()) {
    if (static_cast<int64_t>(result.transcript.size()) >= budget) {
      throw BudgetExceededError("d-dimensional strategy exceeded its query budget of " +
                                std::to_string(budget));
    }
    std::vector<double> q(cfg.d);
    std::vector<QueryPhase> phases(cfg.d);
    for (int i = 0; i < cfg.d; ++i) {
      q[i] = searches[i].done() ? 1.0 : searches[i].query();
      phases[i] = searches[i].done() ? QueryPhase::kFill : searches[i].phase();
    }
    std::vector<double> r = oracle(q);
    if (r.size() != q.size()) throw DomainError("oracle returned wrong dimension");
    for (int i = 0; i < cfg.d; ++i) {
      if (!searches[i].done()) searches[i].Observe(r[i]);
    }
    result.transcript.Append(std::move(q), std::move(r), std::move(phases));
  }
  for (const auto& s : searches) result.estimate.push_back(s.Estimate());
  return result;
}

int64_t MultidimQueryCount(const MultidimConfig& cfg) {
  return MinimaxQueryCount(cfg.Axis());
}

std::vector<std::vector<Interval>> PlantedGrid(const MultidimConfig& cfg) {
  return std::vector<std::vector<Interval>>(cfg.d, ExtractPlantedCandidates(cfg.Axis()));
}

int64_t CoveringNumberProduct(std::span<const std::vector<double>> axes, double radius) {
  int64_t product = 1;
  for (const auto& axis : axes) product *= CoveringNumber1d(axis, radius);
  return product;
}

AuditReport AuditMultidim(const MultidimConfig& cfg, const AuditOptions& options) {
  const MinimaxConfig axis = cfg.Axis();
  axis.Validate();
  if (options.trials < 1) throw DomainError("audit needs at least one trial");
  const auto grid = PlantedGrid(cfg);
  const int64_t expected = MultidimQueryCount(cfg);
  const int64_t n = options.trials;

  struct Trial {
    bool accurate = false;
    bool success = false;
    int64_t count = 0;
    std::vector<std::vector<double>> queries;
  };
  std::vector<Trial> trials(n);
  ParallelFor(n, options.threads, [&](int64_t t) {
    Rng rng = MakeStream(options.seed, static_cast<uint64_t>(t));
    std::vector<PiecewiseLinearConvex> coords;
    for (int i = 0; i < cfg.d; ++i) {
      const auto& cands = grid[i];
      const size_t c = std::min(cands.size() - 1,
                                static_cast<size_t>(Uniform01(rng) * cands.size()));
      double u = 0.0;
      while (u == 0.0) u = Uniform01(rng);
      coords.push_back(MakeSandwichFunction(cands[c].lo + u * cfg.eps,
                                            0.5 + Uniform01(rng)));
    }
    const SeparableFunction f(std::move(coords));
    const std::vector<double> truth = f.Minimizer();
    MultidimResult run = RunMinimaxD(cfg, f.AsOracle(), options.seed);
    Trial& out = trials[t];
    out.accurate = true;
    out.success = true;
    for (int i = 0; i < cfg.d; ++i) {
      out.accurate = out.accurate && std::abs(run.estimate[i] - truth[i]) <= 0.5 * cfg.eps;
      const AdversaryView view =
          AdversaryView::Of(run.transcript.Axis(i), cfg.eps, cfg.delta, axis.L);
      out.success = out.success &&
                    std::abs(GuessPairAdversary(view, rng) - truth[i]) <= 0.5 * cfg.delta;
    }
    out.count = run.transcript.ReportedCount();
    out.queries = run.transcript.queries();
  });

  AuditReport report;
  report.setting = "multidim";
  report.params = {{"eps", cfg.eps}, {"delta", cfg.delta}, {"L", cfg.L},
                   {"d", cfg.d},     {"seed", options.seed}};
  report.trials = n;
  report.theory = MinimaxBounds(cfg.eps, cfg.delta, axis.L);
  int64_t accurate = 0, successes = 0;
  bool invariant = true;
  RunningStats counts;
  for (const Trial& t : trials) {
    accurate += t.accurate;
    successes += t.success;
    counts.Add(static_cast<double>(t.count));
    invariant = invariant && t.queries == trials[0].queries;
  }
  report.accuracy_rate = static_cast<double>(accurate) / n;
  report.query_count = {static_cast<int64_t>(counts.min()),
                        static_cast<int64_t>(counts.max()), counts.mean()};
  report.adversaries.push_back(
      TallyAdversary("guess_pair_product", successes, n, cfg.L, options.slack_se, true));
  report.gates.push_back({"accuracy", accurate == n, "linf error <= eps/2"});
  report.gates.push_back({"count_formula",
                          report.query_count.min == expected &&
                              report.query_count.max == expected,
                          std::to_string(report.query_count.max) +
                              " == " + std::to_string(expected)});
  report.gates.push_back({"transcript_invariance", invariant,
                          invariant ? "all query sequences identical"
                                    : "query sequences differ across truths"});
  report.extras = {{"axis_level", axis.L}, {"expected_count", expected}};
  FinishReport(report);
  return report;
}

}  // namespace privopt
