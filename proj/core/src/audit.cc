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

#include "privopt/audit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "privopt/adversary.h"
#include "privopt/convex_fn.h"
#include "privopt/dp_prior.h"
#include "privopt/errors.h"
#include "privopt/marginal_nu.h"
#include "privopt/parallel.h"
#include "privopt/random.h"
#include "privopt/stats.h"

namespace privopt {
namespace {

// Bound comparisons are on real-valued formulas; integer counts are
// compared against them with this much rounding room.
constexpr double kBoundSlack = 1e-9;
// Sound decision level for the chi-square gates.
constexpr double kTestLevel = 1e-3;

double PositiveUniform(Rng& rng) {
  double u = 0.0;
  while (u == 0.0) u = Uniform01(rng);
  return u;
}

std::string Describe(double value, const char* relation, double bound) {
  std::ostringstream out;
  out.precision(10);
  out << value << ' ' << relation << ' ' << bound;
  return out.str();
}

}  // namespace

Bounds MinimaxBounds(double eps, double delta, int L) {
  MinimaxConfig{eps, delta, L}.Validate();
  const double ratio = std::log2(delta / eps);
  Bounds b;
  b.lower = 2.0 * L + ratio - 2.0;
  b.upper = L >= std::log2(1.0 / delta) - kBoundSlack ? 2.0 * L + ratio
                                                      : L + std::log2(1.0 / eps);
  return b;
}

Bounds BayesBounds(double eps, double delta, int L, double alpha) {
  BayesConfig{eps, delta, L, alpha}.Validate();
  const double ratio = std::log2(delta / eps);
  Bounds b;
  b.lower = std::exp2(-alpha) * L * ratio;
  b.upper = L * ratio + GapConstant(alpha) * L + std::log2(1.0 / (delta * L));
  return b;
}

const AdversaryStats* AuditReport::Find(const std::string& adversary) const {
  for (const auto& a : adversaries) {
    if (a.name == adversary) return &a;
  }
  return nullptr;
}

const Gate* AuditReport::FindGate(const std::string& gate) const {
  for (const auto& g : gates) {
    if (g.name == gate) return &g;
  }
  return nullptr;
}

nlohmann::json AuditReport::ToJson() const {
  nlohmann::json adv = nlohmann::json::object();
  for (const auto& a : adversaries) {
    adv[a.name] = {{"successes", a.successes},
                   {"trials", a.trials},
                   {"rate", a.rate},
                   {"wilson_ci", {a.wilson.lo, a.wilson.hi}},
                   {"threshold", a.threshold},
                   {"gated", a.gated},
                   {"pass", a.pass}};
  }
  nlohmann::json gate_list = nlohmann::json::array();
  for (const auto& g : gates) {
    gate_list.push_back({{"name", g.name}, {"pass", g.pass}, {"detail", g.detail}});
  }
  return {{"setting", setting},
          {"params", params},
          {"trials", trials},
          {"accuracy_rate", accuracy_rate},
          {"adversary_success", adv},
          {"query_count",
           {{"min", query_count.min}, {"max", query_count.max}, {"mean", query_count.mean}}},
          {"theory", {{"lower_bound", theory.lower}, {"upper_bound", theory.upper}}},
          {"gates", gate_list},
          {"extras", extras},
          {"pass", pass}};
}

std::string AuditReport::TrialsJsonLines() const {
  std::string out;
  for (const auto& record : trial_records) {
    out += record.dump();
    out += '\n';
  }
  return out;
}

AdversaryStats TallyAdversary(std::string name, int64_t successes, int64_t trials,
                              int L, double slack_se, bool gated) {
  AdversaryStats s;
  s.name = std::move(name);
  s.successes = successes;
  s.trials = trials;
  s.rate = trials > 0 ? static_cast<double>(successes) / trials : 0.0;
  s.wilson = WilsonInterval(successes, trials);
  const double target = 1.0 / L;
  s.threshold = target + slack_se * BinomialStandardError(target, trials);
  s.gated = gated;
  s.pass = !gated || s.wilson.hi <= s.threshold;
  return s;
}

void FinishReport(AuditReport& report) {
  for (const auto& a : report.adversaries) {
    if (a.gated) {
      report.gates.push_back({"privacy:" + a.name, a.pass,
                              Describe(a.wilson.hi, "<=", a.threshold)});
    }
  }
  report.pass = true;
  for (const auto& g : report.gates) report.pass = report.pass && g.pass;
}

AuditReport AuditMinimax(const MinimaxConfig& cfg, const AuditOptions& options,
                         TruthSampler sampler) {
  cfg.Validate();
  if (options.trials < 1) throw DomainError("audit needs at least one trial");
  const auto candidates = ExtractPlantedCandidates(cfg);
  const int64_t expected_count = MinimaxQueryCount(cfg);
  const int64_t n = options.trials;

  struct Trial {
    double truth = 0.0;
    double estimate = 0.0;
    int64_t count = 0;
    std::vector<double> queries;
    bool accurate = false;
    bool success[3] = {false, false, false};
  };
  std::vector<Trial> trials(n);
  ParallelFor(n, options.threads, [&](int64_t i) {
    Rng rng = MakeStream(options.seed, static_cast<uint64_t>(i));
    Trial& t = trials[i];
    if (sampler == TruthSampler::kPlanted) {
      const size_t c =
          std::min(candidates.size() - 1,
                   static_cast<size_t>(Uniform01(rng) * candidates.size()));
      t.truth = candidates[c].lo + PositiveUniform(rng) * cfg.eps;
    } else {
      t.truth = PositiveUniform(rng);
    }
    const double slope = 0.5 + Uniform01(rng);
    const PiecewiseLinearConvex f = MakeSandwichFunction(t.truth, slope);
    MinimaxResult run = RunMinimax(cfg, f.AsOracle(), options.seed);
    t.estimate = run.estimate;
    t.count = run.transcript.ReportedCount();
    t.accurate = std::abs(t.estimate - t.truth) <= 0.5 * cfg.eps;
    const AdversaryView view = AdversaryView::Of(run.transcript, cfg.eps, cfg.delta, cfg.L);
    const std::vector<double> endpoints = GuessPairEndpoints(view);
    const double guesses[3] = {
        GuessPairAdversary(view, rng),
        endpoints.empty() ? ProportionalSampling(view, rng)
                          : CoveringSetAdversary(endpoints, 0.5 * cfg.delta, rng),
        ProportionalSampling(view, rng)};
    for (int a = 0; a < 3; ++a) {
      t.success[a] = std::abs(guesses[a] - t.truth) <= 0.5 * cfg.delta;
    }
    t.queries.assign(view.queries.begin(), view.queries.end());
  });

  AuditReport report;
  report.setting = "minimax";
  report.params = {{"eps", cfg.eps},
                   {"delta", cfg.delta},
                   {"L", cfg.L},
                   {"truths", sampler == TruthSampler::kPlanted ? "planted" : "uniform"},
                   {"seed", options.seed}};
  report.trials = n;
  report.theory = MinimaxBounds(cfg.eps, cfg.delta, cfg.L);

  int64_t accurate = 0, successes[3] = {0, 0, 0};
  bool invariant = true;
  RunningStats counts;
  for (int64_t i = 0; i < n; ++i) {
    const Trial& t = trials[i];
    accurate += t.accurate;
    for (int a = 0; a < 3; ++a) successes[a] += t.success[a];
    counts.Add(static_cast<double>(t.count));
    invariant = invariant && t.queries == trials[0].queries;
    if (options.keep_trials) {
      report.trial_records.push_back({{"trial", i},
                                      {"truth", t.truth},
                                      {"estimate", t.estimate},
                                      {"queries", t.count},
                                      {"guess_pair", t.success[0]},
                                      {"covering_set", t.success[1]},
                                      {"proportional_sampling", t.success[2]}});
    }
  }
  report.accuracy_rate = static_cast<double>(accurate) / n;
  report.query_count = {static_cast<int64_t>(counts.min()),
                        static_cast<int64_t>(counts.max()), counts.mean()};

  const bool planted = sampler == TruthSampler::kPlanted;
  const char* names[3] = {"guess_pair", "covering_set", "proportional_sampling"};
  for (int a = 0; a < 3; ++a) {
    report.adversaries.push_back(
        TallyAdversary(names[a], successes[a], n, cfg.L, options.slack_se, planted));
  }
  report.gates.push_back({"accuracy", accurate == n,
                          Describe(report.accuracy_rate, "==", 1.0)});
  const double upper = std::ceil(report.theory.upper - kBoundSlack);
  report.gates.push_back({"count_upper", report.query_count.max <= upper,
                          Describe(report.query_count.max, "<=", upper)});
  report.gates.push_back(
      {"count_lower", report.query_count.min >= report.theory.lower - kBoundSlack,
       Describe(report.query_count.min, ">=", report.theory.lower)});
  report.gates.push_back({"count_formula",
                          report.query_count.min == expected_count &&
                              report.query_count.max == expected_count,
                          Describe(report.query_count.max, "==", expected_count)});
  if (planted) {
    report.gates.push_back({"transcript_invariance", invariant,
                            invariant ? "all query sequences identical"
                                      : "query sequences differ across truths"});
  }
  report.extras = {{"expected_count", expected_count},
                   {"transcripts_identical", invariant},
                   {"planted_candidates", candidates.size()}};
  FinishReport(report);
  return report;
}

AuditReport AuditBayes(const BayesConfig& cfg, const AuditOptions& options) {
  cfg.Validate();
  if (options.trials < 1) throw DomainError("audit needs at least one trial");
  const int64_t n = options.trials;
  const int L = cfg.L;
  const MarginalNu nu(cfg.alpha);
  const double count_bound = BayesCountBound(cfg);

  struct Trial {
    double truth = 0.0;
    double estimate = 0.0;
    int64_t count = 0;
    int64_t window = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    int j_star = 1;
    int category = 0;
    bool accurate = false;
    bool success[2] = {false, false};
  };
  std::vector<Trial> trials(n);
  ParallelFor(n, options.threads, [&](int64_t i) {
    Rng rng = MakeStream(options.seed, static_cast<uint64_t>(i));
    Trial& t = trials[i];
    const DPFunctionSample sample = SampleStickBreaking(cfg.alpha, rng);
    t.truth = sample.minimizer();
    BayesResult run = RunBayes(cfg, sample.AsOracle(), rng, options.seed);
    t.estimate = run.estimate;
    t.count = run.transcript.ReportedCount();
    t.accurate = std::abs(t.estimate - t.truth) <= 0.5 * cfg.eps;
    for (double q : run.transcript.queries()) {
      t.window += std::abs(q - t.truth) <= 0.5 * cfg.delta;
    }
    const PhasePlan& plan = run.plan;
    t.j_star = plan.phase2.j_star;
    std::vector<double> xs = plan.phase4.decoys;
    xs[t.j_star - 1] = t.truth;
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    for (size_t j = 1; j < sorted.size(); ++j) {
      t.min_gap = std::min(t.min_gap, sorted[j] - sorted[j - 1]);
    }
    // Position of X_1 inside J_1 in nu-probability, by quartile.
    const double rel = (nu.Cdf(xs[0]) - plan.phase3.kept_p_lo[0]) / plan.phase3.kept_mass;
    const int quartile = std::clamp(static_cast<int>(rel * 4.0), 0, 3);
    t.category = (plan.phase3.left_half ? 0 : 4) + quartile;

    const AdversaryView view =
        AdversaryView::Of(run.transcript, cfg.eps, cfg.delta, cfg.L, cfg.alpha);
    const double guesses[2] = {ProportionalSampling(view, rng),
                               ReconstructionAdversary(view, rng)};
    for (int a = 0; a < 2; ++a) {
      t.success[a] = std::abs(guesses[a] - t.truth) <= 0.5 * cfg.delta;
    }
  });

  AuditReport report;
  report.setting = "bayes";
  report.params = {{"eps", cfg.eps},
                   {"delta", cfg.delta},
                   {"L", cfg.L},
                   {"alpha", cfg.alpha},
                   {"seed", options.seed}};
  report.trials = n;
  report.theory = BayesBounds(cfg.eps, cfg.delta, cfg.L, cfg.alpha);

  int64_t accurate = 0, successes[2] = {0, 0};
  RunningStats counts, windows;
  double min_gap = std::numeric_limits<double>::infinity();
  std::vector<int64_t> j_counts(L, 0);
  std::vector<std::vector<int64_t>> table(8, std::vector<int64_t>(L, 0));
  for (int64_t i = 0; i < n; ++i) {
    const Trial& t = trials[i];
    accurate += t.accurate;
    for (int a = 0; a < 2; ++a) successes[a] += t.success[a];
    counts.Add(static_cast<double>(t.count));
    windows.Add(static_cast<double>(t.window));
    if (L > 1) min_gap = std::min(min_gap, t.min_gap);
    j_counts[t.j_star - 1] += 1;
    table[t.category][t.j_star - 1] += 1;
    if (options.keep_trials) {
      report.trial_records.push_back({{"trial", i},
                                      {"truth", t.truth},
                                      {"estimate", t.estimate},
                                      {"queries", t.count},
                                      {"window", t.window},
                                      {"j_star", t.j_star},
                                      {"proportional_sampling", t.success[0]},
                                      {"reconstruction", t.success[1]}});
    }
  }
  report.accuracy_rate = static_cast<double>(accurate) / n;
  report.query_count = {static_cast<int64_t>(counts.min()),
                        static_cast<int64_t>(counts.max()), counts.mean()};
  report.adversaries.push_back(TallyAdversary("proportional_sampling", successes[0], n,
                                              L, options.slack_se, true));
  report.adversaries.push_back(
      TallyAdversary("reconstruction", successes[1], n, L, options.slack_se, true));

  report.gates.push_back({"accuracy", accurate == n,
                          Describe(report.accuracy_rate, "==", 1.0)});
  report.gates.push_back({"count_bound", report.query_count.max <= count_bound,
                          Describe(report.query_count.max, "<=", count_bound)});
  report.gates.push_back(
      {"count_upper", report.query_count.max <= report.theory.upper + kBoundSlack,
       Describe(report.query_count.max, "<=", report.theory.upper)});
  const double separation = cfg.delta * (1.0 - 1e-6);
  if (L > 1) {
    report.gates.push_back({"decoy_separation", min_gap > separation,
                            Describe(min_gap, ">", separation)});
  }
  TestResult uniform, independence;
  if (L > 1) {
    uniform = ChiSquareUniform(j_counts);
    independence = ChiSquareIndependence(table);
    report.gates.push_back({"truth_index_uniform", uniform.p_value > kTestLevel,
                            Describe(uniform.p_value, ">", kTestLevel)});
    report.gates.push_back({"truth_index_independent",
                            independence.p_value > kTestLevel,
                            Describe(independence.p_value, ">", kTestLevel)});
  }
  const double window_bound =
      L * (windows.mean() - options.slack_se * windows.standard_error());
  report.gates.push_back({"window_inequality", counts.mean() >= window_bound,
                          Describe(counts.mean(), ">=", window_bound)});

  report.extras = {{"count_bound", count_bound},
                   {"c1_witness", std::exp2(-cfg.alpha)},
                   {"c2", GapConstant(cfg.alpha)},
                   {"phase1_steps", Phase1Steps(cfg)},
                   {"window_mean", windows.mean()},
                   {"window_se", windows.standard_error()},
                   {"window_bound", window_bound},
                   {"mean_queries", counts.mean()},
                   {"min_separation", L > 1 ? min_gap : 0.0},
                   {"j_star_counts", j_counts},
                   {"uniform_chi2", {{"statistic", uniform.statistic},
                                     {"dof", uniform.dof},
                                     {"p_value", uniform.p_value}}},
                   {"independence_chi2", {{"statistic", independence.statistic},
                                          {"dof", independence.dof},
                                          {"p_value", independence.p_value}}}};
  FinishReport(report);
  return report;
}

}  // namespace privopt
