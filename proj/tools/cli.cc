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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "privopt/adversary.h"
#include "privopt/audit.h"
#include "privopt/convex_fn.h"
#include "privopt/dp_checks.h"
#include "privopt/dp_prior.h"
#include "privopt/errors.h"
#include "privopt/learner_bayes.h"
#include "privopt/learner_minimax.h"
#include "privopt/marginal_nu.h"
#include "privopt/multidim.h"
#include "privopt/random.h"

namespace privopt::cli {

using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& AllowedParams() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"simulate-minimax", {"eps", "delta", "L", "truth"}},
      {"simulate-bayes",
       {"eps", "delta", "L", "alpha", "gamma", "plot_prior", "samples", "grid_points"}},
      {"audit", {"setting", "truths", "eps", "delta", "L", "alpha", "d"}},
      {"verify-lemma3", {"alpha", "grid_points", "fd_step"}},
      {"verify-dp", {"alpha", "partition"}},
      {"bench-complexity", {"setting", "eps", "delta", "alpha", "sweep_L"}},
      {"multidim", {"eps", "delta", "L", "d"}},
  };
  return table;
}

int64_t DefaultTrials(const std::string& command) {
  if (command == "audit") return 10000;
  if (command == "verify-dp") return 100000;
  if (command == "bench-complexity" || command == "multidim") return 1000;
  return 1;
}

// Setting-dependent defaults; only keys the user left unset are filled.
void ApplyDefaults(const std::string& command, json& p) {
  auto set = [&p](const char* key, json value) {
    if (!p.contains(key)) p[key] = std::move(value);
  };
  const double e10 = std::ldexp(1.0, -10);
  const double e6 = std::ldexp(1.0, -6);
  std::string setting = "minimax";
  if (command == "simulate-bayes") setting = "bayes";
  if (command == "multidim") setting = "multidim";
  if (command == "audit" || command == "bench-complexity") {
    set("setting", "minimax");
    setting = p["setting"].get<std::string>();
  }
  if (command == "verify-lemma3") {
    set("alpha", 1.0);
    set("grid_points", 97);
    set("fd_step", 1e-4);
    return;
  }
  if (command == "verify-dp") {
    set("alpha", 1.0);
    set("partition", json::array({0.25, 0.5, 0.75}));
    return;
  }
  if (command == "bench-complexity") {
    set("sweep_L", json::array({1, 2, 4, 8}));
    if (setting == "bayes") {
      set("eps", std::ldexp(1.0, -13));
      set("delta", std::ldexp(1.0, -9));
      set("alpha", 0.5);
    } else {
      set("eps", e10);
      set("delta", std::ldexp(1.0, -4));
    }
    return;
  }
  if (setting == "bayes") {
    set("eps", std::ldexp(1.0, -12));
    set("delta", std::ldexp(1.0, -8));
    set("L", 2);
    set("alpha", 0.5);
  } else if (setting == "multidim") {
    set("eps", e10);
    set("delta", e6);
    set("L", 16);
    set("d", 2);
  } else {
    set("eps", e10);
    set("delta", e6);
    set("L", 4);
  }
  if (command == "audit" && setting == "minimax") set("truths", "planted");
  if (command == "simulate-bayes") {
    set("plot_prior", false);
    set("samples", 5);
    set("grid_points", 201);
  }
}

double Real(const json& p, const char* key) {
  const json& v = p.at(key);
  if (!v.is_number()) throw DomainError(std::string("parameter ") + key + " must be a number");
  return v.get<double>();
}

int64_t Integer(const json& p, const char* key) {
  const json& v = p.at(key);
  if (v.is_number_integer()) return v.get<int64_t>();
  if (v.is_number() && std::floor(v.get<double>()) == v.get<double>()) {
    return static_cast<int64_t>(v.get<double>());
  }
  throw DomainError(std::string("parameter ") + key + " must be an integer");
}

std::string Text(const json& p, const char* key) {
  const json& v = p.at(key);
  if (!v.is_string()) throw DomainError(std::string("parameter ") + key + " must be a string");
  return v.get<std::string>();
}

std::vector<double> RealList(const json& p, const char* key) {
  const json& v = p.at(key);
  if (!v.is_array()) throw DomainError(std::string("parameter ") + key + " must be a list");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) throw DomainError(std::string("parameter ") + key + " must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

int IntParam(const json& p, const char* key, int64_t lo) {
  const int64_t v = Integer(p, key);
  if (v < lo || v > 1'000'000'000) {
    throw DomainError(std::string("parameter ") + key + " must be >= " + std::to_string(lo));
  }
  return static_cast<int>(v);
}

MinimaxConfig Minimax(const json& p) {
  return {Real(p, "eps"), Real(p, "delta"), IntParam(p, "L", 1)};
}

BayesConfig Bayes(const json& p) {
  return {Real(p, "eps"), Real(p, "delta"), IntParam(p, "L", 1), Real(p, "alpha")};
}

MultidimConfig Multidim(const json& p) {
  return {Real(p, "eps"), Real(p, "delta"), IntParam(p, "L", 1), IntParam(p, "d", 1)};
}

std::vector<double> Lemma3Grid(int n) {
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = (i + 1.0) / (n + 1.0);
  return grid;
}

void RequireAlpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("concentration alpha must be positive");
  }
}

// Checks every precondition of the command without doing any work.
void Validate(const ExperimentConfig& cfg) {
  const json& p = cfg.params;
  if (cfg.threads < 0) throw DomainError("threads must be >= 0");
  if (cfg.trials < 1) throw DomainError("trials must be >= 1");
  const std::string& c = cfg.command;
  if (c == "simulate-minimax") {
    Minimax(p).Validate();
    if (p.contains("truth")) {
      const double x = Real(p, "truth");
      if (!(x > 0.0 && x < 1.0)) throw DomainError("truth must lie in (0,1)");
    }
  } else if (c == "simulate-bayes") {
    Bayes(p).Validate();
    if (p.contains("gamma")) {
      const double g = Real(p, "gamma");
      if (!(g > 0.0 && g <= 1.0)) throw DomainError("gamma must lie in (0,1]");
    }
    if (!p.at("plot_prior").is_boolean()) throw DomainError("plot_prior must be a boolean");
    IntParam(p, "samples", 1);
    IntParam(p, "grid_points", 2);
  } else if (c == "audit") {
    const std::string setting = Text(p, "setting");
    if (setting == "minimax") {
      Minimax(p).Validate();
      const std::string truths = Text(p, "truths");
      if (truths != "planted" && truths != "uniform") {
        throw DomainError("truths must be planted or uniform");
      }
    } else if (setting == "bayes") {
      Bayes(p).Validate();
    } else if (setting == "multidim") {
      Multidim(p).Validate();
    } else {
      throw DomainError("setting must be minimax, bayes or multidim");
    }
    for (const char* key : {"truths", "alpha", "d"}) {
      const bool used = (std::string(key) == "truths" && setting == "minimax") ||
                        (std::string(key) == "alpha" && setting == "bayes") ||
                        (std::string(key) == "d" && setting == "multidim");
      if (p.contains(key) && !used) {
        throw DomainError(std::string("parameter ") + key + " is not used by the " + setting +
                          " audit");
      }
    }
  } else if (c == "verify-lemma3") {
    RequireAlpha(Real(p, "alpha"));
    const int n = IntParam(p, "grid_points", 1);
    const double h = Real(p, "fd_step");
    if (!(h > 0.0 && h < 1.0 / (n + 1.0))) {
      throw DomainError("fd_step must lie in (0, 1/(grid_points+1))");
    }
  } else if (c == "verify-dp") {
    RequireAlpha(Real(p, "alpha"));
    if (cfg.trials < 10000) throw DomainError("verify-dp needs trials >= 10000");
    const auto cuts = RealList(p, "partition");
    for (size_t i = 0; i < cuts.size(); ++i) {
      if (!(cuts[i] > 0.0 && cuts[i] < 1.0) || (i > 0 && !(cuts[i] > cuts[i - 1]))) {
        throw DomainError("partition cuts must be increasing inside (0,1)");
      }
    }
  } else if (c == "bench-complexity") {
    const std::string setting = Text(p, "setting");
    if (setting != "minimax" && setting != "bayes") {
      throw DomainError("setting must be minimax or bayes");
    }
    if (setting == "minimax" && p.contains("alpha")) {
      throw DomainError("parameter alpha is not used by the minimax sweep");
    }
    const auto sweep = RealList(p, "sweep_L");
    if (sweep.empty()) throw DomainError("sweep_L must not be empty");
    for (double L : sweep) {
      if (!(L >= 1 && std::floor(L) == L && L <= 1e6)) {
        throw DomainError("sweep_L entries must be positive integers");
      }
      json row = p;
      row["L"] = static_cast<int>(L);
      if (setting == "minimax") {
        Minimax(row).Validate();
      } else {
        Bayes(row).Validate();
      }
    }
  } else if (c == "multidim") {
    Multidim(p).Validate();
  }
}

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(std::ostream* os, const ExperimentConfig& cfg, const std::vector<std::string>& header)
      : os_(os) {
    if (!os_) return;
    *os_ << "# " << cfg.ToJson().dump() << '\n';
    Row(header);
  }
  void Row(const std::vector<std::string>& cells) {
    if (!os_) return;
    for (size_t i = 0; i < cells.size(); ++i) *os_ << (i ? "," : "") << cells[i];
    *os_ << '\n';
  }

 private:
  std::ostream* os_;
};

struct Outputs {
  std::ofstream summary_file, trials_file, csv_file;
  std::ostream* summary = nullptr;
  std::ostream* trials = nullptr;
  std::ostream* csv = nullptr;
};

void Open(std::ofstream& f, const std::string& path, std::ostream*& target) {
  if (path.empty()) return;
  f.open(path, std::ios::binary);
  if (!f) throw DomainError("cannot open output file " + path);
  target = &f;
}

AuditOptions Options(const ExperimentConfig& cfg, bool keep_trials) {
  AuditOptions o;
  o.trials = cfg.trials;
  o.seed = cfg.seed;
  o.threads = cfg.threads;
  o.keep_trials = keep_trials;
  return o;
}

void EmitTranscript(const QueryTranscript& t, Outputs& io, const ExperimentConfig& cfg) {
  if (io.trials) *io.trials << t.ToJsonLines();
  CsvWriter csv(io.csv, cfg, {"i", "q", "phase"});
  for (size_t i = 0; i < t.size(); ++i) {
    csv.Row({std::to_string(i), Num(t.queries()[i]), std::string(PhaseName(t.phases()[i]))});
  }
}

json AdversaryCsv(const AuditReport& r, Outputs& io, const ExperimentConfig& cfg, int L) {
  CsvWriter csv(io.csv, cfg,
                {"adversary", "successes", "trials", "rate", "wilson_lo", "wilson_hi",
                 "threshold", "inverse_L", "gated", "pass"});
  for (const auto& a : r.adversaries) {
    csv.Row({a.name, std::to_string(a.successes), std::to_string(a.trials), Num(a.rate),
             Num(a.wilson.lo), Num(a.wilson.hi), Num(a.threshold), Num(1.0 / L),
             a.gated ? "true" : "false", a.pass ? "true" : "false"});
  }
  return r.ToJson();
}

bool SimulateMinimax(const ExperimentConfig& cfg, Outputs& io, json& result) {
  const MinimaxConfig mc = Minimax(cfg.params);
  double x = 0.0;
  if (cfg.params.contains("truth")) {
    x = Real(cfg.params, "truth");
  } else {
    Rng rng = MakeStream(cfg.seed, 0);
    while (x == 0.0) x = Uniform01(rng);
  }
  const auto run = RunMinimax(mc, MakeSandwichFunction(x).AsOracle(), cfg.seed);
  const Bounds b = MinimaxBounds(mc.eps, mc.delta, mc.L);
  const bool accurate = std::abs(run.estimate - x) <= mc.eps / 2;
  const int64_t count = run.transcript.ReportedCount();
  result = {{"truth", x},
            {"estimate", run.estimate},
            {"accurate", accurate},
            {"regime", mc.grid_regime() ? "grid" : "bisection"},
            {"query_count", count},
            {"submitted_queries", run.transcript.size()},
            {"theory", {{"lower_bound", b.lower}, {"upper_bound", b.upper}}},
            {"queries", run.transcript.queries()}};
  EmitTranscript(run.transcript, io, cfg);
  return accurate && count <= std::ceil(b.upper - 1e-9);
}

bool SimulateBayes(const ExperimentConfig& cfg, Outputs& io, json& result) {
  const json& p = cfg.params;
  const BayesConfig bc = Bayes(p);
  PriorOptions prior;
  if (p.contains("gamma")) {
    const double g = Real(p, "gamma");
    prior.gradient_scale_quantile = [g](double) { return g; };
  }
  Rng rng = MakeStream(cfg.seed, 0);
  const auto f = SampleStickBreaking(bc.alpha, rng, prior);
  const auto run = RunBayes(bc, f.AsOracle(), rng, cfg.seed);
  const bool accurate = std::abs(run.estimate - f.minimizer()) <= bc.eps / 2;
  const double bound = BayesCountBound(bc);
  const auto& t = run.transcript;
  json decoys = json::array();
  for (double d : run.plan.phase4.decoys) {
    decoys.push_back(std::isnan(d) ? json(nullptr) : json(d));
  }
  result = {{"minimizer", f.minimizer()},
            {"gamma_plus", f.gamma_plus()},
            {"estimate", run.estimate},
            {"accurate", accurate},
            {"query_count", t.size()},
            {"count_bound", bound},
            {"phase_counts",
             {{"p1", t.CountPhase(QueryPhase::kP1)},
              {"p2", t.CountPhase(QueryPhase::kP2)},
              {"p3", t.CountPhase(QueryPhase::kP3)},
              {"p4", t.CountPhase(QueryPhase::kP4)}}},
            {"truth_index", run.plan.phase2.j_star},
            {"decoys", decoys},
            {"queries", t.queries()}};
  if (p.at("plot_prior").get<bool>()) {
    if (io.trials) *io.trials << t.ToJsonLines();
    const int samples = IntParam(p, "samples", 1);
    const auto grid = UniformGrid(0.0, 1.0, IntParam(p, "grid_points", 2));
    CsvWriter csv(io.csv, cfg, {"sample", "t", "F", "minimizer", "largest_stick"});
    json draws = json::array();
    for (int s = 0; s < samples; ++s) {
      Rng draw_rng = MakeStream(cfg.seed, 1 + static_cast<uint64_t>(s));
      const auto g = SampleStickBreaking(bc.alpha, draw_rng, prior);
      draws.push_back({{"minimizer", g.minimizer()},
                       {"largest_stick", g.largest_stick()},
                       {"atoms", g.atoms().size()}});
      for (double x : grid) {
        csv.Row({std::to_string(s), Num(x), Num(g.Cdf(x)), Num(g.minimizer()),
                 Num(g.largest_stick())});
      }
    }
    result["prior_samples"] = draws;
  } else {
    EmitTranscript(t, io, cfg);
  }
  return accurate && static_cast<double>(t.size()) <= bound;
}

bool Audit(const ExperimentConfig& cfg, Outputs& io, json& result) {
  const json& p = cfg.params;
  const std::string setting = Text(p, "setting");
  const AuditOptions opts = Options(cfg, io.trials != nullptr);
  AuditReport report;
  int L = IntParam(p, "L", 1);
  if (setting == "minimax") {
    const auto sampler =
        Text(p, "truths") == "uniform" ? TruthSampler::kUniform : TruthSampler::kPlanted;
    report = AuditMinimax(Minimax(p), opts, sampler);
  } else if (setting == "bayes") {
    report = AuditBayes(Bayes(p), opts);
  } else {
    report = AuditMultidim(Multidim(p), opts);
  }
  if (io.trials) *io.trials << report.TrialsJsonLines();
  result = AdversaryCsv(report, io, cfg, L);
  return report.pass;
}

bool VerifyLemma(const ExperimentConfig& cfg, Outputs& io, json& result) {
  const json& p = cfg.params;
  const auto grid = Lemma3Grid(IntParam(p, "grid_points", 1));
  const auto report = VerifyLemma3(Real(p, "alpha"), grid, Real(p, "fd_step"));
  result = report.ToJson();
  CsvWriter csv(io.csv, cfg, {"t", "derivative", "lower_bound", "upper_bound", "pass"});
  for (size_t i = 0; i < report.grid.size(); ++i) {
    csv.Row({Num(report.grid[i]), Num(report.derivatives[i]), Num(report.lower_bound),
             Num(report.upper_bound), report.point_pass[i] ? "true" : "false"});
  }
  return report.pass;
}

bool VerifyDp(const ExperimentConfig& cfg, Outputs& io, json& result) {
  const double alpha = Real(cfg.params, "alpha");
  DpCheckOptions opts;
  opts.trials = cfg.trials;
  opts.seed = cfg.seed;
  opts.threads = cfg.threads;
  const auto cuts = RealList(cfg.params, "partition");
  // For vanishing alpha, Beta(alpha t, alpha (1-t)) draws are exactly 0 or 1
  // in double precision, so the continuous KS marginals are skipped and the
  // median is checked against the uniform law of a single atom.
  const bool tiny = alpha <= 1e-6;
  std::vector<DpCheckReport> reports;
  if (!tiny) reports.push_back(CheckDpMarginals(alpha, cuts, opts));
  reports.push_back(CheckStickLengths(alpha, opts));
  reports.push_back(CheckMinimizerLaw(alpha, opts, tiny));
  CsvWriter csv(io.csv, cfg,
                {"check", "name", "point", "statistic", "p_value", "threshold", "pass"});
  json list = json::array();
  bool pass = true;
  for (const auto& r : reports) {
    list.push_back(r.ToJson());
    pass = pass && r.pass;
    for (const auto& s : r.statistics) {
      csv.Row({r.check, s.name, Num(s.point), Num(s.statistic), Num(s.p_value),
               Num(s.threshold), s.pass ? "true" : "false"});
    }
  }
  result = {{"reports", list}};
  if (tiny) result["skipped"] = {"dp_marginals"};
  return pass;
}

bool BenchComplexity(const ExperimentConfig& cfg, Outputs& io, json& result) {
  const json& p = cfg.params;
  const bool minimax = Text(p, "setting") == "minimax";
  const AuditOptions opts = Options(cfg, false);
  std::vector<std::string> header =
      minimax ? std::vector<std::string>{"L", "regime", "count", "branch_formula",
                                         "lower_bound", "within_bounds", "guess_pair_rate",
                                         "covering_set_rate", "inverse_L", "audit_pass"}
              : std::vector<std::string>{"L", "count_min", "count_max", "count_mean",
                                         "upper_bound", "count_bound", "within_bounds",
                                         "reconstruction_rate", "proportional_rate",
                                         "inverse_L", "audit_pass"};
  CsvWriter csv(io.csv, cfg, header);
  json rows = json::array();
  bool pass = true;
  for (double Ld : RealList(p, "sweep_L")) {
    json q = p;
    q["L"] = static_cast<int>(Ld);
    const int L = static_cast<int>(Ld);
    if (minimax) {
      const MinimaxConfig mc = Minimax(q);
      const AuditReport r = AuditMinimax(mc, opts);
      const int64_t count = r.query_count.max;
      const bool within = r.query_count.min == count &&
                          count <= std::ceil(r.theory.upper - 1e-9) &&
                          count >= r.theory.lower;
      pass = pass && within && r.pass;
      rows.push_back({{"L", L},
                      {"regime", mc.grid_regime() ? "grid" : "bisection"},
                      {"count", count},
                      {"branch_formula", r.theory.upper},
                      {"lower_bound", r.theory.lower},
                      {"within_bounds", within},
                      {"guess_pair_rate", r.Find("guess_pair")->rate},
                      {"covering_set_rate", r.Find("covering_set")->rate},
                      {"audit_pass", r.pass}});
      csv.Row({std::to_string(L), mc.grid_regime() ? "grid" : "bisection",
               std::to_string(count), Num(r.theory.upper), Num(r.theory.lower),
               within ? "true" : "false", Num(r.Find("guess_pair")->rate),
               Num(r.Find("covering_set")->rate), Num(1.0 / L), r.pass ? "true" : "false"});
    } else {
      const BayesConfig bc = Bayes(q);
      const AuditReport r = AuditBayes(bc, opts);
      const double bound = BayesCountBound(bc);
      const bool within = r.query_count.max <= bound;
      pass = pass && within && r.pass;
      rows.push_back({{"L", L},
                      {"count_min", r.query_count.min},
                      {"count_max", r.query_count.max},
                      {"count_mean", r.query_count.mean},
                      {"upper_bound", r.theory.upper},
                      {"count_bound", bound},
                      {"within_bounds", within},
                      {"reconstruction_rate", r.Find("reconstruction")->rate},
                      {"proportional_rate", r.Find("proportional_sampling")->rate},
                      {"audit_pass", r.pass}});
      csv.Row({std::to_string(L), std::to_string(r.query_count.min),
               std::to_string(r.query_count.max), Num(r.query_count.mean),
               Num(r.theory.upper), Num(bound), within ? "true" : "false",
               Num(r.Find("reconstruction")->rate),
               Num(r.Find("proportional_sampling")->rate), Num(1.0 / L),
               r.pass ? "true" : "false"});
    }
  }
  result = {{"rows", rows}};
  return pass;
}

bool MultidimCommand(const ExperimentConfig& cfg, Outputs& io, json& result) {
  const MultidimConfig mc = Multidim(cfg.params);
  Rng rng = MakeStream(cfg.seed, 0);
  std::vector<double> x(mc.d);
  std::vector<PiecewiseLinearConvex> coords;
  for (double& xi : x) {
    while (xi == 0.0) xi = Uniform01(rng);
    coords.push_back(MakeSandwichFunction(xi));
  }
  const SeparableFunction f(std::move(coords));
  const auto run = RunMinimaxD(mc, f.AsOracle(), cfg.seed);
  bool accurate = true;
  for (int a = 0; a < mc.d; ++a) accurate = accurate && std::abs(run.estimate[a] - x[a]) <= mc.eps / 2;
  const AuditReport report = AuditMultidim(mc, Options(cfg, false));
  const int64_t count = run.transcript.ReportedCount();
  result = {{"run",
             {{"truth", x},
              {"estimate", run.estimate},
              {"accurate", accurate},
              {"query_count", count},
              {"expected_count", MultidimQueryCount(mc)}}},
            {"audit", report.ToJson()}};
  if (io.trials) *io.trials << run.transcript.ToJsonLines();
  std::vector<std::string> header = {"i"};
  for (int a = 0; a < mc.d; ++a) header.push_back("q" + std::to_string(a));
  for (int a = 0; a < mc.d; ++a) header.push_back("phase" + std::to_string(a));
  CsvWriter csv(io.csv, cfg, header);
  const auto& qs = run.transcript.queries();
  for (size_t i = 0; i < qs.size(); ++i) {
    std::vector<std::string> row = {std::to_string(i)};
    for (double q : qs[i]) row.push_back(Num(q));
    for (QueryPhase ph : run.transcript.phases()[i]) row.emplace_back(PhaseName(ph));
    csv.Row(row);
  }
  return accurate && count == MultidimQueryCount(mc) && report.pass;
}

void BuildApp(CLI::App& app, std::string& command, std::string& config_path,
              std::map<std::string, std::string>& flags, std::vector<double>& sweep,
              std::vector<double>& partition, bool& plot_prior) {
  app.add_option("command", command, "Command to run")
      ->required()
      ->check(CLI::IsMember(Commands()));
  app.add_option("--config", config_path, "JSON config document; flags override it");
  const std::vector<std::pair<std::string, std::string>> scalar = {
      {"seed", "64-bit seed"},
      {"trials", "Number of Monte Carlo trials"},
      {"threads", "Worker threads (0 = hardware)"},
      {"out", "Summary JSON path (default stdout)"},
      {"trials-out", "Per-trial JSON lines path"},
      {"csv", "CSV output path"},
      {"eps", "Accuracy eps"},
      {"delta", "Privacy radius delta"},
      {"L", "Privacy level L"},
      {"alpha", "DP concentration alpha"},
      {"d", "Dimension d"},
      {"setting", "minimax, bayes or multidim"},
      {"truths", "planted or uniform (minimax audit)"},
      {"truth", "Fixed minimizer (simulate-minimax)"},
      {"gamma", "Fixed gradient scale gamma+ in (0,1]"},
      {"samples", "Prior draws for --plot-prior"},
      {"grid-points", "Grid size"},
      {"fd-step", "Finite-difference step"},
  };
  for (const auto& [name, help] : scalar) {
    app.add_option("--" + name, flags[name], help);
  }
  app.add_option("--sweep-L", sweep, "L values for bench-complexity")->delimiter(',');
  app.add_option("--partition", partition, "Cut points for verify-dp")->delimiter(',');
  app.add_flag("--plot-prior", plot_prior, "Emit sampled F trajectories as CSV");
}

json ParseNumber(const std::string& name, const std::string& text) {
  try {
    size_t used = 0;
    if (text.find_first_of(".eEnN") == std::string::npos) {
      const long long v = std::stoll(text, &used);
      if (used == text.size()) return v;
    } else {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw DomainError("--" + name + " expects a number, got '" + text + "'");
}

uint64_t ParseUnsigned(const json& v, const char* key) {
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_number_integer() && v.get<int64_t>() >= 0) return static_cast<uint64_t>(v.get<int64_t>());
  throw DomainError(std::string(key) + " must be a non-negative integer");
}

}  // namespace

const std::vector<std::string>& Commands() {
  static const std::vector<std::string> names = {"simulate-minimax", "simulate-bayes",
                                                 "audit",            "verify-lemma3",
                                                 "verify-dp",        "bench-complexity",
                                                 "multidim"};
  return names;
}

json ExperimentConfig::ToJson() const {
  return {{"command", command}, {"params", params},         {"seed", seed},
          {"trials", trials},   {"threads", threads},       {"out", out},
          {"trials_out", trials_out}, {"csv", csv}};
}

ExperimentConfig ParseArgs(const std::vector<std::string>& args) {
  CLI::App app{"privopt: private sequential convex optimization experiments", "privopt"};
  std::string command, config_path;
  std::map<std::string, std::string> flags;
  std::vector<double> sweep, partition;
  bool plot_prior = false;
  BuildApp(app, command, config_path, flags, sweep, partition, plot_prior);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw DomainError(e.what());
  }

  json file = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw DomainError("cannot read config file " + config_path);
    try {
      file = json::parse(in);
    } catch (const json::exception& e) {
      throw DomainError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!file.is_object()) throw DomainError("config file must hold a JSON object");
    static const std::set<std::string> top = {"command", "params", "seed", "trials",
                                              "threads", "out", "trials_out", "csv"};
    for (const auto& [key, value] : file.items()) {
      if (!top.count(key)) throw DomainError("unknown config key " + key);
    }
    if (file.contains("command") && file["command"] != command) {
      throw DomainError("config file is for command " + file["command"].dump());
    }
  }

  ExperimentConfig cfg;
  cfg.command = command;
  try {
    if (file.contains("params")) {
      if (!file["params"].is_object()) throw DomainError("params must be a JSON object");
      cfg.params = file["params"];
    }
    if (file.contains("seed")) cfg.seed = ParseUnsigned(file["seed"], "seed");
    if (file.contains("trials")) cfg.trials = file["trials"].get<int64_t>();
    if (file.contains("threads")) cfg.threads = file["threads"].get<int>();
    if (file.contains("out")) cfg.out = file["out"].get<std::string>();
    if (file.contains("trials_out")) cfg.trials_out = file["trials_out"].get<std::string>();
    if (file.contains("csv")) cfg.csv = file["csv"].get<std::string>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("bad config value: ") + e.what());
  }

  auto given = [&](const std::string& name) { return app.get_option("--" + name)->count() > 0; };
  if (given("seed")) cfg.seed = ParseUnsigned(ParseNumber("seed", flags["seed"]), "seed");
  if (given("trials")) cfg.trials = ParseNumber("trials", flags["trials"]).get<int64_t>();
  if (given("threads")) cfg.threads = ParseNumber("threads", flags["threads"]).get<int>();
  if (given("out")) cfg.out = flags["out"];
  if (given("trials-out")) cfg.trials_out = flags["trials-out"];
  if (given("csv")) cfg.csv = flags["csv"];
  for (const char* name : {"eps", "delta", "L", "alpha", "d", "truth", "gamma", "samples",
                           "grid-points", "fd-step"}) {
    if (!given(name)) continue;
    std::string key = name;
    std::replace(key.begin(), key.end(), '-', '_');
    cfg.params[key] = ParseNumber(name, flags[name]);
  }
  for (const char* name : {"setting", "truths"}) {
    if (given(name)) cfg.params[name] = flags[name];
  }
  if (given("sweep-L")) cfg.params["sweep_L"] = sweep;
  if (given("partition")) cfg.params["partition"] = partition;
  if (plot_prior) cfg.params["plot_prior"] = true;

  const auto& allowed = AllowedParams().at(command);
  for (const auto& [key, value] : cfg.params.items()) {
    if (!allowed.count(key)) {
      throw DomainError("parameter " + key + " is not used by " + command);
    }
  }
  if (cfg.trials == 0) cfg.trials = DefaultTrials(command);
  ApplyDefaults(command, cfg.params);
  return cfg;
}

int RunCommand(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Validate(cfg);
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  Outputs io;
  io.summary = &out;
  try {
    Open(io.summary_file, cfg.out, io.summary);
    Open(io.trials_file, cfg.trials_out, io.trials);
    Open(io.csv_file, cfg.csv, io.csv);
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  json result;
  bool pass = false;
  try {
    const std::string& c = cfg.command;
    if (c == "simulate-minimax") pass = SimulateMinimax(cfg, io, result);
    if (c == "simulate-bayes") pass = SimulateBayes(cfg, io, result);
    if (c == "audit") pass = Audit(cfg, io, result);
    if (c == "verify-lemma3") pass = VerifyLemma(cfg, io, result);
    if (c == "verify-dp") pass = VerifyDp(cfg, io, result);
    if (c == "bench-complexity") pass = BenchComplexity(cfg, io, result);
    if (c == "multidim") pass = MultidimCommand(cfg, io, result);
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  }
  const json summary = {{"config", cfg.ToJson()}, {"result", result}, {"pass", pass}};
  *io.summary << summary.dump(2) << '\n';
  if (!pass) err << cfg.command << ": gate failure\n";
  return pass ? kPass : kGateFailure;
}

int Main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty() || args[0] == "-h" || args[0] == "--help") {
    CLI::App app{"privopt: private sequential convex optimization experiments", "privopt"};
    std::string command, config_path;
    std::map<std::string, std::string> flags;
    std::vector<double> sweep, partition;
    bool plot_prior = false;
    BuildApp(app, command, config_path, flags, sweep, partition, plot_prior);
    out << app.help();
    return args.empty() ? kConfigError : kPass;
  }
  ExperimentConfig cfg;
  try {
    cfg = ParseArgs(args);
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return RunCommand(cfg, out, err);
}

}  // namespace privopt::cli
