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

// Monte Carlo audits of accuracy, privacy and query counts, with the
// closed-form bounds they are compared against.

#ifndef PRIVOPT_AUDIT_H_
#define PRIVOPT_AUDIT_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "privopt/interval.h"
#include "privopt/learner_bayes.h"
#include "privopt/learner_minimax.h"

namespace privopt {

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Minimax: lower 2L + log2(delta/eps) - 2; upper 2L + log2(delta/eps) when
// L >= log2(1/delta), else L + log2(1/eps). Throws DomainError naming the
// violated inequality of 2 eps <= delta <= 1/L.
Bounds MinimaxBounds(double eps, double delta, int L);

// Bayesian: lower c1 L log2(delta/eps) with the witness c1 = 2^-alpha;
// upper L log2(delta/eps) + c2 L + log2(1/(delta L)). Throws DomainError
// outside 2 eps <= delta < 1/(2 L H_alpha).
Bounds BayesBounds(double eps, double delta, int L, double alpha);

struct AuditOptions {
  int64_t trials = 10000;
  uint64_t seed = 0;
  int threads = 0;
  // Privacy slack in binomial standard errors of the rate 1/L.
  double slack_se = 4.0;
  // Keep one JSON record per trial in the report.
  bool keep_trials = false;
};

// Where minimax truths are drawn from.
enum class TruthSampler {
  kPlanted,  // uniform over the planted candidate intervals
  kUniform,  // minimizer ~ Unif(0,1)
};

struct AdversaryStats {
  std::string name;
  int64_t successes = 0;
  int64_t trials = 0;
  double rate = 0.0;
  Interval wilson;
  double threshold = 0.0;  // 1/L + slack
  bool gated = true;
  bool pass = false;
};

struct Gate {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct QueryCountStats {
  int64_t min = 0;
  int64_t max = 0;
  double mean = 0.0;
};

struct AuditReport {
  std::string setting;  // "minimax" or "bayes"
  nlohmann::json params;
  int64_t trials = 0;
  double accuracy_rate = 0.0;
  std::vector<AdversaryStats> adversaries;
  QueryCountStats query_count;
  Bounds theory;
  std::vector<Gate> gates;
  // Setting-specific measurements (window counts, separation, tests).
  nlohmann::json extras;
  std::vector<nlohmann::json> trial_records;
  bool pass = false;

  const AdversaryStats* Find(const std::string& adversary) const;
  const Gate* FindGate(const std::string& gate) const;
  nlohmann::json ToJson() const;
  std::string TrialsJsonLines() const;
};

// Runs the minimax strategy on `options.trials` V-shaped truths and audits
// the guess-pair, covering-set and proportional-sampling adversaries.
// Privacy and transcript-invariance gates apply only to planted truths.
AuditReport AuditMinimax(const MinimaxConfig& cfg, const AuditOptions& options,
                         TruthSampler sampler = TruthSampler::kPlanted);

// Runs the Bayesian strategy on prior draws and audits the
// proportional-sampling and reconstruction adversaries, decoy separation,
// uniformity of the truth index and the window-count inequality.
AuditReport AuditBayes(const BayesConfig& cfg, const AuditOptions& options);

// Shared helpers.
AdversaryStats TallyAdversary(std::string name, int64_t successes, int64_t trials,
                              int L, double slack_se, bool gated);
void FinishReport(AuditReport& report);

}  // namespace privopt

#endif  // PRIVOPT_AUDIT_H_
