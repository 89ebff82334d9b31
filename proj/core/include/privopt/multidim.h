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

// Separable objectives on [0,1]^d: f(x) = sum_i f_i(x_i). The minimax
// strategy runs once per axis with privacy level L^(1/d), all axes sharing
// one clock of vector queries.

#ifndef PRIVOPT_MULTIDIM_H_
#define PRIVOPT_MULTIDIM_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "privopt/audit.h"
#include "privopt/convex_fn.h"
#include "privopt/learner_minimax.h"
#include "privopt/transcript.h"

namespace privopt {

using VectorOracle = std::function<std::vector<double>(std::span<const double>)>;

class SeparableFunction {
 public:
  explicit SeparableFunction(std::vector<PiecewiseLinearConvex> coordinates);

  size_t dimension() const { return coordinates_.size(); }
  std::vector<double> Gradient(std::span<const double> q,
                               SubgradientRule rule = SubgradientRule::kMidpoint) const;
  std::vector<double> Minimizer() const;
  const PiecewiseLinearConvex& coordinate(size_t i) const { return coordinates_[i]; }

  VectorOracle AsOracle(SubgradientRule rule = SubgradientRule::kMidpoint) const;

 private:
  std::vector<PiecewiseLinearConvex> coordinates_;
};

struct MultidimConfig {
  double eps = 0.0;
  double delta = 0.0;
  int L = 1;  // overall privacy level
  int d = 1;

  // Integer m with m^d = L; throws DomainError when there is none.
  int AxisLevel() const;
  // Throws DomainError unless L^(1/d) is an integer and
  // 2 eps <= delta <= L^(-1/d).
  void Validate() const;
  MinimaxConfig Axis() const;
};

class VectorTranscript {
 public:
  explicit VectorTranscript(size_t dimension = 1, uint64_t seed = 0)
      : dimension_(dimension), seed_(seed) {}

  void Append(std::vector<double> query, std::vector<double> response,
              std::vector<QueryPhase> phases);

  size_t size() const { return queries_.size(); }
  size_t dimension() const { return dimension_; }
  uint64_t seed() const { return seed_; }
  const std::vector<std::vector<double>>& queries() const { return queries_; }
  const std::vector<std::vector<QueryPhase>>& phases() const { return phases_; }

  // Vector queries with at least one nontrivial coordinate.
  int64_t ReportedCount() const;

  // Coordinate `axis` of every vector query, as a 1-d transcript.
  QueryTranscript Axis(size_t axis) const;

  // One line per vector query: {"i","q":[...],"phase":[...]}.
  std::string ToJsonLines(bool include_responses = false) const;

 private:
  size_t dimension_;
  uint64_t seed_;
  std::vector<std::vector<double>> queries_;
  std::vector<std::vector<double>> responses_;
  std::vector<std::vector<QueryPhase>> phases_;
};

struct MultidimResult {
  VectorTranscript transcript;
  std::vector<double> estimate;
};

// Per-axis minimax searches in lock step. An axis that has finished is fed
// filler coordinates at 1 until every axis is done.
MultidimResult RunMinimaxD(const MultidimConfig& cfg, const VectorOracle& oracle,
                           uint64_t seed = 0, int64_t budget = 0);

// Number of vector queries RunMinimaxD reports (the per-axis count).
int64_t MultidimQueryCount(const MultidimConfig& cfg);

// Planted candidate intervals on each axis; their product has L cells.
std::vector<std::vector<Interval>> PlantedGrid(const MultidimConfig& cfg);

// l-infinity covering number of the product of per-axis point sets, as the
// product of the 1-d covering numbers.
int64_t CoveringNumberProduct(std::span<const std::vector<double>> axes, double radius);

// Planted-truth audit of the d-dimensional strategy against the per-axis
// guess-pair adversary (success when every coordinate is within delta/2).
AuditReport AuditMultidim(const MultidimConfig& cfg, const AuditOptions& options);

}  // namespace privopt

#endif  // PRIVOPT_MULTIDIM_H_
