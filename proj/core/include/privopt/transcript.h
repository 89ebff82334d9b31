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

#ifndef PRIVOPT_TRANSCRIPT_H_
#define PRIVOPT_TRANSCRIPT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace privopt {

// Role of a query inside a strategy. `trivial` marks the query at 0 that
// opens the grid regime of the minimax strategy; it carries no
// information and is left out of reported counts.
enum class QueryPhase { kGuess, kBisect, kGrid, kFill, kTrivial, kP1, kP2, kP3, kP4 };

std::string_view PhaseName(QueryPhase phase);
std::optional<QueryPhase> ParsePhase(std::string_view name);

// Everything a learner saw during one run. The adversary sees only
// `queries()`.
class QueryTranscript {
 public:
  explicit QueryTranscript(uint64_t seed = 0) : seed_(seed) {}

  void Append(double query, double response, QueryPhase phase);

  size_t size() const { return queries_.size(); }
  std::span<const double> queries() const { return queries_; }
  std::span<const double> responses() const { return responses_; }
  std::span<const QueryPhase> phases() const { return phases_; }
  uint64_t seed() const { return seed_; }

  // Number of queries excluding those tagged trivial.
  int64_t ReportedCount() const;
  int64_t CountPhase(QueryPhase phase) const;

  // One JSON object per line: {"i","q","phase"}. With responses, a final
  // line {"learner_private":{"responses":[...]}} follows.
  std::string ToJsonLines(bool include_responses = false) const;

 private:
  uint64_t seed_;
  std::vector<double> queries_;
  std::vector<double> responses_;
  std::vector<QueryPhase> phases_;
};

}  // namespace privopt

#endif  // PRIVOPT_TRANSCRIPT_H_
