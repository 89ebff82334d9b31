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

#include "privopt/transcript.h"

#include <algorithm>
#include <array>

namespace privopt {
namespace {

constexpr std::array<std::string_view, 9> kPhaseNames = {
    "guess", "bisect", "grid", "fill", "trivial", "p1", "p2", "p3", "p4"};

}  // namespace

std::string_view PhaseName(QueryPhase phase) {
  return kPhaseNames[static_cast<size_t>(phase)];
}

std::optional<QueryPhase> ParsePhase(std::string_view name) {
  for (size_t i = 0; i < kPhaseNames.size(); ++i) {
    if (kPhaseNames[i] == name) return static_cast<QueryPhase>(i);
  }
  return std::nullopt;
}

void QueryTranscript::Append(double query, double response, QueryPhase phase) {
  queries_.push_back(query);
  responses_.push_back(response);
  phases_.push_back(phase);
}

int64_t QueryTranscript::ReportedCount() const {
  return static_cast<int64_t>(size()) - CountPhase(QueryPhase::kTrivial);
}

int64_t QueryTranscript::CountPhase(QueryPhase phase) const {
  return std::count(phases_.begin(), phases_.end(), phase);
}

std::string QueryTranscript::ToJsonLines(bool include_responses) const {
  std::string out;
  for (size_t i = 0; i < size(); ++i) {
    nlohmann::json line = {{"i", i}, {"q", queries_[i]},
                           {"phase", PhaseName(phases_[i])}};
    out += line.dump();
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

}  // namespace privopt
