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

#ifndef PRIVOPT_TOOLS_CLI_H_
#define PRIVOPT_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace privopt::cli {

enum ExitCode : int {
  kPass = 0,
  kGateFailure = 1,
  kConfigError = 2,
  kNumericalError = 3,
};

// One resolved invocation. `params` holds the command's keys after
// defaults and overrides have been applied.
struct ExperimentConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  uint64_t seed = 0;
  int64_t trials = 0;
  int threads = 0;
  std::string out;         // summary JSON; stdout when empty
  std::string trials_out;  // per-trial JSON lines
  std::string csv;

  nlohmann::json ToJson() const;
};

const std::vector<std::string>& Commands();

// Builds a config from argv (without the program name). Values from a
// --config JSON document are read first and flags override them.
// Throws DomainError on any parse or validation problem.
ExperimentConfig ParseArgs(const std::vector<std::string>& args);

// Validates the config against the command's preconditions before doing
// any work, then runs it and writes the artifacts.
int RunCommand(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

// ParseArgs + RunCommand with error-to-exit-code mapping.
int Main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace privopt::cli

#endif  // PRIVOPT_TOOLS_CLI_H_
