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

#ifndef PRIVOPT_ERRORS_H_
#define PRIVOPT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace privopt {

// Argument outside the mathematical domain of an operation, or a
// configuration outside the regime an algorithm is defined for.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A root finder, series or quadrature failed to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No integer solution exists for a discrete parameter search.
class InfeasibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A querying strategy submitted more queries than its budget allows.
class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace privopt

#endif  // PRIVOPT_ERRORS_H_
