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

#ifndef PRIVOPT_INCOMPLETE_BETA_H_
#define PRIVOPT_INCOMPLETE_BETA_H_

namespace privopt {

// Regularized incomplete beta function I_x(a, b), absolute accuracy 1e-10.
//
// Evaluated by the Lentz continued fraction on whichever of I_x(a,b) and
// 1 - I_{1-x}(b,a) converges faster (switch at x = (a+1)/(a+b+2)). If the
// fraction stalls, falls back to tanh-sinh quadrature of the beta density.
// Throws DomainError for a, b <= 0 or x outside [0,1], and NumericalError
// when neither route converges.
double RegularizedIncompleteBeta(double a, double b, double x);

// Beta(a, b) log normalizer, ln B(a, b).
double LogBeta(double a, double b);

}  // namespace privopt

#endif  // PRIVOPT_INCOMPLETE_BETA_H_
