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

#ifndef PRIVOPT_MARGINAL_NU_H_
#define PRIVOPT_MARGINAL_NU_H_

#include "privopt/interval.h"

namespace privopt {

// Lower bound h_alpha = 2^(-alpha-2) / 3 on the density of the minimizer's
// prior law.
double LowerDensityBound(double alpha);

// Upper bound H_alpha = (3 + 2/e) alpha + 14 on the same density.
double UpperDensityBound(double alpha);

// Prior law of the minimizer X* (the median of a DP(alpha, Lebesgue[0,1])
// draw). Its CDF is P{Beta(alpha t, alpha (1-t)) >= 1/2}.
class MarginalNu {
 public:
  explicit MarginalNu(double concentration, double cdf_tolerance = 1e-9);

  // nu([0, t]); 0 for t <= 0 and 1 for t >= 1.
  double Cdf(double t) const;

  // t with |Cdf(t) - p| <= cdf_tolerance. Throws NumericalError if the root
  // finder does not meet that bound.
  double Quantile(double p) const;

  // nu(interval).
  double Mass(Interval interval) const { return Cdf(interval.hi) - Cdf(interval.lo); }

  // Central finite-difference density.
  double Density(double t, double step = 1e-4) const;

  double concentration() const { return concentration_; }
  double cdf_tolerance() const { return cdf_tolerance_; }

 private:
  double concentration_;
  double cdf_tolerance_;
};

}  // namespace privopt

#endif  // PRIVOPT_MARGINAL_NU_H_
