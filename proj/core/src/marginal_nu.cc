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

#include "privopt/marginal_nu.h"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "privopt/errors.h"
#include "privopt/incomplete_beta.h"

namespace privopt {

double LowerDensityBound(double alpha) {
  return std::exp2(-alpha - 2.0) / 3.0;
}

double UpperDensityBound(double alpha) {
  return (3.0 + 2.0 * std::exp(-1.0)) * alpha + 14.0;
}

MarginalNu::MarginalNu(double concentration, double cdf_tolerance)
    : concentration_(concentration), cdf_tolerance_(cdf_tolerance) {
  if (!(concentration > 0.0) || !std::isfinite(concentration)) {
    throw DomainError("concentration alpha must be positive");
  }
  if (!(cdf_tolerance > 0.0)) {
    throw DomainError("cdf tolerance must be positive");
  }
}

double MarginalNu::Cdf(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  // 1 - I_{1/2}(a t, a (1-t)) == I_{1/2}(a (1-t), a t).
  return RegularizedIncompleteBeta(concentration_ * (1.0 - t),
                                   concentration_ * t, 0.5);
}

double MarginalNu::Quantile(double p) const {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  auto residual = [&](double t) { return Cdf(t) - p; };
  std::uintmax_t iterations = 200;
  const auto tolerance = boost::math::tools::eps_tolerance<double>(50);
  std::pair<double, double> bracket;
  try {
    bracket = boost::math::tools::toms748_solve(residual, 0.0, 1.0, -p,
                                                1.0 - p, tolerance, iterations);
  } catch (const std::exception& e) {
    throw NumericalError(std::string("nu quantile root finder failed: ") +
                         e.what());
  }
  const double t = 0.5 * (bracket.first + bracket.second);
  const double miss = std::fabs(Cdf(t) - p);
  if (iterations >= 200 || miss > cdf_tolerance_) {
    std::ostringstream msg;
    msg << "nu quantile did not converge: p=" << p << " alpha="
        << concentration_ << " |cdf - p|=" << miss;
    throw NumericalError(msg.str());
  }
  return t;
}

double MarginalNu::Density(double t, double step) const {
  return (Cdf(t + step) - Cdf(t - step)) / (2.0 * step);
}

}  // namespace privopt
