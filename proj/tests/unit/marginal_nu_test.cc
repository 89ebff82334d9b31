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

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <gtest/gtest.h>

namespace privopt {
namespace {

TEST(DensityBoundsTest, ConstantsAtAlphaOne) {
  EXPECT_NEAR(LowerDensityBound(1.0), 1.0 / 24.0, 1e-15);
  EXPECT_NEAR(UpperDensityBound(1.0), 17.0 + 2.0 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(UpperDensityBound(1.0), 17.7357588823, 1e-9);
}

TEST(MarginalNuTest, CdfEndpointsAndSymmetry) {
  for (double alpha : {0.25, 1.0, 2.0, 5.0}) {
    const MarginalNu nu(alpha);
    EXPECT_EQ(nu.Cdf(0.0), 0.0);
    EXPECT_EQ(nu.Cdf(1.0), 1.0);
    EXPECT_NEAR(nu.Cdf(0.5), 0.5, 1e-12);
    EXPECT_LT(nu.Cdf(1e-6), 1e-3);
    EXPECT_GT(nu.Cdf(1.0 - 1e-6), 1.0 - 1e-3);
    for (double t : {0.1, 0.3, 0.45}) {
      EXPECT_NEAR(nu.Cdf(t) + nu.Cdf(1.0 - t), 1.0, 1e-11);
    }
  }
}

TEST(MarginalNuTest, CdfMatchesBetaTail) {
  for (double alpha : {0.5, 2.0}) {
    const MarginalNu nu(alpha);
    for (double t : {0.05, 0.4, 0.9}) {
      const double tail = 1.0 - boost::math::ibeta(alpha * t, alpha * (1.0 - t), 0.5);
      EXPECT_NEAR(nu.Cdf(t), tail, 1e-10);
    }
  }
}

TEST(MarginalNuTest, CdfIsMonotone) {
  const MarginalNu nu(1.0);
  double prev = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double c = nu.Cdf(i / 1000.0);
    EXPECT_LE(prev, c + 1e-15);
    prev = c;
  }
}

TEST(MarginalNuTest, QuantileRoundTrip) {
  for (double alpha : {0.5, 1.0, 5.0}) {
    const MarginalNu nu(alpha);
    EXPECT_EQ(nu.Quantile(0.0), 0.0);
    EXPECT_EQ(nu.Quantile(1.0), 1.0);
    EXPECT_NEAR(nu.Quantile(0.5), 0.5, 1e-8);
    EXPECT_NEAR(nu.Cdf(nu.Quantile(0.3)), 0.3, 1e-8);
    for (double t : {0.05, 0.2, 0.6, 0.93}) {
      EXPECT_NEAR(nu.Quantile(nu.Cdf(t)), t, 1e-8) << alpha << " " << t;
    }
  }
}

// d/dt P{X >= 1/2}, X ~ Beta(alpha t, alpha (1-t)), by differentiating
// under the integral: alpha [E(1{X>=1/2} ln(X/(1-X))) - P{X>=1/2}
// (psi(a) - psi(b))].
double DensityOracle(double alpha, double t) {
  const double a = alpha * t, b = alpha * (1.0 - t);
  const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  boost::math::quadrature::tanh_sinh<double> integrator;
  // The two-argument form hands over the exact distance to the nearer
  // endpoint, which keeps 1 - x accurate near the singularity at 1.
  const double moment = integrator.integrate(
      [&](double x, double xc) {
        const double upper = xc > 0.0 ? xc : 1.0 - x;
        return std::exp(log_norm + (a - 1) * std::log(x) + (b - 1) * std::log(upper)) *
               (std::log(x) - std::log(upper));
      },
      0.5, 1.0);
  const double tail = 1.0 - boost::math::ibeta(a, b, 0.5);
  return alpha * (moment - tail * (boost::math::digamma(a) - boost::math::digamma(b)));
}

TEST(MarginalNuTest, FiniteDifferenceDensityMatchesQuadrature) {
  for (double alpha : {0.25, 1.0, 4.0}) {
    const MarginalNu nu(alpha);
    for (double t : {0.05, 0.3, 0.5, 0.8}) {
      EXPECT_NEAR(nu.Density(t), DensityOracle(alpha, t), 1e-4) << alpha << " " << t;
    }
  }
}

}  // namespace
}  // namespace privopt
