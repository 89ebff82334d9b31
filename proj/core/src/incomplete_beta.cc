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

#include "privopt/incomplete_beta.h"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "privopt/errors.h"

namespace privopt {
namespace {

constexpr int kMaxFractionTerms = 20000;
constexpr double kFractionEpsilon = 1e-16;
constexpr double kTiny = 1e-300;

// Modified Lentz evaluation of the continued fraction for I_x(a,b).
// Returns NaN when it fails to converge.
double BetaFraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxFractionTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kFractionEpsilon) return h;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// x^a (1-x)^b / (a B(a,b)), the prefactor of the fraction.
double FractionPrefactor(double a, double b, double x) {
  return std::exp(a * std::log(x) + b * std::log1p(-x) - LogBeta(a, b) -
                  std::log(a));
}

double QuadratureFallback(double a, double b, double x) {
  const double log_norm = LogBeta(a, b);
  auto density = [&](double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp((a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t) -
                    log_norm);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  const double value = integrator.integrate(density, 0.0, x, 1e-13, &error);
  if (!std::isfinite(value) || error > 1e-10) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return std::fmin(1.0, std::fmax(0.0, value));
}

}  // namespace

double LogBeta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double RegularizedIncompleteBeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("incomplete beta needs a, b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("incomplete beta needs x in [0,1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  double value;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    value = FractionPrefactor(a, b, x) * BetaFraction(a, b, x);
  } else {
    value = 1.0 - FractionPrefactor(b, a, 1.0 - x) * BetaFraction(b, a, 1.0 - x);
  }
  if (std::isfinite(value)) return std::fmin(1.0, std::fmax(0.0, value));

  value = QuadratureFallback(a, b, x);
  if (std::isfinite(value)) return value;
  std::ostringstream msg;
  msg << "incomplete beta did not converge for a=" << a << " b=" << b
      << " x=" << x;
  throw NumericalError(msg.str());
}

}  // namespace privopt
