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

// Bayesian prior over convex functions on [0,1]. A draw picks a gradient
// scale gamma+ from eta and a random CDF F ~ DP(alpha, Lebesgue[0,1]) via
// truncated stick-breaking; the function has derivative gamma+ (2F - 1) and
// is minimized at the median of F.

#ifndef PRIVOPT_DP_PRIOR_H_
#define PRIVOPT_DP_PRIOR_H_

#include <functional>
#include <span>
#include <vector>

#include "privopt/interval.h"
#include "privopt/random.h"

namespace privopt {

struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

struct PriorOptions {
  // Stop breaking sticks once the unbroken remainder drops below this.
  double truncation = 1e-12;
  // Quantile function of eta, the law of gamma+. Unif[0,1] when empty.
  std::function<double(double)> gradient_scale_quantile;
};

// Truncated stick-breaking draw of DP(alpha, Lebesgue on `support`).
struct StickBreakingDraw {
  std::vector<Atom> atoms;     // in draw order (stick 1 first)
  double residual_mass = 1.0;  // unbroken remainder, < truncation
};

StickBreakingDraw SampleStickBreakingAtoms(double alpha, Interval support,
                                           double truncation, Rng& rng);

// Beta(1, alpha) by inversion.
double SampleStickFraction(double alpha, Rng& rng);

class DPFunctionSample {
 public:
  DPFunctionSample(double gamma_plus, double concentration,
                   StickBreakingDraw draw);

  // F(x): total weight of atoms at locations <= x.
  double Cdf(double x) const;

  // gamma+ (2 F(q) - 1).
  double Gradient(double q) const;

  // f(x) = -gamma+ x + 2 gamma+ int_0^x F(t) dt.
  double Value(double x) const;

  GradientOracle AsOracle() const;

  double gamma_plus() const { return gamma_plus_; }
  double concentration() const { return concentration_; }
  double residual_mass() const { return residual_mass_; }
  double minimizer() const { return minimizer_; }
  // Atoms sorted by location.
  std::span<const Atom> atoms() const { return atoms_; }
  // Length of the first stick broken, beta_1.
  double first_stick() const { return first_stick_; }
  // Longest stick, beta_(1).
  double largest_stick() const { return largest_stick_; }
  // Weight of the atoms strictly left of the minimizer.
  double mass_below_minimizer() const { return mass_below_minimizer_; }

 private:
  double gamma_plus_;
  double concentration_;
  double residual_mass_;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
  double minimizer_ = 0.0;
  double first_stick_ = 0.0;
  double largest_stick_ = 0.0;
  double mass_below_minimizer_ = 0.0;
};

// Full prior draw. Redraws in the (probability ~truncation) event that the
// unbroken remainder could move the median.
DPFunctionSample SampleStickBreaking(double alpha, Rng& rng,
                                     const PriorOptions& options = {});

// Dirichlet(shape) via normalized gamma variates.
std::vector<double> SampleDirichlet(std::span<const double> shape, Rng& rng);

}  // namespace privopt

#endif  // PRIVOPT_DP_PRIOR_H_
