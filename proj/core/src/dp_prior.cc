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

#include "privopt/dp_prior.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "privopt/errors.h"

namespace privopt {

double SampleStickFraction(double alpha, Rng& rng) {
  // P{V > v} = (1 - v)^alpha.
  const double u = Uniform01(rng);
  return -std::expm1(std::log1p(-u) / alpha);
}

StickBreakingDraw SampleStickBreakingAtoms(double alpha, Interval support,
                                           double truncation, Rng& rng) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("concentration alpha must be positive");
  }
  if (!(truncation > 0.0 && truncation <= 1e-6)) {
    throw DomainError("truncation tolerance must lie in (0, 1e-6]");
  }
  StickBreakingDraw draw;
  double remaining = 1.0;
  while (remaining >= truncation) {
    const double fraction = SampleStickFraction(alpha, rng);
    const double location = support.lo + support.length() * Uniform01(rng);
    const double weight = remaining * fraction;
    remaining *= 1.0 - fraction;
    if (weight > 0.0) draw.atoms.push_back({location, weight});
  }
  draw.residual_mass = remaining;
  return draw;
}

DPFunctionSample::DPFunctionSample(double gamma_plus, double concentration,
                                   StickBreakingDraw draw)
    : gamma_plus_(gamma_plus),
      concentration_(concentration),
      residual_mass_(draw.residual_mass),
      atoms_(std::move(draw.atoms)) {
  if (atoms_.empty()) throw DomainError("a DP sample needs at least one atom");
  first_stick_ = atoms_.front().weight;
  for (const Atom& atom : atoms_) {
    largest_stick_ = std::max(largest_stick_, atom.weight);
  }
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) {
    return a.location < b.location;
  });
  cumulative_.reserve(atoms_.size());
  double running = 0.0;
  for (const Atom& atom : atoms_) {
    running += atom.weight;
    cumulative_.push_back(running);
  }
  const auto median = std::lower_bound(cumulative_.begin(), cumulative_.end(), 0.5);
  const size_t index = median == cumulative_.end()
                           ? cumulative_.size() - 1
                           : std::distance(cumulative_.begin(), median);
  minimizer_ = atoms_[index].location;
  mass_below_minimizer_ = index == 0 ? 0.0 : cumulative_[index - 1];
}

double DPFunctionSample::Cdf(double x) const {
  const auto it = std::upper_bound(
      atoms_.begin(), atoms_.end(), x,
      [](double value, const Atom& atom) { return value < atom.location; });
  if (it == atoms_.begin()) return 0.0;
  return cumulative_[std::distance(atoms_.begin(), it) - 1];
}

double DPFunctionSample::Gradient(double q) const {
  return gamma_plus_ * (2.0 * Cdf(q) - 1.0);
}

double DPFunctionSample::Value(double x) const {
  double integral = 0.0;
  for (const Atom& atom : atoms_) {
    if (atom.location > x) break;
    integral += atom.weight * (x - atom.location);
  }
  return -gamma_plus_ * x + 2.0 * gamma_plus_ * integral;
}

GradientOracle DPFunctionSample::AsOracle() const {
  return [this](double q) { return Gradient(q); };
}

DPFunctionSample SampleStickBreaking(double alpha, Rng& rng,
                                     const PriorOptions& options) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("concentration alpha must be positive");
  }
  while (true) {
    const double u = Uniform01(rng);
    const double gamma_plus = options.gradient_scale_quantile
                                  ? options.gradient_scale_quantile(u)
                                  : u;
    StickBreakingDraw draw = SampleStickBreakingAtoms(
        alpha, Interval{0.0, 1.0}, options.truncation, rng);
    if (!(gamma_plus > 0.0)) continue;
    DPFunctionSample sample(gamma_plus, alpha, std::move(draw));
    // The unplaced remainder could only shift the median if it can carry
    // the mass below the minimizer past 1/2.
    if (sample.mass_below_minimizer() + sample.residual_mass() >= 0.5) continue;
    return sample;
  }
}

std::vector<double> SampleDirichlet(std::span<const double> shape, Rng& rng) {
  std::vector<double> out(shape.size());
  double total = 0.0;
  for (size_t i = 0; i < shape.size(); ++i) {
    if (!(shape[i] > 0.0)) throw DomainError("Dirichlet shape must be positive");
    std::gamma_distribution<double> gamma(shape[i], 1.0);
    out[i] = gamma(rng);
    total += out[i];
  }
  if (!(total > 0.0)) {
    // Every gamma variate underflowed: the mass collapses onto one cell,
    // chosen in proportion to its shape.
    const double sum = std::accumulate(shape.begin(), shape.end(), 0.0);
    double u = Uniform01(rng) * sum;
    size_t pick = 0;
    while (pick + 1 < shape.size() && u >= shape[pick]) u -= shape[pick++];
    std::fill(out.begin(), out.end(), 0.0);
    out[pick] = 1.0;
    return out;
  }
  for (double& v : out) v /= total;
  return out;
}

}  // namespace privopt
