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

#include "privopt/dp_checks.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "privopt/dp_prior.h"
#include "privopt/errors.h"
#include "privopt/incomplete_beta.h"
#include "privopt/marginal_nu.h"
#include "privopt/parallel.h"
#include "privopt/random.h"
#include "privopt/stats.h"

namespace privopt {
namespace {

// Cumulative weight of atoms at or left of t.
double MassUpTo(const StickBreakingDraw& draw, double t) {
  double mass = 0.0;
  for (const Atom& atom : draw.atoms) {
    if (atom.location <= t) mass += atom.weight;
  }
  return mass;
}

double BetaCdf(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return RegularizedIncompleteBeta(a, b, x);
}

constexpr double kNoPValue = std::numeric_limits<double>::quiet_NaN();
constexpr double kSumRounding = 1e-12;

// A truncated draw differs from an exact one by less than the truncation
// level, so masses are compared after censoring to [band, 1 - band].
double CensorBand(double truncation) { return 1e3 * truncation; }

void Censor(std::vector<double>& xs, double band) {
  for (double& x : xs) x = std::clamp(x, band, 1.0 - band);
}

// CDF of the censored Beta(a, b) law and its left limit.
std::function<double(double)> CensoredBetaCdf(double a, double b, double band) {
  return [a, b, band](double x) {
    if (x < band) return 0.0;
    if (x >= 1.0 - band) return 1.0;
    return BetaCdf(a, b, x);
  };
}

std::function<double(double)> CensoredBetaCdfLeft(double a, double b, double band) {
  return [a, b, band](double x) {
    if (x <= band) return 0.0;
    if (x > 1.0 - band) return 1.0;
    return BetaCdf(a, b, x);
  };
}

void Finish(DpCheckReport& report) {
  report.pass = true;
  for (const CheckStatistic& s : report.statistics) report.pass = report.pass && s.pass;
}

CheckStatistic KsEntry(std::string name, double point, const TestResult& r,
                       double threshold) {
  return {std::move(name), point, r.statistic, r.p_value, threshold,
          r.p_value > threshold};
}

void ValidateCommon(double alpha, const DpCheckOptions& options) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("concentration alpha must be positive");
  }
  if (options.trials < 10000) throw DomainError("DP checks need trials >= 1e4");
  if (!(options.significance > 0.0 && options.significance < 1.0)) {
    throw DomainError("significance must lie in (0, 1)");
  }
}

}  // namespace

std::vector<double> UniformGrid(double lo, double hi, int n) {
  if (n < 1) throw DomainError("grid needs at least one point");
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) {
    grid[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  }
  return grid;
}

nlohmann::json Lemma3Report::ToJson() const {
  nlohmann::json points = nlohmann::json::array();
  for (size_t i = 0; i < grid.size(); ++i) {
    points.push_back(
        {{"t", grid[i]}, {"derivative", derivatives[i]}, {"pass", bool(point_pass[i])}});
  }
  return {{"check", "lemma3"},
          {"alpha", alpha},
          {"fd_step", fd_step},
          {"tolerance", tolerance},
          {"h_alpha", lower_bound},
          {"H_alpha", upper_bound},
          {"grid", grid},
          {"statistics", points},
          {"min_derivative", min_derivative},
          {"max_derivative", max_derivative},
          {"max_asymmetry", max_asymmetry},
          {"pass", pass}};
}

Lemma3Report VerifyLemma3(double alpha, std::span<const double> grid,
                          double fd_step) {
  if (!(fd_step > 0.0 && fd_step < 0.5)) {
    throw DomainError("finite-difference step must lie in (0, 1/2)");
  }
  MarginalNu nu(alpha);
  Lemma3Report report;
  report.alpha = alpha;
  report.fd_step = fd_step;
  report.tolerance = 1e-3 + 2.0 * 1e-10 / fd_step;
  report.lower_bound = LowerDensityBound(alpha);
  report.upper_bound = UpperDensityBound(alpha);
  report.grid.assign(grid.begin(), grid.end());
  report.min_derivative = std::numeric_limits<double>::infinity();
  report.max_derivative = -std::numeric_limits<double>::infinity();
  report.pass = true;
  for (double t : grid) {
    if (!(t > fd_step && t < 1.0 - fd_step)) {
      throw DomainError("grid point outside (fd_step, 1 - fd_step)");
    }
    const double d = nu.Density(t, fd_step);
    const bool ok = d >= report.lower_bound - report.tolerance &&
                    d <= report.upper_bound + report.tolerance;
    report.derivatives.push_back(d);
    report.point_pass.push_back(ok);
    report.pass = report.pass && ok;
    report.min_derivative = std::min(report.min_derivative, d);
    report.max_derivative = std::max(report.max_derivative, d);
    report.max_asymmetry =
        std::max(report.max_asymmetry, std::abs(d - nu.Density(1.0 - t, fd_step)));
  }
  return report;
}

nlohmann::json DpCheckReport::ToJson() const {
  nlohmann::json stats = nlohmann::json::array();
  for (const CheckStatistic& s : statistics) {
    stats.push_back({{"name", s.name},
                     {"point", s.point},
                     {"statistic", s.statistic},
                     {"p_value", s.p_value},
                     {"threshold", s.threshold},
                     {"pass", s.pass}});
  }
  return {{"check", check},     {"alpha", alpha},     {"partition", partition},
          {"trials", trials},   {"statistics", stats}, {"pass", pass}};
}

DpCheckReport CheckDpMarginals(double alpha, std::span<const double> cuts,
                               const DpCheckOptions& options) {
  ValidateCommon(alpha, options);
  std::vector<double> edges = {0.0};
  for (double c : cuts) {
    if (!(c > edges.back() && c < 1.0)) {
      throw DomainError("partition cuts must be increasing inside (0, 1)");
    }
    edges.push_back(c);
  }
  edges.push_back(1.0);
  const size_t cells = edges.size() - 1;
  const size_t points = options.test_points.size();
  const int64_t n = options.trials;

  // Direct draws: F at test points and cell masses.
  std::vector<std::vector<double>> direct(points, std::vector<double>(n));
  std::vector<std::vector<double>> cell_mass(cells, std::vector<double>(n));
  // Constructed draws for the self-similarity comparison.
  std::vector<std::vector<double>> built(points, std::vector<double>(n));
  std::vector<double> cell_shape(cells);
  for (size_t c = 0; c < cells; ++c) cell_shape[c] = alpha * (edges[c + 1] - edges[c]);

  ParallelFor(n, options.threads, [&](int64_t i) {
    Rng rng = MakeStream(options.seed, static_cast<uint64_t>(i));
    const StickBreakingDraw draw =
        SampleStickBreakingAtoms(alpha, {0.0, 1.0}, options.truncation, rng);
    for (size_t p = 0; p < points; ++p) direct[p][i] = MassUpTo(draw, options.test_points[p]);
    for (size_t c = 0; c < cells; ++c) {
      cell_mass[c][i] = MassUpTo(draw, edges[c + 1]) -
                        (c == 0 ? 0.0 : MassUpTo(draw, edges[c]));
    }
    if (cells < 2) return;
    Rng other = MakeStream(options.seed, static_cast<uint64_t>(n + i));
    const std::vector<double> weights = SampleDirichlet(cell_shape, other);
    std::vector<double> value(points, 0.0);
    for (size_t c = 0; c < cells; ++c) {
      const StickBreakingDraw inner = SampleStickBreakingAtoms(
          cell_shape[c], {edges[c], edges[c + 1]}, options.truncation, other);
      for (size_t p = 0; p < points; ++p) {
        value[p] += weights[c] * MassUpTo(inner, options.test_points[p]);
      }
    }
    for (size_t p = 0; p < points; ++p) built[p][i] = value[p];
  });

  const double band = CensorBand(options.truncation);
  for (auto& xs : direct) Censor(xs, band);
  for (auto& xs : built) Censor(xs, band);
  if (cells >= 2) {
    for (auto& xs : cell_mass) Censor(xs, band);
  }

  DpCheckReport report;
  report.check = "dp_marginals";
  report.alpha = alpha;
  report.partition.assign(cuts.begin(), cuts.end());
  report.trials = n;
  const size_t tests = points + (cells >= 2 ? cells + points : 1);
  const double threshold = options.significance / tests;

  for (size_t p = 0; p < points; ++p) {
    const double t = options.test_points[p];
    const double a = alpha * t, b = alpha * (1.0 - t);
    report.statistics.push_back(KsEntry(
        "marginal_ks", t,
        KsOneSample(direct[p], CensoredBetaCdf(a, b, band), CensoredBetaCdfLeft(a, b, band)),
        threshold));
  }
  if (cells < 2) {
    // mu([0,1]) = 1 up to the unbroken remainder and summation rounding.
    double worst = 0.0;
    for (double m : cell_mass[0]) worst = std::max(worst, std::abs(1.0 - m));
    const double allowed = options.truncation + kSumRounding;
    report.statistics.push_back({"total_mass", 1.0, worst, kNoPValue, allowed,
                                 worst <= allowed});
  } else {
    for (size_t c = 0; c < cells; ++c) {
      const double len = edges[c + 1] - edges[c];
      const double a = alpha * len, b = alpha * (1.0 - len);
      report.statistics.push_back(KsEntry(
          "cell_mass_ks", edges[c],
          KsOneSample(cell_mass[c], CensoredBetaCdf(a, b, band),
                      CensoredBetaCdfLeft(a, b, band)),
          threshold));
    }
    for (size_t p = 0; p < points; ++p) {
      report.statistics.push_back(KsEntry("self_similarity_ks", options.test_points[p],
                                          KsTwoSample(direct[p], built[p]), threshold));
    }
  }
  Finish(report);
  return report;
}

DpCheckReport CheckStickLengths(double alpha, const DpCheckOptions& options) {
  ValidateCommon(alpha, options);
  const int64_t n = options.trials;
  std::vector<double> first(n), largest(n);
  ParallelFor(n, options.threads, [&](int64_t i) {
    Rng rng = MakeStream(options.seed, static_cast<uint64_t>(i));
    const StickBreakingDraw draw =
        SampleStickBreakingAtoms(alpha, {0.0, 1.0}, options.truncation, rng);
    first[i] = draw.atoms.empty() ? 0.0 : draw.atoms.front().weight;
    double big = 0.0;
    for (const Atom& atom : draw.atoms) big = std::max(big, atom.weight);
    largest[i] = big;
  });
  RunningStats mean_first;
  int64_t first_over = 0, largest_over = 0;
  for (int64_t i = 0; i < n; ++i) {
    mean_first.Add(first[i]);
    first_over += first[i] > 0.5;
    largest_over += largest[i] > 0.5;
  }
  DpCheckReport report;
  report.check = "stick_lengths";
  report.alpha = alpha;
  report.trials = n;

  const double expected_mean = 1.0 / (1.0 + alpha);
  const double mean_gap = std::abs(mean_first.mean() - expected_mean);
  // Standard error from the Beta(1, alpha) variance; the sample one vanishes
  // when every stick rounds to 1.
  const double mean_se = std::sqrt(alpha / ((1.0 + alpha) * (1.0 + alpha) * (2.0 + alpha)) / n);
  report.statistics.push_back({"first_stick_mean", expected_mean, mean_first.mean(),
                               kNoPValue, 4.0 * mean_se, mean_gap <= 4.0 * mean_se});

  const double witness = std::exp2(-alpha);
  const double rate = static_cast<double>(first_over) / n;
  const double se = BinomialStandardError(witness, n);
  report.statistics.push_back({"first_stick_over_half", witness, rate,
                               kNoPValue, 4.0 * se,
                               std::abs(rate - witness) <= 4.0 * se});

  const double largest_rate = static_cast<double>(largest_over) / n;
  report.statistics.push_back({"largest_stick_over_half", witness, largest_rate,
                               kNoPValue, 4.0 * se,
                               largest_rate >= witness - 4.0 * se});
  Finish(report);
  return report;
}

DpCheckReport CheckMinimizerLaw(double alpha, const DpCheckOptions& options,
                                bool against_uniform, int bins) {
  ValidateCommon(alpha, options);
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  const int64_t n = options.trials;
  std::vector<double> minimizers(n);
  PriorOptions prior;
  prior.truncation = options.truncation;
  ParallelFor(n, options.threads, [&](int64_t i) {
    Rng rng = MakeStream(options.seed, static_cast<uint64_t>(i));
    minimizers[i] = SampleStickBreaking(alpha, rng, prior).minimizer();
  });

  DpCheckReport report;
  report.check = against_uniform ? "minimizer_uniform" : "minimizer_law";
  report.alpha = alpha;
  report.trials = n;
  const double threshold = options.significance;
  if (against_uniform) {
    report.statistics.push_back(KsEntry(
        "minimizer_ks", 0.0,
        KsOneSample(minimizers, [](double x) { return std::clamp(x, 0.0, 1.0); }),
        threshold));
  } else {
    MarginalNu nu(alpha);
    report.statistics.push_back(KsEntry(
        "minimizer_ks", 0.0,
        KsOneSample(minimizers, [&nu](double x) { return nu.Cdf(x); }), threshold));
  }
  std::vector<int64_t> counts(bins, 0);
  for (double x : minimizers) {
    counts[std::min(bins - 1, static_cast<int>(x * bins))] += 1;
  }
  const double h = LowerDensityBound(alpha), upper = UpperDensityBound(alpha);
  for (int b = 0; b < bins; ++b) {
    const double p = static_cast<double>(counts[b]) / n;
    const double slack = 4.0 * bins * BinomialStandardError(std::max(p, 1.0 / n), n);
    const double density = p * bins;
    report.statistics.push_back(
        {"bin_density", (b + 0.5) / bins, density, kNoPValue, slack,
         density >= h - slack && density <= upper + slack});
  }
  Finish(report);
  return report;
}

}  // namespace privopt
