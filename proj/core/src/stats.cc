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

#include "privopt/stats.h"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "privopt/errors.h"

namespace privopt {
namespace {

// Stephens' small-sample correction to the asymptotic KS statistic.
double KsPValue(double d, double effective_n) {
  const double root = std::sqrt(effective_n);
  return KolmogorovSurvival((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

double KolmogorovSurvival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;  // series converges slowly; Q is 1 to 1e-15
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult KsOneSample(std::vector<double> samples,
                       const std::function<double(double)>& cdf,
                       const std::function<double(double)>& cdf_left) {
  if (samples.empty()) throw DomainError("KS test needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double f_left = cdf_left ? cdf_left(samples[i]) : f;
    d = std::max({d, (i + 1) / n - f, f_left - i / n});
  }
  return {d, KsPValue(d, n), 0};
}

TestResult KsTwoSample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS test needs samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  size_t i = 0;
  size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(i / na - j / nb));
  }
  return {d, KsPValue(d, na * nb / (na + nb)), 0};
}

double ChiSquareSurvival(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

TestResult ChiSquareUniform(std::span<const int64_t> counts) {
  if (counts.empty()) throw DomainError("chi-square needs at least one cell");
  double total = 0.0;
  for (int64_t c : counts) total += static_cast<double>(c);
  if (total <= 0.0) throw DomainError("chi-square needs observations");
  const double expected = total / counts.size();
  double stat = 0.0;
  for (int64_t c : counts) {
    const double diff = c - expected;
    stat += diff * diff / expected;
  }
  const int dof = static_cast<int>(counts.size()) - 1;
  return {stat, ChiSquareSurvival(stat, dof), dof};
}

TestResult ChiSquareIndependence(
    const std::vector<std::vector<int64_t>>& table) {
  if (table.empty()) throw DomainError("empty contingency table");
  const size_t cols = table.front().size();
  std::vector<double> row_sum(table.size(), 0.0);
  std::vector<double> col_sum(cols, 0.0);
  double total = 0.0;
  for (size_t r = 0; r < table.size(); ++r) {
    if (table[r].size() != cols) throw DomainError("ragged contingency table");
    for (size_t c = 0; c < cols; ++c) {
      row_sum[r] += table[r][c];
      col_sum[c] += table[r][c];
      total += table[r][c];
    }
  }
  if (total <= 0.0) throw DomainError("chi-square needs observations");
  double stat = 0.0;
  for (size_t r = 0; r < table.size(); ++r) {
    if (row_sum[r] == 0.0) continue;
    for (size_t c = 0; c < cols; ++c) {
      if (col_sum[c] == 0.0) continue;
      const double expected = row_sum[r] * col_sum[c] / total;
      const double diff = table[r][c] - expected;
      stat += diff * diff / expected;
    }
  }
  const auto nonzero = [](const std::vector<double>& v) {
    return static_cast<int>(std::count_if(v.begin(), v.end(),
                                          [](double s) { return s > 0.0; }));
  };
  const int dof = (nonzero(row_sum) - 1) * (nonzero(col_sum) - 1);
  return {stat, ChiSquareSurvival(stat, dof), dof};
}

Interval WilsonInterval(int64_t successes, int64_t trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw DomainError("Wilson interval needs 0 <= successes <= trials > 0");
  }
  const double n = static_cast<double>(trials);
  const double p = successes / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double BinomialStandardError(double p, int64_t trials) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

void RunningStats::Add(double x) {
  ++count_;
  if (count_ == 1) {
    min_ = max_ = x;
  } else {
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }
  const double delta = x - mean_;
  mean_ += delta / count_;
  m2_ += delta * (x - mean_);
}

double RunningStats::variance() const {
  return count_ > 1 ? m2_ / (count_ - 1) : 0.0;
}

double RunningStats::standard_error() const {
  return count_ > 0 ? std::sqrt(variance() / count_) : 0.0;
}

}  // namespace privopt
