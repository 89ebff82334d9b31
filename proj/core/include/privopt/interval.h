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

#ifndef PRIVOPT_INTERVAL_H_
#define PRIVOPT_INTERVAL_H_

#include <functional>
#include <string>

namespace privopt {

// Closed interval [lo, hi] on the real line.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool Contains(double x) const { return lo <= x && x <= hi; }
  bool ContainsInterior(double x) const { return lo < x && x < hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// First-order oracle on [0,1]: returns a subgradient of the unknown
// function at the query point.
using GradientOracle = std::function<double(double)>;

}  // namespace privopt

#endif  // PRIVOPT_INTERVAL_H_
