// Copyright 2026 The ddmag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Small numerical helpers shared by the estimators.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>

namespace ddmag::numerics {

/// Golden-section minimisation of a unimodal f on [a, b]; returns the
/// abscissa once the bracket is narrower than `tol`.
double golden_section_min(const std::function<double(double)>& f, double a, double b,
                          double tol);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rss = 0.0;        // residual sum of squares
  double r2 = 0.0;         // coefficient of determination
  double slope_se = 0.0;   // from the residual variance, n - 2 dof
  double sxx = 0.0;        // sum (x - xbar)^2
  std::size_t n = 0;
};

/// Ordinary least squares y = a + b x. Throws InvalidArgument for fewer than
/// two points or zero spread in x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Unwraps a phase sequence so consecutive steps stay within (-pi, pi].
void unwrap(std::span<double> phase);

}  // namespace ddmag::numerics
