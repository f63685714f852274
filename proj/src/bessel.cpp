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

#include "ddmag/bessel.hpp"

#include <cmath>

#include "ddmag/types.hpp"

namespace ddmag {

std::vector<double> bessel_j_sequence(double x, double tol) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw InvalidArgument("bessel_j_sequence: argument must be finite and >= 0");
  }
  if (x == 0.0) return {1.0};

  // Start well inside the region where J_k decays faster than exponentially.
  auto start = static_cast<std::size_t>(x + 30.0 + 15.0 * std::cbrt(x));
  if (start % 2 == 1) ++start;

  std::vector<double> j(start + 2, 0.0);
  j[start + 1] = 0.0;
  j[start] = 1e-280;
  for (std::size_t k = start; k >= 1; --k) {
    j[k - 1] = (2.0 * static_cast<double>(k) / x) * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e250) {
      for (std::size_t i = k - 1; i <= start; ++i) j[i] *= 1e-250;
    }
  }

  double sum = j[0];
  for (std::size_t k = 2; k <= start; k += 2) sum += 2.0 * j[k];
  for (double& v : j) v /= sum;

  std::size_t last = 0;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (static_cast<double>(k) <= x || std::abs(j[k]) > tol) last = k;
  }
  j.resize(last + 1);
  return j;
}

}  // namespace ddmag
