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

#include "ddmag/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "ddmag/types.hpp"

namespace ddmag {
namespace {

void check(const DephasingParams& p, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("oracle: t must be >= 0");
  if (!(p.omega_c >= 0.0)) throw InvalidArgument("oracle: omega_c must be >= 0");
}

}  // namespace

double sinc(double x) {
  if (std::abs(x) < 1e-6) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double fid_mean_jy(const DephasingParams& p, double t) {
  check(p, t);
  return p.j * std::sin(p.omega_s * t) * sinc(p.omega_c * t);
}

VarianceParts fid_var_jy(const DephasingParams& p, double t) {
  check(p, t);
  const double c2 = std::cos(2.0 * p.omega_s * t) * sinc(2.0 * p.omega_c * t);
  const double s = std::sin(p.omega_s * t) * sinc(p.omega_c * t);
  VarianceParts v;
  v.quantum = std::max(0.0, 0.25 * p.j * (1.0 + c2));
  v.classical = std::max(0.0, 0.5 * p.j * p.j * (1.0 - c2 - 2.0 * s * s));
  return v;
}

}  // namespace ddmag
