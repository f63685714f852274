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

// Closed-form free evolution of an x-polarised coherent state under a
// static signal plus a z-only stray field uniform in [-bc, bc].

namespace ddmag {

struct DephasingParams {
  double omega_s = 0.0;  // gamma b0
  double omega_c = 0.0;  // gamma bc, >= 0
  double j = 1.0;
};

struct VarianceParts {
  double quantum = 0.0;
  double classical = 0.0;
  double total() const { return quantum + classical; }
};

/// sin(x)/x with a Taylor branch for |x| < 1e-6.
double sinc(double x);

/// J sin(ws t) sinc(wc t)
double fid_mean_jy(const DephasingParams& p, double t);

/// Quantum part (J/4)[1 + cos(2 ws t) sinc(2 wc t)] and classical part
/// (J^2/2)[1 - cos(2 ws t) sinc(2 wc t) - 2 sin^2(ws t) sinc^2(wc t)].
VarianceParts fid_var_jy(const DephasingParams& p, double t);

}  // namespace ddmag
