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

// Monte Carlo over quasi-static stray fields.

#include <cstdint>
#include <vector>

#include "ddmag/ddsim.hpp"

namespace ddmag {

struct EnsembleOptions {
  std::size_t realizations = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;  // speed only; results do not depend on it
  RunOptions run;
  /// Replace each <Jy> by a simulated projective Jy readout, drawn as the
  /// binomial outcome of 2J independent spin-1/2 measurements.
  bool finite_shots = false;
  bool keep_realizations = false;
};

/// Per-sample statistics. The classical variance is the sample variance of
/// the per-realization <Jy>; the quantum variance is the mean of the
/// per-realization Var(Jy). std_jy is the classical standard deviation.
struct EnsembleSeries {
  std::vector<SamplePoint> samples;
  std::vector<double> mean_jx, mean_jy, mean_jz;
  std::vector<double> std_jx, std_jy;
  std::vector<double> var_q, var_c;
  std::vector<double> mean_jy_plus, mean_jy_minus;
  std::vector<double> mean_fidelity;
  std::vector<double> m4_jy;  // fourth central moment of the per-realization <Jy>
  std::vector<double> var_var_q;  // sample variance of the per-realization Var(Jy)
  std::size_t realizations = 0;
  std::uint64_t seed = 0;
  double slope_delta = 0.0;
  std::vector<RealizationSeries> members;  // filled with keep_realizations

  std::size_t size() const { return samples.size(); }
  double var_total(std::size_t i) const { return var_q[i] + var_c[i]; }
};

/// Realization i draws its stray field from stream i of the master seed.
/// Any realization failure is rethrown with its index and seed.
EnsembleSeries run_ensemble(const FieldConfig& cfg, const Schedule& schedule,
                            const SpinState& probe, const EnsembleOptions& opt);

}  // namespace ddmag
