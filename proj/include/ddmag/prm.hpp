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

// Phase relay estimation of the signal field.
//
// The local signal phase is what remains of the transverse spin angle once
// the known bias rotation is removed. Pulses negate it, so under DD it
// follows a sawtooth: in every quarter it sweeps an interval of length
// theta0 = gamma b0 tau, starting at 0 in odd quarters and at -theta0 in
// even ones. Adding 2 theta0 * (2n-2, 2n-1, 2n-1, 2n) in quarters 1..4 of
// cycle n turns the sawtooth into the line gamma b0 t.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ddmag/ddsim.hpp"
#include "ddmag/ensemble.hpp"

namespace ddmag {

enum class PhaseMode { Atan2Xy, ArcsinJy, SinusoidFit };

const char* phase_mode_name(PhaseMode m);

struct PhaseSeries {
  SequenceKind kind = SequenceKind::Fid;
  std::vector<SamplePoint> samples;
  std::vector<double> raw;    // lab-frame angle in (-pi, pi]
  std::vector<double> bias;   // known bias rotation angle, pulses included
  std::vector<double> local;  // signal phase, unwrapped within segments
  std::vector<double> std;    // single-readout phase uncertainty; may be empty
  std::vector<char> flagged;  // arcsin argument beyond 1 + 1e-6, or no amplitude

  std::size_t size() const { return samples.size(); }
  /// Lab-frame phase without branch cuts.
  double total(std::size_t i) const { return bias[i] + local[i]; }
};

/// Angle accumulated by the bias alone at every sample: sign * gamma B0 dt
/// per segment, negated by each pulse.
std::vector<double> bias_reference(const Schedule& schedule, const FieldConfig& cfg);

/// `lambda_j` is the initial polarisation lambda * J, used to flag arcsin
/// arguments. The arcsin mode divides by the instantaneous amplitude
/// sqrt(<Jx>^2 + <Jy>^2) instead of lambda * J.
PhaseSeries extract_phase(const Schedule& schedule, const FieldConfig& cfg,
                          std::span<const double> jx, std::span<const double> jy, PhaseMode mode,
                          double lambda_j);

/// Ensemble version; also fills the per-sample phase std from the total
/// Jy variance and the amplitude envelope.
PhaseSeries extract_phase(const EnsembleSeries& ens, const Schedule& schedule,
                          const FieldConfig& cfg, PhaseMode mode, double lambda_j);

/// Multiple of 2 theta0 added in (cycle, quarter).
int relay_multiple(int cycle, int quarter);

/// Slope of the signal phase over the first quarter, times tau.
double crude_theta0(const PhaseSeries& phases, double tau);

/// Relayed phases; identity for FID.
std::vector<double> relay(const PhaseSeries& phases, double theta0);

/// Residual sum of squares of a straight-line fit to relay(phases, theta0).
double relay_residual(const PhaseSeries& phases, double theta0);

struct PrmEstimate {
  double theta0_crude = 0.0;
  double theta0_refined = 0.0;
  double b0_hat = 0.0;     // theta0_refined / (gamma tau)
  double b0_std = 0.0;
  double b0_slope = 0.0;   // slope of the relayed line / gamma
  double residual = 0.0;   // RSS at the optimum
  double r2 = 0.0;
  std::size_t n_points = 0;
  bool multimodal = false;        // more than one local minimum in the bracket
  bool bracket_expanded = false;  // optimum fell outside [0.5, 1.5] * crude
};

/// Golden-section search for theta0 in [0.5, 1.5] * crude (absolute floor on
/// the half-width), tolerance 1e-12 rad. `realizations` scales the per-sample
/// phase std into a standard error of the ensemble-mean phase.
PrmEstimate refine_theta0(const PhaseSeries& phases, double theta0_crude, double tau,
                          double gamma, std::size_t realizations = 1);

/// crude_theta0 followed by refine_theta0.
PrmEstimate estimate_b0(const PhaseSeries& phases, double tau, double gamma,
                        std::size_t realizations = 1);

/// Independent estimate from every kept realization (run the ensemble with
/// keep_realizations). Their spread gives the ensemble standard error.
std::vector<PrmEstimate> estimate_each(const EnsembleSeries& ens, const Schedule& schedule,
                                       const FieldConfig& cfg, PhaseMode mode, double lambda_j);

}  // namespace ddmag
