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

// Sensitivity and the closed-form reference curves. Fields in Gauss,
// sensitivities in G/sqrt(Hz) unless a name says otherwise.

#include <span>
#include <vector>

#include "ddmag/ensemble.hpp"
#include "ddmag/fields.hpp"
#include "ddmag/probes.hpp"

namespace ddmag {

struct SensitivityPoint {
  double t = 0.0;
  double eta = 0.0;       // infinite when the slope vanishes
  double delta_jy = 0.0;
  double slope = 0.0;     // d<Jy>/dphi
};

/// eta = delta_jy / (|slope| gamma sqrt(t)). Throws for t <= 0.
SensitivityPoint sensitivity(double delta_jy, double slope, double t, double gamma = kGamma);

/// 1 / (gamma sqrt(2 t J))
double sql_reference(double j, double t, double gamma = kGamma);
/// 1 / (gamma J sqrt(t))
double hl_reference(double j, double t, double gamma = kGamma);

/// sqrt(1 + r tan^2(omega t)), r = Var(Jx)_0 / Var(Jy)_0.
double theta_factor(double r, double omega, double t);

/// (theta / lambda) sqrt(xi2) / (gamma sqrt(2 t J)). Throws for lambda = 0.
double sss_reference(double j, double t, double gamma, const SqueezingMetrics& m, double theta);

enum class OmegaInterpretation { Signal, BiasPlusSignal };

/// Angular frequency used inside theta_factor: gamma b0 or gamma (B0 + b0).
double theta_omega(OmegaInterpretation w, const FieldConfig& cfg);

enum class ThresholdKind { CssNoDD, SssNoDD, WithDD };

struct ThresholdResult {
  double value = 0.0;  // Gauss
  bool converged = true;
  int iterations = 0;
};

/// css_noDD: 1/(gamma t sqrt J); sss_noDD: 1/(gamma t J); withDD: the
/// self-consistent bc = (B0/bc)^2 / (gamma t sqrt J), found by damped
/// fixed-point iteration in log space.
ThresholdResult threshold_reference(ThresholdKind kind, double j, double t, double gamma,
                                    double B0);

/// Per-sample sensitivity of an ensemble run with an injected phase offset.
/// Uses the total (quantum + classical) Jy spread and a central difference
/// for the slope. Samples at t = 0 are skipped.
std::vector<SensitivityPoint> ensemble_sensitivity(const EnsembleSeries& ens, double gamma);

/// Linear interpolation between the local minima of eta, capped by eta.
std::vector<double> lower_envelope(std::span<const double> eta);

/// Smallest finite eta; infinity if none.
double optimal_eta(std::span<const SensitivityPoint> pts);

}  // namespace ddmag
