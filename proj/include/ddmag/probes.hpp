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

// Probe states: coherent and squeezed spin states plus squeezing metrics.

#include <optional>

#include "ddmag/spinalg.hpp"

namespace ddmag {

enum class ProbeKind { Css, Sss };

struct ProbeSpec {
  ProbeKind kind = ProbeKind::Css;
  Vec3 direction{1.0, 0.0, 0.0};
  /// One-axis twisting strength mu in exp(-i mu Jz^2 / 2). Unset: optimise.
  std::optional<double> twist;
  /// Requested squeezing parameter; takes precedence over `twist`.
  std::optional<double> target_xi2;
};

struct SqueezingMetrics {
  double xi2_s = 1.0;
  double lambda = 1.0;
  double var_x0 = 0.0;
  double var_y0 = 0.0;
  double min_variance = 0.0;
  /// Angle of the minimum-variance axis in the transverse plane, measured
  /// from e1 towards e2 = n x e1, folded into (-pi/2, pi/2].
  double squeeze_angle = 0.0;
  Vec3 mean_direction{1.0, 0.0, 0.0};
  bool mean_valid = true;    // false when |<J>| is numerically zero
  bool lambda_valid = true;  // false when <Jx> vanishes
};

/// Spin coherent state with <n.J> = J. Throws for a zero direction.
SpinState prepare_css(SpinMagnitude j, const Vec3& direction);

struct PreparedProbe {
  SpinState state;
  SqueezingMetrics metrics;
  double twist = 0.0;
};

/// One-axis-twisted state with mean spin along +x and the squeezed
/// quadrature rotated onto y. Throws NumericalError when a requested xi2
/// cannot be reached.
PreparedProbe prepare_sss(SpinMagnitude j, const ProbeSpec& spec);

PreparedProbe prepare_probe(SpinMagnitude j, const ProbeSpec& spec);

/// Metrics of an arbitrary normalised state. The minimum transverse variance
/// comes from a golden-section search over the transverse angle.
SqueezingMetrics squeezing_metrics(const SpinState& psi);

/// Same as above but with precomputed moments.
SqueezingMetrics squeezing_metrics(const Moments& mo, double j);

}  // namespace ddmag
