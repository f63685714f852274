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

// Pulse schedules and single-realization simulation.
//
// Time order within a BUni-DD cycle is U, X, U, X, Ubar, X, Ubar, X: each
// free segment is followed by an ideal pi pulse about x. Uni-DD uses the
// same pattern with the bias never reversed. Samples taken at a segment end
// see the state before the following pulse.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ddmag/fields.hpp"
#include "ddmag/spinalg.hpp"

namespace ddmag {

enum class SequenceKind { Fid, UniDD, BUniDD };

const char* sequence_name(SequenceKind k);

struct Segment {
  double duration = 0.0;
  int bias_sign = 1;
  bool pulse_after = false;
};

struct SamplePoint {
  double t = 0.0;
  std::size_t segment = 0;  // segment containing the sample
  double offset = 0.0;      // time since the segment start
  int cycle = 1;            // >= 1; groups of four segments
  int quarter = 1;          // 1..4 within the cycle
};

struct Schedule {
  SequenceKind kind = SequenceKind::Fid;
  double tau = 0.0;  // segment length (FID: nominal quarter used for labels)
  int n_cycles = 0;
  std::vector<Segment> segments;
  std::vector<double> segment_start;
  std::vector<SamplePoint> samples;  // sorted by t, first one at t = 0

  double duration() const;
  std::size_t pulse_count() const;
};

/// FID runs for n_cycles * 4 tau with the same sample grid as the DD
/// sequences; Uni-DD and BUni-DD get 4 segments of tau per cycle.
/// Samples sit at offsets tau k / samples_per_quarter, k = 1..spq, inside
/// every quarter, plus t = 0.
Schedule build_schedule(SequenceKind kind, double tau, int n_cycles, int samples_per_quarter);

/// Single free segment sampled at the given strictly increasing times in
/// (0, duration]. A sample at t = 0 is always prepended.
Schedule build_fid(double duration, std::span<const double> times);

/// Non-fatal consistency notes, e.g. a tau off the magic condition.
std::vector<std::string> schedule_warnings(const Schedule& s, const FieldConfig& cfg);

struct Observation {
  double jx = 0.0, jy = 0.0, jz = 0.0;
  double jy2 = 0.0;       // <Jy^2>
  double jy_plus = 0.0;   // <Jy> after an extra exp(-i d Jz) at the sample time
  double jy_minus = 0.0;  // same with -d
  double fidelity = 0.0;  // |<psi0|psi(t)>|^2
};

struct RunOptions {
  double c2p = 0.0;
  /// Phase offset injected for the slope estimate; 0 disables it.
  double slope_delta = 0.0;
  bool record_fidelity = true;
};

struct RealizationSeries {
  std::vector<Observation> obs;  // one per schedule sample
  StrayField stray;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Propagates state0 through the schedule; pure given its inputs.
RealizationSeries run_realization(const SpinState& state0, const Schedule& schedule,
                                  const FieldConfig& cfg, const StrayField& stray,
                                  const RunOptions& opt = {});

/// Same, also returning the state at the end of the schedule (after the
/// trailing pulse, if any).
RealizationSeries run_realization(const SpinState& state0, const Schedule& schedule,
                                  const FieldConfig& cfg, const StrayField& stray,
                                  const RunOptions& opt, SpinState& final_state);

/// Rotation angle in [0, pi] of the whole schedule's propagator, global
/// phase removed. Computed on spin 1/2; the angle does not depend on J.
double net_rotation_angle(const Schedule& schedule, const FieldConfig& cfg,
                          const StrayField& stray);

}  // namespace ddmag
