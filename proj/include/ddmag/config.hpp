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

// Run configuration and its text format.
//
// One `key = value` pair per line; `#` starts a comment. Field values take an
// optional unit suffix (G, mG, uG, nG; default G) and times take s, ms, us or
// ns (default s). Unknown or repeated keys are errors.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ddmag/ddsim.hpp"
#include "ddmag/fields.hpp"
#include "ddmag/metrics.hpp"
#include "ddmag/prm.hpp"
#include "ddmag/probes.hpp"

namespace ddmag {

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct RunConfig {
  double j = 0.0;
  FieldConfig field;
  double c2p = 0.0;
  ProbeSpec probe;
  SequenceKind sequence = SequenceKind::BUniDD;
  std::optional<double> tau;  // unset: magic_tau(field, magic_m)
  int magic_m = 1;
  int n_cycles = 10;
  std::optional<double> duration;  // FID only; default n_cycles * 4 tau
  int samples_per_quarter = 1;
  std::size_t realizations = 1000;
  std::uint64_t seed = 1;
  PhaseMode phase_mode = PhaseMode::Atan2Xy;
  bool finite_shots = false;
  OmegaInterpretation omega = OmegaInterpretation::Signal;
  double slope_delta = 1e-4;
  double sweep_bc_min = 1e-12;
  double sweep_bc_max = 1e-3;
  int sweep_points_per_decade = 2;
  double sweep_time = 0.2;
  std::vector<std::string> warnings;

  SpinMagnitude spin() const { return SpinMagnitude::from_value(j); }
  double resolved_tau() const;
  Schedule schedule() const;
};

/// Throws ConfigError with the offending line number.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// "1.6uG" -> 1.6e-6. Bare numbers are Gauss.
double parse_field(std::string_view v);
/// "0.1ms" -> 1e-4. Bare numbers are seconds.
double parse_time(std::string_view v);

}  // namespace ddmag
