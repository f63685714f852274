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

// Experiment drivers behind the command-line subcommands.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ddmag/config.hpp"
#include "ddmag/csv.hpp"
#include "ddmag/ensemble.hpp"
#include "ddmag/prm.hpp"

namespace ddmag {

struct SimulationOutput {
  Schedule schedule;
  PreparedProbe probe;
  EnsembleSeries ensemble;
  PhaseSeries phases;
  std::optional<PrmEstimate> estimate;  // DD runs with at least two cycles
  std::vector<double> relayed;
};

/// Probe preparation, ensemble run and phase extraction for `cfg`.
SimulationOutput simulate(const RunConfig& cfg, unsigned threads, bool keep_realizations = false);

/// timeseries.csv body.
void write_timeseries(std::ostream& out, const SimulationOutput& sim);

/// sensitivity.csv body.
void write_sensitivity(std::ostream& out, const RunConfig& cfg, const SimulationOutput& sim);

struct SweepPoint {
  double bc = 0.0;
  double eta_opt = 0.0;  // G/sqrt(Hz)
  bool above_threshold = false;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double flat_eta = 0.0;            // eta_opt at the smallest bc
  std::optional<double> threshold;  // first bc with eta_opt > 1.2 flat_eta
};

/// Log-spaced bc values from lo to hi inclusive.
std::vector<double> sweep_grid(double lo, double hi, int per_decade);

/// Best sensitivity within cfg.sweep_time at one noise level. FID runs are
/// sampled on a log time grid; DD runs at the configured sample grid.
double optimal_sensitivity(const RunConfig& cfg, double bc, unsigned threads);

SweepResult noise_sweep(const RunConfig& cfg, unsigned threads);

void write_sweep(std::ostream& out, const SweepResult& sweep);

/// oracle.csv body: closed-form dephasing curves at 50 times over
/// [0, 5 / (gamma bc)] (or the configured duration when bc = 0).
void write_oracle(std::ostream& out, const RunConfig& cfg);

struct ScenarioOptions {
  std::string out_dir = ".";
  unsigned threads = 1;
};

struct ScenarioResult {
  Report summary;
  std::vector<std::string> files;
  std::vector<std::string> failures;  // validation failures
};

ScenarioResult run_simulate(const RunConfig& cfg, const ScenarioOptions& opt);
ScenarioResult run_estimate(const RunConfig& cfg, const ScenarioOptions& opt);
ScenarioResult run_sensitivity(const RunConfig& cfg, const ScenarioOptions& opt);
ScenarioResult run_noise_sweep(const RunConfig& cfg, const ScenarioOptions& opt);
ScenarioResult run_oracle(const RunConfig& cfg, const ScenarioOptions& opt);

}  // namespace ddmag
