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

#include "ddmag/scenarios.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "ddmag/metrics.hpp"
#include "ddmag/oracle.hpp"

namespace ddmag {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

EnsembleOptions ensemble_options(const RunConfig& cfg, unsigned threads, bool keep) {
  EnsembleOptions o;
  o.realizations = cfg.realizations;
  o.seed = cfg.seed;
  o.threads = threads;
  o.run.c2p = cfg.c2p;
  o.run.slope_delta = cfg.slope_delta;
  o.finite_shots = cfg.finite_shots;
  o.keep_realizations = keep;
  return o;
}

std::ofstream open_output(const ScenarioOptions& opt, const std::string& name,
                          ScenarioResult& result) {
  std::filesystem::create_directories(opt.out_dir);
  const auto path = (std::filesystem::path(opt.out_dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  result.files.push_back(path);
  return out;
}

void finish(std::ofstream& out, const std::string& what) {
  out.flush();
  if (!out) throw Error("write failed for " + what);
}

Schedule sweep_schedule(const RunConfig& cfg) {
  const double total = cfg.sweep_time;
  if (cfg.sequence == SequenceKind::Fid) {
    constexpr int kPerDecade = 15;
    constexpr int kDecades = 6;
    std::vector<double> times;
    for (int k = 0; k <= kPerDecade * kDecades; ++k) {
      times.push_back(total * std::pow(10.0, -kDecades + static_cast<double>(k) / kPerDecade));
    }
    times.back() = total;
    return build_fid(total, times);
  }
  const double tau = cfg.resolved_tau();
  const int n = std::max(1, static_cast<int>(std::lround(total / (4.0 * tau))));
  return build_schedule(cfg.sequence, tau, n, cfg.samples_per_quarter);
}

double optimal_with(const RunConfig& cfg, const Schedule& schedule, const SpinState& probe,
                    double bc, unsigned threads) {
  FieldConfig field = cfg.field;
  field.bc = bc;
  EnsembleOptions o = ensemble_options(cfg, threads, false);
  o.run.record_fidelity = false;
  const EnsembleSeries ens = run_ensemble(field, schedule, probe, o);
  const auto pts = ensemble_sensitivity(ens, field.gamma);
  return optimal_eta(pts);
}

}  // namespace

SimulationOutput simulate(const RunConfig& cfg, unsigned threads, bool keep_realizations) {
  SimulationOutput sim{cfg.schedule(), prepare_probe(cfg.spin(), cfg.probe), {}, {}, {}, {}};
  sim.ensemble = run_ensemble(cfg.field, sim.schedule, sim.probe.state,
                              ensemble_options(cfg, threads, keep_realizations));
  const double lambda_j = sim.probe.metrics.lambda * cfg.j;
  sim.phases = extract_phase(sim.ensemble, sim.schedule, cfg.field, cfg.phase_mode, lambda_j);
  sim.relayed = sim.phases.local;
  try {
    sim.estimate = estimate_b0(sim.phases, sim.schedule.tau, cfg.field.gamma, cfg.realizations);
    sim.relayed = relay(sim.phases, sim.estimate->theta0_refined);
  } catch (const InvalidArgument&) {
    sim.estimate.reset();
  }
  return sim;
}

void write_timeseries(std::ostream& out, const SimulationOutput& sim) {
  CsvWriter csv(out, {"t_s", "mean_Jx", "mean_Jy", "std_Jy", "var_Q", "var_C", "phase_raw",
                      "phase_relayed", "phase_std"});
  const auto& e = sim.ensemble;
  for (std::size_t i = 0; i < e.size(); ++i) {
    csv.row({e.samples[i].t, e.mean_jx[i], e.mean_jy[i], e.std_jy[i], e.var_q[i], e.var_c[i],
             sim.phases.local[i], sim.relayed[i], sim.phases.std.empty() ? kNaN : sim.phases.std[i]});
  }
}

void write_sensitivity(std::ostream& out, const RunConfig& cfg, const SimulationOutput& sim) {
  CsvWriter csv(out, {"t_s", "eta_G_per_sqrtHz", "eta_T_per_sqrtHz", "sql", "hl", "sss_ref"});
  const auto pts = ensemble_sensitivity(sim.ensemble, cfg.field.gamma);
  const auto& m = sim.probe.metrics;
  const double r = m.var_y0 > 0.0 ? m.var_x0 / m.var_y0 : kNaN;
  const double omega = theta_omega(cfg.omega, cfg.field);
  for (const auto& p : pts) {
    double sss = kNaN;
    if (m.lambda_valid && std::isfinite(r)) {
      sss = sss_reference(cfg.j, p.t, cfg.field.gamma, m, theta_factor(r, omega, p.t));
    }
    csv.row({p.t, p.eta, p.eta * kTeslaPerGauss, sql_reference(cfg.j, p.t, cfg.field.gamma),
             hl_reference(cfg.j, p.t, cfg.field.gamma), sss});
  }
}

std::vector<double> sweep_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1) throw InvalidArgument("bad sweep range");
  const double a = std::log10(lo), b = std::log10(hi);
  const int n = static_cast<int>(std::floor((b - a) * per_decade + 1e-9));
  std::vector<double> out;
  for (int k = 0; k <= n; ++k) out.push_back(std::pow(10.0, a + static_cast<double>(k) / per_decade));
  if (out.back() < hi * (1.0 - 1e-12)) out.push_back(hi);
  out.front() = lo;
  return out;
}

double optimal_sensitivity(const RunConfig& cfg, double bc, unsigned threads) {
  const auto probe = prepare_probe(cfg.spin(), cfg.probe);
  return optimal_with(cfg, sweep_schedule(cfg), probe.state, bc, threads);
}

SweepResult noise_sweep(const RunConfig& cfg, unsigned threads) {
  const auto probe = prepare_probe(cfg.spin(), cfg.probe);
  const Schedule schedule = sweep_schedule(cfg);
  SweepResult res;
  for (double bc : sweep_grid(cfg.sweep_bc_min, cfg.sweep_bc_max, cfg.sweep_points_per_decade)) {
    res.points.push_back({bc, optimal_with(cfg, schedule, probe.state, bc, threads), false});
  }
  res.flat_eta = res.points.front().eta_opt;
  for (auto& p : res.points) {
    if (!res.threshold && p.eta_opt > 1.2 * res.flat_eta) res.threshold = p.bc;
    p.above_threshold = res.threshold.has_value();
  }
  return res;
}

void write_sweep(std::ostream& out, const SweepResult& sweep) {
  CsvWriter csv(out, {"bc_G", "eta_opt_T_per_sqrtHz", "threshold_flag"});
  for (const auto& p : sweep.points) {
    csv.row({p.bc, p.eta_opt * kTeslaPerGauss}, p.above_threshold ? 1 : 0);
  }
}

void write_oracle(std::ostream& out, const RunConfig& cfg) {
  const DephasingParams p{cfg.field.gamma * cfg.field.b0, cfg.field.gamma * cfg.field.bc, cfg.j};
  double end = 0.0;
  if (p.omega_c > 0.0) {
    end = 5.0 / p.omega_c;
  } else {
    end = cfg.duration ? *cfg.duration : cfg.schedule().duration();
  }
  CsvWriter csv(out, {"t_s", "mean_Jy", "var_Q", "var_C"});
  constexpr int kPoints = 50;
  for (int k = 0; k < kPoints; ++k) {
    const double t = end * k / (kPoints - 1);
    const auto v = fid_var_jy(p, t);
    csv.row({t, fid_mean_jy(p, t), v.quantum, v.classical});
  }
}

namespace {

void add_common(Report& r, const RunConfig& cfg, const SimulationOutput& sim) {
  r.add("J", cfg.j);
  r.add("sequence", std::string(sequence_name(cfg.sequence)));
  r.add("tau_s", sim.schedule.tau);
  r.add("duration_s", sim.schedule.duration());
  r.add("samples", static_cast<long long>(sim.schedule.samples.size()));
  r.add("realizations", static_cast<long long>(cfg.realizations));
  r.add("seed", std::to_string(cfg.seed));
  r.add("xi2_s", sim.probe.metrics.xi2_s);
  r.add("lambda", sim.probe.metrics.lambda);
  for (const auto& w : cfg.warnings) r.add("warning", w);
}

void add_estimate(Report& r, const RunConfig& cfg, const SimulationOutput& sim) {
  if (!sim.estimate) {
    r.add("estimate", std::string("unavailable (needs a DD run with >= 2 cycles)"));
    return;
  }
  const auto& e = *sim.estimate;
  r.add("phase_mode", std::string(phase_mode_name(cfg.phase_mode)));
  r.add("theta0_crude_rad", e.theta0_crude);
  r.add("theta0_refined_rad", e.theta0_refined);
  r.add("b0_hat_G", e.b0_hat);
  r.add("b0_std_G", e.b0_std);
  r.add("b0_slope_G", e.b0_slope);
  r.add("b0_true_G", cfg.field.b0);
  r.add("relative_error", cfg.field.b0 != 0.0 ? (e.b0_hat - cfg.field.b0) / cfg.field.b0 : kNaN);
  r.add("fit_residual", e.residual);
  r.add("fit_r2", e.r2);
  r.add("flag_multimodal", static_cast<long long>(e.multimodal));
  r.add("flag_bracket_expanded", static_cast<long long>(e.bracket_expanded));
  const std::size_t last = sim.phases.size() - 1;
  r.add("final_signal_phase_rad", sim.relayed[last]);
  r.add("final_total_phase_rad", sim.phases.total(last));
  long long flagged = 0;
  for (char f : sim.phases.flagged) flagged += f ? 1 : 0;
  r.add("flagged_samples", flagged);
}

}  // namespace

ScenarioResult run_simulate(const RunConfig& cfg, const ScenarioOptions& opt) {
  ScenarioResult res;
  const auto sim = simulate(cfg, opt.threads);
  auto out = open_output(opt, "timeseries.csv", res);
  write_timeseries(out, sim);
  finish(out, "timeseries.csv");
  add_common(res.summary, cfg, sim);
  add_estimate(res.summary, cfg, sim);
  return res;
}

ScenarioResult run_estimate(const RunConfig& cfg, const ScenarioOptions& opt) {
  ScenarioResult res;
  const auto sim = simulate(cfg, opt.threads);
  add_common(res.summary, cfg, sim);
  add_estimate(res.summary, cfg, sim);
  const auto pts = ensemble_sensitivity(sim.ensemble, cfg.field.gamma);
  if (!pts.empty()) {
    res.summary.add("eta_final_T_per_sqrtHz", pts.back().eta * kTeslaPerGauss);
    res.summary.add("eta_opt_T_per_sqrtHz", optimal_eta(pts) * kTeslaPerGauss);
  }
  auto ts = open_output(opt, "timeseries.csv", res);
  write_timeseries(ts, sim);
  finish(ts, "timeseries.csv");
  auto rep = open_output(opt, "estimate.txt", res);
  res.summary.write(rep);
  finish(rep, "estimate.txt");
  return res;
}

ScenarioResult run_sensitivity(const RunConfig& cfg, const ScenarioOptions& opt) {
  ScenarioResult res;
  const auto sim = simulate(cfg, opt.threads);
  auto out = open_output(opt, "sensitivity.csv", res);
  write_sensitivity(out, cfg, sim);
  finish(out, "sensitivity.csv");
  add_common(res.summary, cfg, sim);
  const auto pts = ensemble_sensitivity(sim.ensemble, cfg.field.gamma);
  const auto last = pts.empty() ? 0.0 : pts.back().t;
  res.summary.add("eta_opt_T_per_sqrtHz", optimal_eta(pts) * kTeslaPerGauss);
  if (last > 0.0) {
    res.summary.add("sql_final_T_per_sqrtHz", sql_reference(cfg.j, last, cfg.field.gamma) * kTeslaPerGauss);
    res.summary.add("hl_final_T_per_sqrtHz", hl_reference(cfg.j, last, cfg.field.gamma) * kTeslaPerGauss);
  }
  return res;
}

ScenarioResult run_noise_sweep(const RunConfig& cfg, const ScenarioOptions& opt) {
  ScenarioResult res;
  const auto sweep = noise_sweep(cfg, opt.threads);
  auto out = open_output(opt, "sweep.csv", res);
  write_sweep(out, sweep);
  finish(out, "sweep.csv");
  auto& r = res.summary;
  r.add("sequence", std::string(sequence_name(cfg.sequence)));
  r.add("sweep_time_s", cfg.sweep_time);
  r.add("points", static_cast<long long>(sweep.points.size()));
  r.add("flat_eta_T_per_sqrtHz", sweep.flat_eta * kTeslaPerGauss);
  r.add("measured_threshold_G", sweep.threshold ? *sweep.threshold : kNaN);
  const double g = cfg.field.gamma;
  r.add("ref_threshold_css_noDD_G", threshold_reference(ThresholdKind::CssNoDD, cfg.j, cfg.sweep_time, g, cfg.field.B0).value);
  r.add("ref_threshold_sss_noDD_G", threshold_reference(ThresholdKind::SssNoDD, cfg.j, cfg.sweep_time, g, cfg.field.B0).value);
  if (cfg.field.B0 != 0.0) {
    const auto dd = threshold_reference(ThresholdKind::WithDD, cfg.j, cfg.sweep_time, g, cfg.field.B0);
    r.add("ref_threshold_withDD_G", dd.value);
    if (!dd.converged) r.add("warning", std::string("withDD threshold iteration did not converge"));
  }
  return res;
}

ScenarioResult run_oracle(const RunConfig& cfg, const ScenarioOptions& opt) {
  ScenarioResult res;
  auto out = open_output(opt, "oracle.csv", res);
  write_oracle(out, cfg);
  finish(out, "oracle.csv");
  res.summary.add("omega_s_rad_per_s", cfg.field.gamma * cfg.field.b0);
  res.summary.add("omega_c_rad_per_s", cfg.field.gamma * cfg.field.bc);
  return res;
}

}  // namespace ddmag
