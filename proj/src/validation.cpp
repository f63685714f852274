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

#include "ddmag/validation.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "ddmag/oracle.hpp"
#include "ddmag/rng.hpp"
#include "ddmag/simd/kernels.hpp"

namespace ddmag {
namespace {

std::vector<cplx> random_vector(std::size_t n, std::uint64_t stream) {
  RngStream rng(2024, stream);
  std::vector<cplx> v(n);
  for (auto& x : v) x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return v;
}

SpinState random_state(SpinMagnitude j, std::uint64_t stream) {
  auto v = random_vector(j.dim(), stream);
  double n = 0;
  for (auto& x : v) n += std::norm(x);
  for (auto& x : v) x /= std::sqrt(n);
  return SpinState(j, std::move(v));
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

CheckResult commutator() {
  const SpinMagnitude j(40);
  const auto& ops = operators_for(j);
  const auto v = random_vector(j.dim(), 1);
  const std::size_t n = j.dim();
  std::vector<cplx> a(n), b(n), c(n), d(n), z(n);
  ops.jy.apply(v, a);
  ops.jx.apply(a, b);  // Jx Jy v
  ops.jx.apply(v, a);
  ops.jy.apply(a, c);  // Jy Jx v
  ops.jz.apply(v, z);
  double err = 0.0, cas = 0.0;
  for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::abs(b[k] - c[k] - cplx(0, 1) * z[k]));
  std::vector<cplx> s(n, 0.0);
  for (const auto* op : {&ops.jx, &ops.jy, &ops.jz}) {
    op->apply(v, a);
    op->apply(a, d);
    for (std::size_t k = 0; k < n; ++k) s[k] += d[k];
  }
  for (std::size_t k = 0; k < n; ++k) cas = std::max(cas, std::abs(s[k] - j.casimir() * v[k]));
  return {"commutator and Casimir (J=20)", err < 1e-10 && cas < 1e-10,
          "max |[Jx,Jy]-iJz| = " + fmt(err) + ", max |J^2 - J(J+1)| = " + fmt(cas)};
}

CheckResult trajectory_norm() {
  const SpinMagnitude j(60);
  FieldConfig f{14.3e-3, 1.6e-6, 7e-4, kGamma, NoiseModel::Full3d};
  const Schedule s = build_schedule(SequenceKind::BUniDD, magic_tau(f, 1), 5, 3);
  RngStream rng(5, 0);
  const StrayField stray = sample_stray(f, rng);
  SpinState psi = prepare_css(j, {1, 0, 0});
  double worst_norm = 0.0, worst_cas = 0.0;
  PropagatorWorkspace ws;
  for (const auto& seg : s.segments) {
    const Vec3 b = segment_field(f, stray, seg.bias_sign);
    psi = evolve_segment(psi, b, 0.0, seg.duration);
    if (seg.pulse_after) apply_pi_pulse_x_inplace(psi);
    const Moments m = moments(psi);
    worst_norm = std::max(worst_norm, std::abs(psi.norm() - 1.0));
    worst_cas = std::max(worst_cas, std::abs(m.xx + m.yy + m.zz - j.casimir()));
  }
  return {"norm and Casimir along a noisy BUni-DD trajectory", worst_norm < 1e-10 && worst_cas < 1e-8,
          "norm drift " + fmt(worst_norm) + ", Casimir drift " + fmt(worst_cas)};
}

CheckResult c2p_independence() {
  const SpinMagnitude j(30);
  const SpinState psi = random_state(j, 3);
  const Vec3 b{1e-4, -2e-4, 3e-3};
  const Moments a = moments(evolve_segment(psi, b, 0.0, 1.3e-4));
  const Moments c = moments(evolve_segment(psi, b, 123.0, 1.3e-4));
  const double d = std::max({std::abs(a.mean.x - c.mean.x), std::abs(a.mean.y - c.mean.y),
                             std::abs(a.yy - c.yy)});
  return {"observables independent of c2p", d < 1e-10, "max difference " + fmt(d)};
}

CheckResult refocusing() {
  const SpinMagnitude j(100);
  FieldConfig f{14.3e-3, 0.0, 0.0, kGamma, NoiseModel::Full3d};
  const Schedule s = build_schedule(SequenceKind::BUniDD, magic_tau(f, 1), 100, 1);
  const SpinState psi0 = prepare_css(j, {1, 0, 0});
  const auto r = run_realization(psi0, s, f, {});
  double worst = 0.0;
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    if (s.samples[i].quarter == 4) worst = std::max(worst, 1.0 - r.obs[i].fidelity);
  }
  return {"refocusing at cycle boundaries (100 cycles)", worst < 1e-9, "max infidelity " + fmt(worst)};
}

CheckResult prm_exactness() {
  RunConfig cfg;
  cfg.j = 50;
  cfg.field = {14.3e-3, 1.6e-6, 0.0, kGamma, NoiseModel::Full3d};
  cfg.sequence = SequenceKind::BUniDD;
  cfg.n_cycles = 20;
  cfg.samples_per_quarter = 4;
  cfg.realizations = 1;
  const auto sim = simulate(cfg, 1);
  const double rel = sim.estimate ? std::abs(sim.estimate->b0_hat / cfg.field.b0 - 1.0) : 1.0;
  return {"phase relay recovers b0 without noise", rel < 1e-6, "relative error " + fmt(rel)};
}

CheckResult dephasing_oracle() {
  RunConfig cfg;
  cfg.j = 20;
  cfg.field = {0.0, 160e-6, 1e-4, kGamma, NoiseModel::Dephasing};
  cfg.sequence = SequenceKind::Fid;
  const double wc = kGamma * cfg.field.bc;
  cfg.duration = 5.0 / wc;
  cfg.n_cycles = 5;
  cfg.samples_per_quarter = 1;
  cfg.realizations = 4000;
  const auto sim = simulate(cfg, 1);
  const auto& e = sim.ensemble;
  const DephasingParams p{kGamma * cfg.field.b0, wc, cfg.j};
  double worst = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double t = e.samples[i].t;
    const double se = std::sqrt(e.var_c[i] / static_cast<double>(e.realizations)) + 1e-12;
    worst = std::max(worst, std::abs(e.mean_jy[i] - fid_mean_jy(p, t)) / se);
  }
  return {"Monte Carlo mean matches the dephasing closed form", worst < 4.0,
          "worst deviation " + fmt(worst) + " standard errors"};
}

CheckResult thread_determinism(unsigned threads) {
  RunConfig cfg;
  cfg.j = 10;
  cfg.field = {14.3e-3, 1.6e-6, 1e-4, kGamma, NoiseModel::Full3d};
  cfg.n_cycles = 3;
  cfg.realizations = 37;
  std::ostringstream a, b;
  write_timeseries(a, simulate(cfg, 1));
  write_timeseries(b, simulate(cfg, std::max(2u, threads)));
  return {"identical output for 1 and several workers", a.str() == b.str(), ""};
}

CheckResult simd_equivalence() {
  const auto* wide = simd::kernels_for(simd::Isa::Avx2);
  if (!wide) return {"SIMD kernels match scalar", true, "no vector ISA available; skipped"};
  const auto& sc = simd::scalar_kernels();
  const SpinMagnitude j(37);
  const auto& ops = operators_for(j);
  const auto v = random_vector(j.dim(), 7);
  const std::size_t n = j.dim();
  std::vector<cplx> a(n), b(n);
  sc.tridiag_apply(a.data(), v.data(), ops.jz.diag.data(), ops.jy.upper.data(), 0.3, n);
  wide->tridiag_apply(b.data(), v.data(), ops.jz.diag.data(), ops.jy.upper.data(), 0.3, n);
  double err = 0.0;
  for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::abs(a[k] - b[k]));
  const auto ma = sc.moments(v.data(), ops.ladder.data(), ops.m.data(), n);
  const auto mb = wide->moments(v.data(), ops.ladder.data(), ops.m.data(), n);
  err = std::max({err, std::abs(ma.jplus - mb.jplus) / (1.0 + std::abs(ma.jplus)),
                  std::abs(ma.jplus2 - mb.jplus2) / (1.0 + std::abs(ma.jplus2))});
  return {"SIMD kernels match scalar", err < 1e-12, "max difference " + fmt(err)};
}

CheckResult css_metrics() {
  double worst = 0.0;
  for (int tj : {1, 7, 40, 201}) {
    const auto m = squeezing_metrics(prepare_css(SpinMagnitude(tj), {1, 0, 0}));
    worst = std::max({worst, std::abs(m.xi2_s - 1.0), std::abs(m.lambda - 1.0)});
  }
  return {"coherent state has xi2 = lambda = 1", worst < 1e-10, "max deviation " + fmt(worst)};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(unsigned threads) {
  const std::vector<std::pair<std::string, std::function<CheckResult()>>> checks{
      {"commutator", commutator},
      {"trajectory", trajectory_norm},
      {"c2p", c2p_independence},
      {"refocus", refocusing},
      {"prm", prm_exactness},
      {"oracle", dephasing_oracle},
      {"threads", [threads] { return thread_determinism(threads); }},
      {"simd", simd_equivalence},
      {"css", css_metrics},
  };
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : checks) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  }
  return out;
}

ScenarioResult run_validate(const ScenarioOptions& opt) {
  ScenarioResult res;
  const auto checks = run_invariant_suite(opt.threads);
  std::filesystem::create_directories(opt.out_dir);
  const auto path = (std::filesystem::path(opt.out_dir) / "validation.txt").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
    res.summary.add(c.passed ? "PASS" : "FAIL", c.name + (c.detail.empty() ? "" : ": " + c.detail));
    if (!c.passed) res.failures.push_back(c.name);
  }
  res.files.push_back(path);
  return res;
}

}  // namespace ddmag
