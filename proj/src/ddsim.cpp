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

#include "ddmag/ddsim.hpp"

#include <cmath>
#include <sstream>

namespace ddmag {

const char* sequence_name(SequenceKind k) {
  switch (k) {
    case SequenceKind::Fid: return "fid";
    case SequenceKind::UniDD: return "unidd";
    case SequenceKind::BUniDD: return "buni";
  }
  return "?";
}

double Schedule::duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

std::size_t Schedule::pulse_count() const {
  std::size_t n = 0;
  for (const auto& s : segments) n += s.pulse_after ? 1 : 0;
  return n;
}

Schedule build_schedule(SequenceKind kind, double tau, int n_cycles, int samples_per_quarter) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("tau must be positive");
  if (n_cycles < 1) throw InvalidArgument("n_cycles must be >= 1");
  if (samples_per_quarter < 1) throw InvalidArgument("samples_per_quarter must be >= 1");
  Schedule s;
  s.kind = kind;
  s.tau = tau;
  s.n_cycles = n_cycles;
  const int quarters = 4 * n_cycles;
  switch (kind) {
    case SequenceKind::Fid:
      s.segments.push_back({quarters * tau, 1, false});
      s.segment_start.push_back(0.0);
      break;
    case SequenceKind::UniDD:
    case SequenceKind::BUniDD:
      for (int q = 0; q < quarters; ++q) {
        const int sign = (kind == SequenceKind::BUniDD && (q % 4) >= 2) ? -1 : 1;
        s.segments.push_back({tau, sign, true});
        s.segment_start.push_back(q * tau);
      }
      break;
    default:
      throw InvalidArgument("unknown sequence kind");
  }
  s.samples.push_back({0.0, 0, 0.0, 1, 1});
  for (int q = 0; q < quarters; ++q) {
    for (int k = 1; k <= samples_per_quarter; ++k) {
      SamplePoint p;
      const double off = tau * k / samples_per_quarter;
      p.cycle = q / 4 + 1;
      p.quarter = q % 4 + 1;
      if (kind == SequenceKind::Fid) {
        p.segment = 0;
        p.offset = q * tau + off;
      } else {
        p.segment = static_cast<std::size_t>(q);
        p.offset = off;
      }
      p.t = s.segment_start[p.segment] + p.offset;
      s.samples.push_back(p);
    }
  }
  return s;
}

Schedule build_fid(double duration, std::span<const double> times) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw InvalidArgument("FID duration must be positive");
  }
  Schedule s;
  s.kind = SequenceKind::Fid;
  s.tau = duration;
  s.n_cycles = 1;
  s.segments.push_back({duration, 1, false});
  s.segment_start.push_back(0.0);
  s.samples.push_back({0.0, 0, 0.0, 1, 1});
  double prev = 0.0;
  for (double t : times) {
    if (!(t > prev) || t > duration) {
      throw InvalidArgument("FID sample times must increase strictly within (0, duration]");
    }
    s.samples.push_back({t, 0, t, 1, 1});
    prev = t;
  }
  return s;
}

std::vector<std::string> schedule_warnings(const Schedule& s, const FieldConfig& cfg) {
  std::vector<std::string> out;
  if (s.kind != SequenceKind::Fid && cfg.B0 != 0.0) {
    const double mis = magic_mismatch(cfg, s.tau);
    if (mis > 1e-6) {
      std::ostringstream msg;
      msg << "tau misses the magic condition: gamma B0 tau is " << mis
          << " rad from a multiple of 2 pi";
      out.push_back(msg.str());
    }
  }
  for (auto& w : field_warnings(cfg)) out.push_back(std::move(w));
  return out;
}

namespace {

struct StepCache {
  struct Entry {
    int sign;
    double dt;
    RotationOperator op;
  };
  std::vector<Entry> entries;

  const RotationOperator& get(SpinMagnitude j, const FieldConfig& cfg, const StrayField& stray,
                              int sign, double dt) {
    for (const auto& e : entries) {
      if (e.sign == sign && e.dt == dt) return e.op;
    }
    const Vec3 b = segment_field(cfg, stray, sign);
    if (!b.finite()) throw InvalidArgument("non-finite segment field");
    const double mag = b.norm();
    if (entries.size() >= 64) entries.erase(entries.begin());
    entries.push_back({sign, dt, RotationOperator(j, b, cfg.gamma * mag * dt)});
    return entries.back().op;
  }
};

Observation observe(const SpinState& psi, const SpinState& psi0, const RunOptions& opt,
                    SpinState& scratch) {
  Observation o;
  const Moments mo = moments(psi);
  o.jx = mo.mean.x;
  o.jy = mo.mean.y;
  o.jz = mo.mean.z;
  o.jy2 = mo.yy;
  if (opt.slope_delta != 0.0) {
    scratch = psi;
    rotate_z_inplace(scratch, opt.slope_delta);
    o.jy_plus = moments(scratch).mean.y;
    scratch = psi;
    rotate_z_inplace(scratch, -opt.slope_delta);
    o.jy_minus = moments(scratch).mean.y;
  } else {
    o.jy_plus = o.jy_minus = o.jy;
  }
  if (opt.record_fidelity) o.fidelity = fidelity(psi0, psi);
  return o;
}

void check_norm(const SpinState& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw NumericalError("propagation lost unitarity beyond 1e-10");
  }
}

}  // namespace

RealizationSeries run_realization(const SpinState& state0, const Schedule& schedule,
                                  const FieldConfig& cfg, const StrayField& stray,
                                  const RunOptions& opt, SpinState& final_state) {
  require_normalized(state0);
  validate(cfg);
  const SpinMagnitude j = state0.spin();
  RealizationSeries out;
  out.stray = stray;
  out.obs.reserve(schedule.samples.size());

  SpinState psi = state0;
  SpinState scratch = state0;
  PropagatorWorkspace ws;
  StepCache cache;
  std::size_t next = 0;
  const auto& samples = schedule.samples;
  for (std::size_t si = 0; si < schedule.segments.size(); ++si) {
    const Segment& seg = schedule.segments[si];
    double local = 0.0;
    while (next < samples.size() && samples[next].segment == si) {
      const double dt = samples[next].offset - local;
      if (dt < 0.0) throw InvalidArgument("schedule samples are not ordered");
      if (dt > 0.0) cache.get(j, cfg, stray, seg.bias_sign, dt).apply(psi, ws);
      local = samples[next].offset;
      out.obs.push_back(observe(psi, state0, opt, scratch));
      ++next;
    }
    const double rest = seg.duration - local;
    if (rest > 0.0) cache.get(j, cfg, stray, seg.bias_sign, rest).apply(psi, ws);
    check_norm(psi);
    if (seg.pulse_after) apply_pi_pulse_x_inplace(psi);
  }
  if (next != samples.size()) throw InvalidArgument("schedule has samples outside its segments");
  final_state = std::move(psi);
  return out;
}

RealizationSeries run_realization(const SpinState& state0, const Schedule& schedule,
                                  const FieldConfig& cfg, const StrayField& stray,
                                  const RunOptions& opt) {
  SpinState final_state = state0;
  return run_realization(state0, schedule, cfg, stray, opt, final_state);
}

double net_rotation_angle(const Schedule& schedule, const FieldConfig& cfg,
                          const StrayField& stray) {
  const SpinMagnitude half(1);
  const SpinState up = SpinState::basis(half, 0.5), down = SpinState::basis(half, -0.5);
  RunOptions opt;
  opt.record_fidelity = false;
  SpinState a = up, b = down;
  run_realization(up, schedule, cfg, stray, opt, a);
  run_realization(down, schedule, cfg, stray, opt, b);
  // Columns U|up>, U|down>; divide out sqrt(det) to land in SU(2).
  const cplx u00 = a.amplitudes()[0], u10 = a.amplitudes()[1];
  const cplx u01 = b.amplitudes()[0], u11 = b.amplitudes()[1];
  const cplx phase = std::exp(cplx(0.0, -0.5 * std::arg(u00 * u11 - u01 * u10)));
  const cplx p = u00 * phase, q = u10 * phase;
  const double s = std::sqrt(std::norm(q) + p.imag() * p.imag());
  return 2.0 * std::atan2(s, std::abs(p.real()));
}

}  // namespace ddmag
