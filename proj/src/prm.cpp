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

#include "ddmag/prm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddmag/numerics.hpp"

namespace ddmag {
namespace {

void require_sizes(const Schedule& s, std::span<const double> jx, std::span<const double> jy) {
  if (jx.size() != s.samples.size() || jy.size() != s.samples.size()) {
    throw InvalidArgument("observable series does not match the schedule samples");
  }
}

// Same-segment neighbourhood of sample i, at most `half` on each side.
std::pair<std::size_t, std::size_t> window(const std::vector<SamplePoint>& sp, std::size_t i,
                                           std::size_t half) {
  std::size_t lo = i, hi = i;
  while (lo > 0 && i - lo < half && sp[lo - 1].segment == sp[i].segment) --lo;
  while (hi + 1 < sp.size() && hi - i < half && sp[hi + 1].segment == sp[i].segment) ++hi;
  return {lo, hi};
}

struct Line {
  double rss, r2, slope, sxx;
};

Line fit_relayed(const PhaseSeries& p, double theta0) {
  const auto y = relay(p, theta0);
  std::vector<double> t(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) t[i] = p.samples[i].t;
  const auto f = numerics::fit_line(t, y);
  return {f.rss, f.r2, f.slope, f.sxx};
}

}  // namespace

const char* phase_mode_name(PhaseMode m) {
  switch (m) {
    case PhaseMode::Atan2Xy: return "atan2_xy";
    case PhaseMode::ArcsinJy: return "arcsin_jy";
    case PhaseMode::SinusoidFit: return "sinusoid_fit";
  }
  return "?";
}

std::vector<double> bias_reference(const Schedule& schedule, const FieldConfig& cfg) {
  std::vector<double> out;
  out.reserve(schedule.samples.size());
  double angle = 0.0;
  std::size_t next = 0;
  const auto& sp = schedule.samples;
  for (std::size_t si = 0; si < schedule.segments.size(); ++si) {
    const Segment& seg = schedule.segments[si];
    const double rate = seg.bias_sign * cfg.gamma * cfg.B0;
    while (next < sp.size() && sp[next].segment == si) {
      out.push_back(angle + rate * sp[next].offset);
      ++next;
    }
    angle += rate * seg.duration;
    if (seg.pulse_after) angle = -angle;
  }
  if (out.size() != sp.size()) throw InvalidArgument("schedule has samples outside its segments");
  return out;
}

PhaseSeries extract_phase(const Schedule& schedule, const FieldConfig& cfg,
                          std::span<const double> jx, std::span<const double> jy, PhaseMode mode,
                          double lambda_j) {
  require_sizes(schedule, jx, jy);
  const std::size_t n = schedule.samples.size();
  PhaseSeries p;
  p.kind = schedule.kind;
  p.samples = schedule.samples;
  p.bias = bias_reference(schedule, cfg);
  p.raw.resize(n);
  p.local.resize(n);
  p.flagged.assign(n, 0);

  auto arcsin_at = [&](std::size_t i) {
    const double a = p.bias[i];
    const double yr = jy[i] * std::cos(a) - jx[i] * std::sin(a);
    const double amp = std::hypot(jx[i], jy[i]);
    if (lambda_j > 0.0 && std::abs(yr) / lambda_j > 1.0 + 1e-6) p.flagged[i] = 1;
    if (amp == 0.0) {
      p.flagged[i] = 1;
      return 0.0;
    }
    return std::asin(std::clamp(yr / amp, -1.0, 1.0));
  };

  for (std::size_t i = 0; i < n; ++i) {
    p.raw[i] = std::atan2(jy[i], jx[i]);
    switch (mode) {
      case PhaseMode::Atan2Xy:
        p.local[i] = wrap_angle(p.raw[i] - p.bias[i]);
        break;
      case PhaseMode::ArcsinJy:
        p.local[i] = arcsin_at(i);
        break;
      case PhaseMode::SinusoidFit: {
        const auto [lo, hi] = window(p.samples, i, 2);
        double ss = 0, sc = 0, cc = 0, ys = 0, yc = 0;
        for (std::size_t k = lo; k <= hi; ++k) {
          const double s = std::sin(p.bias[k]), c = std::cos(p.bias[k]);
          ss += s * s;
          sc += s * c;
          cc += c * c;
          ys += jy[k] * s;
          yc += jy[k] * c;
        }
        const double det = ss * cc - sc * sc;
        if (hi > lo && det > 1e-8 * (ss + cc) * (ss + cc)) {
          const double a_cos = (ys * cc - yc * sc) / det;  // amplitude * cos(phi)
          const double a_sin = (yc * ss - ys * sc) / det;  // amplitude * sin(phi)
          p.local[i] = std::atan2(a_sin, a_cos);
        } else {
          p.local[i] = arcsin_at(i);
        }
        break;
      }
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (p.samples[i].segment != p.samples[i - 1].segment) continue;
    p.local[i] = p.local[i - 1] + wrap_angle(p.local[i] - p.local[i - 1]);
  }
  return p;
}

PhaseSeries extract_phase(const EnsembleSeries& ens, const Schedule& schedule,
                          const FieldConfig& cfg, PhaseMode mode, double lambda_j) {
  PhaseSeries p = extract_phase(schedule, cfg, ens.mean_jx, ens.mean_jy, mode, lambda_j);
  p.std.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double amp = std::hypot(ens.mean_jx[i], ens.mean_jy[i]);
    p.std[i] = amp > 0.0 ? std::sqrt(ens.var_total(i)) / amp
                         : std::numeric_limits<double>::infinity();
  }
  return p;
}

int relay_multiple(int cycle, int quarter) {
  if (cycle < 1 || quarter < 1 || quarter > 4) throw InvalidArgument("unlabeled sample");
  switch (quarter) {
    case 1: return 2 * cycle - 2;
    case 2:
    case 3: return 2 * cycle - 1;
    default: return 2 * cycle;
  }
}

double crude_theta0(const PhaseSeries& phases, double tau) {
  std::vector<double> t, y;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const auto& s = phases.samples[i];
    if (s.segment != 0 || s.t > tau * (1.0 + 1e-12)) continue;
    t.push_back(s.t);
    y.push_back(phases.local[i]);
  }
  if (t.size() < 2) throw InvalidArgument("crude theta0 needs at least two first-quarter samples");
  return numerics::fit_line(t, y).slope * tau;
}

std::vector<double> relay(const PhaseSeries& phases, double theta0) {
  std::vector<double> out(phases.local);
  if (phases.kind == SequenceKind::Fid) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& s = phases.samples[i];
    out[i] += 2.0 * theta0 * relay_multiple(s.cycle, s.quarter);
  }
  return out;
}

double relay_residual(const PhaseSeries& phases, double theta0) {
  return fit_relayed(phases, theta0).rss;
}

PrmEstimate refine_theta0(const PhaseSeries& phases, double theta0_crude, double tau,
                          double gamma, std::size_t realizations) {
  if (!(tau > 0.0) || !(gamma > 0.0)) throw InvalidArgument("tau and gamma must be positive");
  if (phases.kind != SequenceKind::Fid) {
    int max_cycle = 0;
    for (const auto& s : phases.samples) max_cycle = std::max(max_cycle, s.cycle);
    if (max_cycle < 2) throw InvalidArgument("relay refinement needs at least two cycles");
  }
  PrmEstimate est;
  est.theta0_crude = theta0_crude;
  est.n_points = phases.size();
  auto rss = [&](double th) { return relay_residual(phases, th); };

  double theta = theta0_crude;
  if (phases.kind != SequenceKind::Fid) {
    double half = std::max(0.5 * std::abs(theta0_crude), 1e-9);
    double lo = theta0_crude - half, hi = theta0_crude + half;
    constexpr int kGrid = 40;
    int minima = 0;
    double prev2 = rss(lo), prev1 = rss(lo + (hi - lo) / kGrid);
    for (int g = 2; g <= kGrid; ++g) {
      const double cur = rss(lo + (hi - lo) * g / kGrid);
      if (prev1 < prev2 && prev1 < cur) ++minima;
      prev2 = prev1;
      prev1 = cur;
    }
    est.multimodal = minima > 1;
    for (int expand = 0;; ++expand) {
      theta = numerics::golden_section_min(rss, lo, hi, 1e-12);
      const double w = hi - lo;
      const bool at_edge = theta - lo < 1e-3 * w || hi - theta < 1e-3 * w;
      if (!at_edge || expand == 30) break;
      est.bracket_expanded = true;
      lo = theta - w;
      hi = theta + w;
    }
  }
  const Line line = fit_relayed(phases, theta);
  if (phases.kind == SequenceKind::Fid) theta = line.slope * tau;
  est.theta0_refined = theta;
  est.residual = line.rss;
  est.r2 = line.r2;
  est.b0_hat = theta / (gamma * tau);
  est.b0_slope = line.slope / gamma;

  const std::size_t n = phases.size();
  double sigma2 = 0.0;
  if (!phases.std.empty()) {
    for (double s : phases.std) sigma2 += s * s;
    sigma2 /= static_cast<double>(n) * static_cast<double>(std::max<std::size_t>(1, realizations));
  } else if (n > 2) {
    sigma2 = line.rss / static_cast<double>(n - 2);
  }
  est.b0_std = std::isfinite(sigma2) ? std::sqrt(sigma2 / line.sxx) / gamma
                                     : std::numeric_limits<double>::infinity();
  return est;
}

PrmEstimate estimate_b0(const PhaseSeries& phases, double tau, double gamma,
                        std::size_t realizations) {
  return refine_theta0(phases, crude_theta0(phases, tau), tau, gamma, realizations);
}

std::vector<PrmEstimate> estimate_each(const EnsembleSeries& ens, const Schedule& schedule,
                                       const FieldConfig& cfg, PhaseMode mode, double lambda_j) {
  if (ens.members.size() != ens.realizations) {
    throw InvalidArgument("estimate_each needs the ensemble members");
  }
  std::vector<PrmEstimate> out;
  out.reserve(ens.members.size());
  std::vector<double> jx(schedule.samples.size()), jy(schedule.samples.size());
  for (const auto& r : ens.members) {
    for (std::size_t k = 0; k < r.obs.size(); ++k) {
      jx[k] = r.obs[k].jx;
      jy[k] = r.obs[k].jy;
    }
    const auto p = extract_phase(schedule, cfg, jx, jy, mode, lambda_j);
    out.push_back(estimate_b0(p, schedule.tau, cfg.gamma));
  }
  return out;
}

}  // namespace ddmag
