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

#include "ddmag/probes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ddmag/numerics.hpp"

namespace ddmag {
namespace {

constexpr double kPi = std::numbers::pi;

SpinState twisted(const SpinState& base, double mu) {
  SpinState out = base;
  const auto& ops = operators_for(base.spin());
  auto d = out.data();
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] *= std::polar(1.0, -0.5 * mu * ops.m[k] * ops.m[k]);
  }
  return out;
}

double min_variance_of(const SpinState& psi) {
  return squeezing_metrics(psi).min_variance;
}

}  // namespace

SpinState prepare_css(SpinMagnitude j, const Vec3& direction) {
  const double len = direction.norm();
  if (!(len > 0.0) || !direction.finite()) throw InvalidArgument("CSS direction must be non-zero");
  const Vec3 n = direction * (1.0 / len);
  const double theta = std::acos(std::clamp(n.z, -1.0, 1.0));
  const double phi = std::atan2(n.y, n.x);
  const int two_j = j.twice();
  const std::size_t d = j.dim();
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  std::vector<cplx> amp(d, cplx{0.0, 0.0});
  if (s == 0.0) {
    amp[0] = 1.0;
  } else if (c == 0.0) {
    amp[d - 1] = 1.0;
  } else {
    const double lc = std::log(c), ls = std::log(s);
    const double lg = std::lgamma(two_j + 1.0);
    for (std::size_t k = 0; k < d; ++k) {
      const double kk = static_cast<double>(k);
      const double logmag = 0.5 * (lg - std::lgamma(kk + 1.0) - std::lgamma(two_j - kk + 1.0)) +
                            (two_j - kk) * lc + kk * ls;
      amp[k] = std::polar(std::exp(logmag), -j.m(k) * phi);
    }
  }
  return SpinState(j, std::move(amp));
}

SqueezingMetrics squeezing_metrics(const Moments& mo, double j) {
  SqueezingMetrics out;
  const double len = mo.mean.norm();
  out.var_x0 = mo.variance(Axis::X);
  out.var_y0 = mo.variance(Axis::Y);
  out.lambda = std::abs(mo.mean.x) / j;
  out.lambda_valid = out.lambda > 1e-9;
  Vec3 n{1.0, 0.0, 0.0};
  if (len > 1e-9 * j) {
    n = mo.mean * (1.0 / len);
  } else {
    out.mean_valid = false;
  }
  out.mean_direction = n;
  const Vec3 ey{0.0, 1.0, 0.0};
  Vec3 e1 = ey - n * n.dot(ey);
  if (e1.norm() < 1e-6) {
    const Vec3 ez{0.0, 0.0, 1.0};
    e1 = ez - n * n.dot(ez);
  }
  e1 = e1 * (1.0 / e1.norm());
  const Vec3 e2 = n.cross(e1);
  auto v = [&](double a) { return mo.variance_along(e1 * std::cos(a) + e2 * std::sin(a)); };

  constexpr int kScan = 64;
  int best = 0;
  double best_v = v(0.0);
  for (int i = 1; i < kScan; ++i) {
    const double vi = v(kPi * i / kScan);
    if (vi < best_v) {
      best_v = vi;
      best = i;
    }
  }
  const double step = kPi / kScan;
  double a = numerics::golden_section_min(v, (best - 1) * step, (best + 1) * step, 1e-6);
  if (v(a) > best_v) a = best * step;
  a = std::remainder(a, kPi);
  if (a <= -0.5 * kPi) a += kPi;
  out.squeeze_angle = a;
  out.min_variance = v(a);
  out.xi2_s = 2.0 * out.min_variance / j;
  return out;
}

SqueezingMetrics squeezing_metrics(const SpinState& psi) {
  require_normalized(psi);
  return squeezing_metrics(moments(psi), psi.spin().value());
}

PreparedProbe prepare_sss(SpinMagnitude j, const ProbeSpec& spec) {
  const Vec3 dir = spec.direction;
  if (std::abs(dir.y) > 0.0 || std::abs(dir.z) > 0.0 || !(dir.x > 0.0)) {
    throw InvalidArgument("squeezed probe is prepared along +x only");
  }
  const SpinState base = prepare_css(j, {1.0, 0.0, 0.0});
  const double scale = 2.0 * std::pow(j.value(), -2.0 / 3.0);

  auto optimal_twist = [&]() {
    constexpr int kGrid = 60;
    const double hi = 6.0 * scale;
    int best = 0;
    double best_v = min_variance_of(base);
    for (int i = 1; i <= kGrid; ++i) {
      const double vi = min_variance_of(twisted(base, hi * i / kGrid));
      if (vi < best_v) {
        best_v = vi;
        best = i;
      }
    }
    if (best == 0) return 0.0;
    const double h = hi / kGrid;
    return numerics::golden_section_min([&](double mu) { return min_variance_of(twisted(base, mu)); },
                                        (best - 1) * h, (best + 1) * h, 1e-10 * scale);
  };

  double mu = 0.0;
  if (spec.target_xi2) {
    const double target = *spec.target_xi2;
    const double mu_opt = optimal_twist();
    const double jv = j.value();
    const double best = 2.0 * min_variance_of(twisted(base, mu_opt)) / jv;
    if (!(target <= 1.0) || target < best) {
      std::ostringstream msg;
      msg << "requested xi2 = " << target << " not reachable; achievable range [" << best
          << ", 1]";
      throw NumericalError(msg.str());
    }
    double lo = 0.0, hi = mu_opt;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + mu_opt); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double xi = 2.0 * min_variance_of(twisted(base, mid)) / jv;
      (xi > target ? lo : hi) = mid;
    }
    mu = 0.5 * (lo + hi);
  } else if (spec.twist) {
    if (!std::isfinite(*spec.twist)) throw InvalidArgument("twist must be finite");
    mu = *spec.twist;
  } else {
    mu = optimal_twist();
  }

  SpinState psi = twisted(base, mu);
  const SqueezingMetrics pre = squeezing_metrics(psi);
  if (mu != 0.0 && pre.squeeze_angle != 0.0) {
    RotationOperator rx(j, {1.0, 0.0, 0.0}, -pre.squeeze_angle);
    PropagatorWorkspace ws;
    rx.apply(psi, ws);
  }
  PreparedProbe out{psi, squeezing_metrics(psi), mu};
  const auto& m = out.metrics;
  const double jv = j.value();
  const double off_axis = std::hypot(m.mean_direction.y, m.mean_direction.z) * m.lambda * jv;
  // The squeeze axis is undefined for an isotropic transverse distribution.
  const bool isotropic = variance(psi, Axis::Z) - m.min_variance < 1e-9 * jv;
  if (off_axis > 1e-6 * jv || (!isotropic && std::abs(m.squeeze_angle) > 1e-3)) {
    throw NumericalError("squeezed probe alignment failed");
  }
  if (spec.target_xi2 && std::abs(m.xi2_s - *spec.target_xi2) > 1e-6 * *spec.target_xi2) {
    throw NumericalError("squeezed probe missed the requested xi2");
  }
  return out;
}

PreparedProbe prepare_probe(SpinMagnitude j, const ProbeSpec& spec) {
  if (spec.kind == ProbeKind::Sss) return prepare_sss(j, spec);
  SpinState psi = prepare_css(j, spec.direction);
  SqueezingMetrics m = squeezing_metrics(psi);
  return {std::move(psi), m, 0.0};
}

}  // namespace ddmag
