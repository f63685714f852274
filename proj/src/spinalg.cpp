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

#include "ddmag/spinalg.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "ddmag/bessel.hpp"
#include "ddmag/simd/kernels.hpp"

namespace ddmag {
namespace {

constexpr double kPi = std::numbers::pi;

void check_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidArgument("spin dimension mismatch");
}

/// Coefficients of exp(-i x A) = sum_k c_k T_k(A) for |spec A| <= 1.
std::vector<cplx> chebyshev_coefficients(double x) {
  const auto j = bessel_j_sequence(std::abs(x));
  std::vector<cplx> c(j.size());
  const cplx minus_i{0.0, -1.0};
  cplx phase{1.0, 0.0};
  for (std::size_t k = 0; k < j.size(); ++k) {
    double v = j[k];
    if (x < 0.0 && (k % 2 == 1)) v = -v;
    c[k] = (k == 0 ? 1.0 : 2.0) * v * phase;
    phase *= minus_i;
  }
  return c;
}

void chebyshev_apply(const TridiagonalOp& h, double scale,
                     std::span<const cplx> coef, std::span<cplx> psi,
                     PropagatorWorkspace& ws) {
  const auto& kt = simd::kernels();
  const std::size_t n = psi.size();
  const double* diag = h.diag.empty() ? nullptr : h.diag.data();
  if (coef.size() == 1) {
    for (auto& v : psi) v *= coef[0];
    return;
  }
  ws.prev.assign(psi.begin(), psi.end());
  ws.cur.resize(n);
  ws.next.resize(n);
  ws.acc.resize(n);
  kt.tridiag_apply(ws.cur.data(), ws.prev.data(), diag, h.upper.data(), scale, n);
  for (std::size_t i = 0; i < n; ++i) ws.acc[i] = coef[0] * ws.prev[i] + coef[1] * ws.cur[i];
  for (std::size_t k = 2; k < coef.size(); ++k) {
    kt.cheb_step(ws.next.data(), ws.cur.data(), ws.prev.data(), diag, h.upper.data(), scale, n);
    kt.axpy(ws.acc.data(), coef[k], ws.next.data(), n);
    std::swap(ws.prev, ws.cur);
    std::swap(ws.cur, ws.next);
  }
  std::copy(ws.acc.begin(), ws.acc.end(), psi.begin());
}

std::vector<cplx> z_phases(const SpinOperators& ops, double angle) {
  std::vector<cplx> p(ops.m.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::polar(1.0, -angle * ops.m[k]);
  return p;
}

}  // namespace

SpinMagnitude::SpinMagnitude(int twice_j) : twice_j_(twice_j) {
  if (twice_j < 1) throw InvalidArgument("spin J must be at least 1/2");
}

SpinMagnitude SpinMagnitude::from_value(double j) {
  const double twice = 2.0 * j;
  const double r = std::round(twice);
  if (!std::isfinite(j) || std::abs(twice - r) > 1e-9 || r < 1.0) {
    throw InvalidArgument("spin J must be a positive integer or half-integer");
  }
  return SpinMagnitude(static_cast<int>(r));
}

void TridiagonalOp::apply(std::span<const cplx> in, std::span<cplx> out) const {
  check_same_dim(in.size(), dim());
  check_same_dim(out.size(), dim());
  simd::kernels().tridiag_apply(out.data(), in.data(), diag.empty() ? nullptr : diag.data(),
                                upper.data(), 1.0, dim());
}

TridiagonalOp SpinOperators::along(const Vec3& n) const {
  TridiagonalOp op;
  const std::size_t d = m.size();
  op.diag.resize(d);
  for (std::size_t k = 0; k < d; ++k) op.diag[k] = n.z * m[k];
  op.upper.resize(d - 1);
  const cplx w{0.5 * n.x, -0.5 * n.y};
  for (std::size_t k = 1; k < d; ++k) op.upper[k - 1] = w * ladder[k];
  op.spectral_bound = n.norm() * spin.value();
  return op;
}

SpinOperators make_operators(SpinMagnitude j) {
  const std::size_t d = j.dim();
  SpinOperators ops{j, {}, {}, {}, {}, {}};
  ops.m.resize(d);
  ops.ladder.assign(d, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    const double m = j.m(k);
    ops.m[k] = m;
    if (k > 0) ops.ladder[k] = std::sqrt(std::max(0.0, j.casimir() - m * (m + 1.0)));
  }
  ops.jx = ops.along({1.0, 0.0, 0.0});
  ops.jx.diag.clear();
  ops.jy = ops.along({0.0, 1.0, 0.0});
  ops.jy.diag.clear();
  ops.jz = ops.along({0.0, 0.0, 1.0});
  return ops;
}

const SpinOperators& operators_for(SpinMagnitude j) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<const SpinOperators>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[j.twice()];
  if (!slot) slot = std::make_unique<const SpinOperators>(make_operators(j));
  return *slot;
}

SpinState::SpinState(SpinMagnitude j, std::vector<cplx> amplitudes)
    : j_(j), amp_(std::move(amplitudes)) {
  check_same_dim(amp_.size(), j.dim());
}

SpinState SpinState::basis(SpinMagnitude j, double m) {
  const double k = j.value() - m;
  const double r = std::round(k);
  if (std::abs(k - r) > 1e-9 || r < 0.0 || r > 2.0 * j.value()) {
    throw InvalidArgument("basis: m out of range for this J");
  }
  std::vector<cplx> amp(j.dim());
  amp[static_cast<std::size_t>(r)] = 1.0;
  return {j, std::move(amp)};
}

double SpinState::norm() const {
  double s = 0.0;
  for (const auto& c : amp_) s += std::norm(c);
  return std::sqrt(s);
}

double Moments::second(Axis a, Axis b) const {
  if (a > b) std::swap(a, b);
  if (a == Axis::X) return b == Axis::X ? xx : (b == Axis::Y ? xy : xz);
  if (a == Axis::Y) return b == Axis::Y ? yy : yz;
  return zz;
}

double Moments::variance_along(const Vec3& u) const {
  const double s = u.x * u.x * xx + u.y * u.y * yy + u.z * u.z * zz +
                   2.0 * (u.x * u.y * xy + u.x * u.z * xz + u.y * u.z * yz);
  const double mu = u.dot(mean);
  return s - mu * mu;
}

Moments moments(const SpinState& psi) {
  const auto& ops = operators_for(psi.spin());
  const auto s = simd::kernels().moments(psi.amplitudes().data(), ops.ladder.data(),
                                         ops.m.data(), psi.dim());
  const double c = psi.spin().casimir() * s.norm;
  Moments mo;
  mo.norm = s.norm;
  mo.mean = {s.jplus.real(), s.jplus.imag(), s.jz};
  mo.zz = s.jz2;
  mo.xx = 0.5 * (s.jplus2.real() + c - s.jz2);
  mo.yy = 0.5 * (-s.jplus2.real() + c - s.jz2);
  mo.xy = 0.5 * s.jplus2.imag();
  mo.xz = 0.5 * s.jplus_jz_sym.real();
  mo.yz = 0.5 * s.jplus_jz_sym.imag();
  return mo;
}

void require_normalized(const SpinState& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-9) throw InvalidArgument("state is not normalized");
}

double expectation(const SpinState& psi, Axis a) {
  require_normalized(psi);
  return moments(psi).mean[a];
}

double variance(const SpinState& psi, Axis a) {
  require_normalized(psi);
  return std::max(0.0, moments(psi).variance(a));
}

cplx overlap(const SpinState& a, const SpinState& b) {
  check_same_dim(a.dim(), b.dim());
  return simd::kernels().dot(a.amplitudes().data(), b.amplitudes().data(), a.dim());
}

double fidelity(const SpinState& a, const SpinState& b) { return std::norm(overlap(a, b)); }

void apply_pi_pulse_x_inplace(SpinState& psi) {
  static constexpr cplx kPhase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  const cplx phase = kPhase[psi.spin().twice() % 4];
  auto amp = psi.data();
  std::reverse(amp.begin(), amp.end());
  for (auto& c : amp) c *= phase;
}

SpinState apply_pi_pulse_x(const SpinState& psi) {
  require_normalized(psi);
  SpinState out = psi;
  apply_pi_pulse_x_inplace(out);
  return out;
}

void rotate_z_inplace(SpinState& psi, double angle) {
  const auto& ops = operators_for(psi.spin());
  auto amp = psi.data();
  for (std::size_t k = 0; k < amp.size(); ++k) amp[k] *= std::polar(1.0, -angle * ops.m[k]);
}

SpinState rotate_z(const SpinState& psi, double angle) {
  SpinState out = psi;
  rotate_z_inplace(out, angle);
  return out;
}

void propagate_inplace(const TridiagonalOp& h, double t, SpinState& psi,
                       PropagatorWorkspace& ws) {
  check_same_dim(h.dim(), psi.dim());
  if (!std::isfinite(t)) throw InvalidArgument("propagate: non-finite time");
  const double bound = h.spectral_bound;
  if (bound == 0.0 || t == 0.0) return;
  const auto coef = chebyshev_coefficients(t * bound);
  chebyshev_apply(h, 1.0 / bound, coef, psi.data(), ws);
}

SpinState propagate(const TridiagonalOp& h, const SpinState& psi, double t) {
  SpinState out = psi;
  PropagatorWorkspace ws;
  propagate_inplace(h, t, out, ws);
  return out;
}

RotationOperator::RotationOperator(SpinMagnitude j, const Vec3& axis, double angle) : j_(j) {
  if (!axis.finite() || !std::isfinite(angle)) {
    throw InvalidArgument("rotation: non-finite axis or angle");
  }
  const double len = axis.norm();
  if (len == 0.0 || angle == 0.0) return;  // identity
  Vec3 n = axis * (1.0 / len);
  if (n.z < 0.0) {
    n = -n;
    angle = -angle;
  }
  const auto& ops = operators_for(j);
  const double rho = std::hypot(n.x, n.y);
  beta_ = std::atan2(rho, n.z);
  mid_ = z_phases(ops, angle);
  if (beta_ == 0.0) return;
  const double alpha = std::atan2(n.y, n.x);
  pre_ = z_phases(ops, -alpha);
  post_ = z_phases(ops, alpha);
  tilt_in_ = chebyshev_coefficients(-beta_ * j.value());
  tilt_out_ = chebyshev_coefficients(beta_ * j.value());
}

void RotationOperator::apply(SpinState& psi, PropagatorWorkspace& ws) const {
  check_same_dim(psi.dim(), j_.dim());
  if (mid_.empty()) return;
  const auto& kt = simd::kernels();
  auto amp = psi.data();
  const std::size_t n = amp.size();
  if (beta_ == 0.0) {
    kt.mul(amp.data(), mid_.data(), n);
    return;
  }
  const auto& ops = operators_for(j_);
  const double scale = 1.0 / j_.value();
  kt.mul(amp.data(), pre_.data(), n);
  chebyshev_apply(ops.jy, scale, tilt_in_, amp, ws);
  kt.mul(amp.data(), mid_.data(), n);
  chebyshev_apply(ops.jy, scale, tilt_out_, amp, ws);
  kt.mul(amp.data(), post_.data(), n);
}

SpinState RotationOperator::operator()(const SpinState& psi) const {
  SpinState out = psi;
  PropagatorWorkspace ws;
  apply(out, ws);
  return out;
}

SpinState evolve_segment(const SpinState& psi, const Vec3& field, double c2p, double dt,
                         double gamma) {
  (void)c2p;  // global phase on the maximal multiplet
  if (!(dt >= 0.0)) throw InvalidArgument("evolve_segment: dt must be >= 0");
  if (!field.finite()) throw InvalidArgument("evolve_segment: non-finite field");
  const double b = field.norm();
  if (b == 0.0 || dt == 0.0) return psi;
  const double before = psi.norm();
  SpinState out = RotationOperator(psi.spin(), field, gamma * b * dt)(psi);
  if (std::abs(out.norm() - before) > 1e-10) {
    throw NumericalError("evolve_segment: propagation lost unitarity beyond 1e-10");
  }
  return out;
}

}  // namespace ddmag
