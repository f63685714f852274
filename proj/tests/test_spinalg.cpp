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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "ddmag/bessel.hpp"
#include "ddmag/probes.hpp"
#include "ddmag/spinalg.hpp"

namespace ddmag {
namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
constexpr double kPi = std::numbers::pi;
const cplx I{0.0, 1.0};

// Dense Jx, Jy, Jz built from the textbook matrix elements, independent of
// the tridiagonal code.
struct Dense {
  Mat x, y, z;
};

Dense dense_ops(double j) {
  const int d = static_cast<int>(std::lround(2 * j)) + 1;
  Mat jp = Mat::Zero(d, d);
  Dense o{Mat::Zero(d, d), Mat::Zero(d, d), Mat::Zero(d, d)};
  for (int k = 0; k < d; ++k) {
    const double m = j - k;
    o.z(k, k) = m;
    if (k > 0) jp(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  o.x = 0.5 * (jp + jp.adjoint());
  o.y = -0.5 * I * (jp - jp.adjoint());
  return o;
}

Mat dense_exp(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Eigen::VectorXd ev = es.eigenvalues();
  Vec ph(ev.size());
  for (int k = 0; k < ev.size(); ++k) ph(k) = std::exp(-I * t * ev(k));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Vec to_eigen(const SpinState& s) {
  Vec v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t k = 0; k < s.dim(); ++k) v(static_cast<Eigen::Index>(k)) = s.amplitudes()[k];
  return v;
}

SpinState random_state(SpinMagnitude j, unsigned seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> n;
  std::vector<cplx> a(j.dim());
  double s = 0;
  for (auto& x : a) {
    x = {n(g), n(g)};
    s += std::norm(x);
  }
  for (auto& x : a) x /= std::sqrt(s);
  return SpinState(j, std::move(a));
}

double max_abs_diff(const Vec& a, const Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }

Mat to_dense(const TridiagonalOp& h) {
  const auto d = static_cast<Eigen::Index>(h.dim());
  Mat m = Mat::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (!h.diag.empty()) m(k, k) = h.diag[static_cast<std::size_t>(k)];
    if (k + 1 < d) {
      m(k, k + 1) = h.upper[static_cast<std::size_t>(k)];
      m(k + 1, k) = std::conj(h.upper[static_cast<std::size_t>(k)]);
    }
  }
  return m;
}

TEST(SpinMagnitude, Validation) {
  EXPECT_THROW(SpinMagnitude(0), InvalidArgument);
  EXPECT_THROW(SpinMagnitude::from_value(0.3), InvalidArgument);
  EXPECT_THROW(SpinMagnitude::from_value(0.0), InvalidArgument);
  EXPECT_EQ(SpinMagnitude::from_value(2.5).dim(), 6u);
  EXPECT_EQ(SpinMagnitude::from_value(0.5).twice(), 1);
}

TEST(Operators, SpinHalfArePauliOverTwo) {
  const auto ops = make_operators(SpinMagnitude(1));
  const Mat x = to_dense(ops.jx), y = to_dense(ops.jy), z = to_dense(ops.jz);
  Mat sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -I, I, 0;
  sz << 1, 0, 0, -1;
  EXPECT_LT((x - 0.5 * sx).norm(), 1e-15);
  EXPECT_LT((y - 0.5 * sy).norm(), 1e-15);
  EXPECT_LT((z - 0.5 * sz).norm(), 1e-15);
}

TEST(Operators, SpinOneLadder) {
  const auto ops = make_operators(SpinMagnitude(2));
  EXPECT_EQ(ops.jz.diag, (std::vector<double>{1.0, 0.0, -1.0}));
  EXPECT_NEAR(ops.jx.upper[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(ops.jx.upper[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Operators, AlgebraMatchesDense) {
  for (double j : {0.5, 1.0, 1.5, 7.0, 100.0}) {
    const auto ops = make_operators(SpinMagnitude::from_value(j));
    const Mat x = to_dense(ops.jx), y = to_dense(ops.jy), z = to_dense(ops.jz);
    const Dense ref = dense_ops(j);
    EXPECT_LT((x - ref.x).cwiseAbs().maxCoeff(), 1e-12) << j;
    EXPECT_LT((y - ref.y).cwiseAbs().maxCoeff(), 1e-12) << j;
    EXPECT_LT((x * y - y * x - I * z).cwiseAbs().maxCoeff(), 1e-10) << j;
    EXPECT_LT((x.adjoint() - x).cwiseAbs().maxCoeff(), 0.0 + 1e-300);
    const Mat cas = x * x + y * y + z * z;
    EXPECT_LT((cas - j * (j + 1) * Mat::Identity(x.rows(), x.cols())).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Operators, AlongMatchesLinearCombination) {
  const SpinMagnitude j(9);
  const auto& ops = operators_for(j);
  const Vec3 n{0.3, -1.2, 0.5};
  const Mat h = to_dense(ops.along(n));
  const Dense ref = dense_ops(j.value());
  EXPECT_LT((h - (n.x * ref.x + n.y * ref.y + n.z * ref.z)).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_NEAR(ops.along(n).spectral_bound, n.norm() * j.value(), 1e-14);
}

TEST(Observables, CoherentStateExamples) {
  const SpinMagnitude j(100);
  const auto css = prepare_css(j, {1, 0, 0});
  EXPECT_NEAR(expectation(css, Axis::X), 50.0, 1e-10);
  EXPECT_NEAR(expectation(css, Axis::Y), 0.0, 1e-12);
  EXPECT_NEAR(variance(css, Axis::Y), 25.0, 1e-9);
  const auto turned = rotate_z(css, kPi / 2);
  EXPECT_NEAR(expectation(turned, Axis::Y), 50.0, 1e-10);
  const auto eig = SpinState::basis(j, 13);
  EXPECT_NEAR(variance(eig, Axis::Z), 0.0, 1e-12);
  EXPECT_NEAR(expectation(eig, Axis::Z), 13.0, 1e-12);
}

TEST(Observables, RejectUnnormalised) {
  const SpinMagnitude j(4);
  SpinState s(j, std::vector<cplx>(j.dim(), cplx{1.0, 0.0}));
  EXPECT_THROW(expectation(s, Axis::X), InvalidArgument);
  EXPECT_THROW(variance(s, Axis::Y), InvalidArgument);
  EXPECT_THROW(SpinState(j, std::vector<cplx>(3)), InvalidArgument);
}

TEST(Observables, MomentsMatchDense) {
  for (double jv : {0.5, 1.0, 2.5, 12.0}) {
    const SpinMagnitude j = SpinMagnitude::from_value(jv);
    const SpinState s = random_state(j, 17);
    const Vec v = to_eigen(s);
    const Dense d = dense_ops(jv);
    const Moments m = moments(s);
    auto ev = [&](const Mat& a) { return (v.adjoint() * a * v)(0, 0).real(); };
    EXPECT_NEAR(m.mean.x, ev(d.x), 1e-12);
    EXPECT_NEAR(m.mean.y, ev(d.y), 1e-12);
    EXPECT_NEAR(m.mean.z, ev(d.z), 1e-12);
    EXPECT_NEAR(m.xx, ev(d.x * d.x), 1e-11);
    EXPECT_NEAR(m.yy, ev(d.y * d.y), 1e-11);
    EXPECT_NEAR(m.zz, ev(d.z * d.z), 1e-11);
    EXPECT_NEAR(m.xy, 0.5 * ev(d.x * d.y + d.y * d.x), 1e-11);
    EXPECT_NEAR(m.xz, 0.5 * ev(d.x * d.z + d.z * d.x), 1e-11);
    EXPECT_NEAR(m.yz, 0.5 * ev(d.y * d.z + d.z * d.y), 1e-11);
  }
}

TEST(PiPulse, MatchesDenseExponential) {
  for (double jv : {0.5, 1.0, 1.5, 2.0, 5.5, 30.0}) {
    const SpinMagnitude j = SpinMagnitude::from_value(jv);
    const SpinState s = random_state(j, 3);
    const Vec ref = dense_exp(dense_ops(jv).x, kPi) * to_eigen(s);
    EXPECT_LT(max_abs_diff(to_eigen(apply_pi_pulse_x(s)), ref), 1e-12) << jv;
  }
}

TEST(PiPulse, Examples) {
  const SpinMagnitude j(40);
  const auto css = prepare_css(j, {1, 0, 0});
  EXPECT_NEAR(fidelity(css, apply_pi_pulse_x(css)), 1.0, 1e-10);
  const auto s = random_state(j, 5);
  const auto p = apply_pi_pulse_x(s);
  EXPECT_NEAR(expectation(p, Axis::Y), -expectation(s, Axis::Y), 1e-12);
  EXPECT_NEAR(expectation(p, Axis::Z), -expectation(s, Axis::Z), 1e-12);
  EXPECT_NEAR(expectation(p, Axis::X), expectation(s, Axis::X), 1e-12);
  const SpinMagnitude half(1);
  const auto down = apply_pi_pulse_x(SpinState::basis(half, 0.5));
  EXPECT_NEAR(std::norm(down.amplitudes()[1]), 1.0, 1e-15);
}

TEST(Evolution, MatchesDenseForManyFields) {
  std::mt19937_64 g(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double gamma = kGamma;
  for (double jv : {0.5, 1.0, 1.5, 5.0, 20.0, 60.0}) {
    const SpinMagnitude j = SpinMagnitude::from_value(jv);
    const Dense d = dense_ops(jv);
    std::vector<Vec3> fields{{0, 0, 14.3e-3}, {0, 0, -3e-3}, {2e-3, 0, 0},     {0, -1e-3, 0},
                             {1e-6, 2e-6, 14e-3}, {1e-6, -2e-6, -14e-3}};
    for (int r = 0; r < 4; ++r) fields.push_back({u(g) * 1e-3, u(g) * 1e-3, u(g) * 1e-3});
    for (const auto& b : fields) {
      const double dt = 1.7e-4;
      const SpinState s = random_state(j, 11);
      const Mat h = gamma * (b.x * d.x + b.y * d.y + b.z * d.z);
      const Vec ref = dense_exp(h, dt) * to_eigen(s);
      const Vec got = to_eigen(evolve_segment(s, b, 0.0, dt));
      EXPECT_LT(max_abs_diff(got, ref), 1e-11) << "J=" << jv << " b=(" << b.x << "," << b.y << "," << b.z << ")";
    }
  }
}

TEST(Evolution, SpinHalfClosedForm) {
  const SpinMagnitude j(1);
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int r = 0; r < 20; ++r) {
    const Vec3 b{u(g) * 1e-2, u(g) * 1e-2, u(g) * 1e-2};
    const double dt = 1e-4 * (1.0 + u(g));
    const SpinState s = random_state(j, static_cast<unsigned>(r));
    const double bn = b.norm();
    const double a = 0.5 * kGamma * bn * dt;
    const Vec3 n = b * (1.0 / bn);
    // exp(-i a n.sigma) = cos a - i sin a n.sigma
    const cplx u00 = std::cos(a) - I * std::sin(a) * n.z;
    const cplx u01 = -I * std::sin(a) * cplx(n.x, -n.y);
    const cplx u10 = -I * std::sin(a) * cplx(n.x, n.y);
    const cplx u11 = std::cos(a) + I * std::sin(a) * n.z;
    const auto c = s.amplitudes();
    const cplx e0 = u00 * c[0] + u01 * c[1];
    const cplx e1 = u10 * c[0] + u11 * c[1];
    const SpinState evolved = evolve_segment(s, b, 0.0, dt);
    const auto out = evolved.amplitudes();
    EXPECT_LT(std::abs(out[0] - e0), 1e-12);
    EXPECT_LT(std::abs(out[1] - e1), 1e-12);
  }
}

TEST(Evolution, LarmorPeriodAndSignalRotation) {
  const SpinMagnitude j(200);
  const auto css = prepare_css(j, {1, 0, 0});
  const double B = 14.3e-3;
  const auto full = evolve_segment(css, {0, 0, B}, 0.0, 2 * kPi / (kGamma * B));
  EXPECT_NEAR(fidelity(full, css), 1.0, 1e-10);
  const double b0 = 160e-6;
  for (double dt : {1e-5, 1e-4, 1e-3, 7e-3}) {
    const auto s = evolve_segment(css, {0, 0, b0}, 0.0, dt);
    EXPECT_NEAR(expectation(s, Axis::Y), 100.0 * std::sin(kGamma * b0 * dt), 1e-9);
  }
}

TEST(Evolution, CompositionAndNorm) {
  const SpinMagnitude j(301);
  const Vec3 b{3e-4, -1e-4, 2e-3};
  const auto s = random_state(j, 8);
  const auto a = evolve_segment(evolve_segment(s, b, 0.0, 1e-4), b, 0.0, 2.5e-4);
  const auto c = evolve_segment(s, b, 0.0, 3.5e-4);
  EXPECT_LT(max_abs_diff(to_eigen(a), to_eigen(c)), 1e-10);
  EXPECT_NEAR(a.norm(), 1.0, 1e-10);
}

TEST(Evolution, CasimirAndNormAlongTrajectory) {
  const SpinMagnitude j(400);
  auto s = prepare_css(j, {0.6, 0.0, 0.8});
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int step = 0; step < 30; ++step) {
    s = evolve_segment(s, {u(g) * 1e-3, u(g) * 1e-3, 14.3e-3}, 0.0, 1e-4);
    if (step % 2) apply_pi_pulse_x_inplace(s);
    const Moments m = moments(s);
    EXPECT_NEAR(m.xx + m.yy + m.zz, j.casimir(), 1e-8 * j.casimir());
    EXPECT_NEAR(s.norm(), 1.0, 1e-10);
  }
}

TEST(Evolution, LargeSpinKeepsUnitarity) {
  const SpinMagnitude j(4000);
  const auto css = prepare_css(j, {1, 0, 0});
  const auto s = evolve_segment(css, {5e-3, 2e-3, 1e-3}, 0.0, 3e-4);
  EXPECT_NEAR(s.norm(), 1.0, 1e-10);
  // The mean spin rotates rigidly: |<J>| stays J for a coherent state.
  EXPECT_NEAR(moments(s).mean.norm(), j.value(), 1e-7 * j.value());
}

TEST(Evolution, CasimirCouplingOnlyAddsAGlobalPhase) {
  const SpinMagnitude j(50);
  const auto s = random_state(j, 4);
  const Vec3 b{1e-4, 2e-4, 14.3e-3};
  const Moments a = moments(evolve_segment(s, b, 0.0, 1e-4));
  const Moments c = moments(evolve_segment(s, b, 2.0 * kPi * 17.0, 1e-4));
  EXPECT_NEAR(a.mean.x, c.mean.x, 1e-10);
  EXPECT_NEAR(a.mean.y, c.mean.y, 1e-10);
  EXPECT_NEAR(a.yy, c.yy, 1e-10);
}

TEST(Evolution, RejectsBadInputs) {
  const auto s = prepare_css(SpinMagnitude(4), {1, 0, 0});
  EXPECT_THROW(evolve_segment(s, {0, 0, 1e-3}, 0.0, -1e-6), InvalidArgument);
  EXPECT_THROW(evolve_segment(s, {0, NAN, 1e-3}, 0.0, 1e-6), InvalidArgument);
  EXPECT_NO_THROW(evolve_segment(s, {0, 0, 0}, 0.0, 1e-6));
}

// The first and second moments of a rotated state transform as a vector and
// a symmetric tensor under the corresponding SO(3) matrix.
TEST(Evolution, MomentsRotateAsTensors) {
  const SpinMagnitude j(33);
  const auto s = random_state(j, 21);
  const Vec3 n = Vec3{0.2, -0.5, 0.7} * (1.0 / Vec3{0.2, -0.5, 0.7}.norm());
  const double th = 1.234;
  const RotationOperator rot(j, n, th);
  const Moments a = moments(s), b = moments(rot(s));
  Eigen::Matrix3d k;
  k << 0, -n.z, n.y, n.z, 0, -n.x, -n.y, n.x, 0;
  const Eigen::Matrix3d r = Eigen::Matrix3d::Identity() + std::sin(th) * k + (1 - std::cos(th)) * k * k;
  const Eigen::Vector3d m0(a.mean.x, a.mean.y, a.mean.z);
  const Eigen::Vector3d m1 = r * m0;
  EXPECT_NEAR(b.mean.x, m1(0), 1e-10);
  EXPECT_NEAR(b.mean.y, m1(1), 1e-10);
  EXPECT_NEAR(b.mean.z, m1(2), 1e-10);
  Eigen::Matrix3d s0;
  s0 << a.xx, a.xy, a.xz, a.xy, a.yy, a.yz, a.xz, a.yz, a.zz;
  const Eigen::Matrix3d s1 = r * s0 * r.transpose();
  EXPECT_NEAR(b.xx, s1(0, 0), 1e-9);
  EXPECT_NEAR(b.yy, s1(1, 1), 1e-9);
  EXPECT_NEAR(b.zz, s1(2, 2), 1e-9);
  EXPECT_NEAR(b.xy, s1(0, 1), 1e-9);
  EXPECT_NEAR(b.xz, s1(0, 2), 1e-9);
  EXPECT_NEAR(b.yz, s1(1, 2), 1e-9);
}

TEST(Propagate, GenericTridiagonalMatchesDense) {
  const SpinMagnitude j(24);
  const auto& ops = operators_for(j);
  TridiagonalOp h = ops.along({0.3, 0.8, -0.2});
  for (std::size_t k = 0; k < h.diag.size(); ++k) h.diag[k] += 0.01 * ops.m[k] * ops.m[k];
  h.spectral_bound += 0.01 * j.value() * j.value();
  const auto s = random_state(j, 2);
  const Vec ref = dense_exp(to_dense(h), 0.9) * to_eigen(s);
  EXPECT_LT(max_abs_diff(to_eigen(propagate(h, s, 0.9)), ref), 1e-11);
}

TEST(Bessel, MatchesStandardLibrary) {
  for (double x : {0.0, 1e-8, 0.01, 0.5, 3.0, 17.3, 120.0, 900.0}) {
    const auto seq = bessel_j_sequence(x);
    ASSERT_FALSE(seq.empty());
    for (std::size_t k = 0; k < std::min<std::size_t>(seq.size(), 60); ++k) {
      const double ref = std::cyl_bessel_j(static_cast<double>(k), x);
      EXPECT_NEAR(seq[k], ref, 1e-12 * (1.0 + std::abs(ref))) << "x=" << x << " k=" << k;
    }
  }
  EXPECT_THROW(bessel_j_sequence(-1.0), InvalidArgument);
}

}  // namespace
}  // namespace ddmag
