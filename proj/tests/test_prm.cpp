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
#include <vector>

#include "ddmag/ensemble.hpp"
#include "ddmag/prm.hpp"
#include "ddmag/probes.hpp"

namespace ddmag {
namespace {

constexpr double kBias = 14.3e-3;
constexpr double kSignal = 1.6e-6;

// Ideal signal phase in the frame that follows the pulses: linear within a
// quarter, sign flipped by every pulse.
std::vector<double> ideal_local(const Schedule& s, double rate) {
  std::vector<double> out;
  double acc = 0.0;
  std::size_t next = 0;
  for (std::size_t si = 0; si < s.segments.size(); ++si) {
    while (next < s.samples.size() && s.samples[next].segment == si) {
      out.push_back(acc + rate * s.samples[next].offset);
      ++next;
    }
    acc += rate * s.segments[si].duration;
    if (s.segments[si].pulse_after) acc = -acc;
  }
  return out;
}

struct Synthetic {
  Schedule schedule;
  FieldConfig cfg;
  std::vector<double> jx, jy, local;
};

Synthetic synthetic(SequenceKind kind, int cycles, int spq, double amp) {
  Synthetic s;
  s.cfg = FieldConfig{kBias, kSignal};
  s.schedule = build_schedule(kind, magic_tau(s.cfg, 1), cycles, spq);
  s.local = ideal_local(s.schedule, s.cfg.gamma * s.cfg.b0);
  const auto bias = bias_reference(s.schedule, s.cfg);
  for (std::size_t i = 0; i < s.local.size(); ++i) {
    const double total = bias[i] + s.local[i];
    s.jx.push_back(amp * std::cos(total));
    s.jy.push_back(amp * std::sin(total));
  }
  return s;
}

TEST(Phase, SingleAngleAllModes) {
  const FieldConfig cfg{0.0, 0.0};
  const std::vector<double> t{1e-3};
  const auto s = build_fid(1e-3, t);
  const std::vector<double> jx{0.0, 50.0 * std::cos(0.3)}, jy{0.0, 50.0 * std::sin(0.3)};
  for (auto m : {PhaseMode::Atan2Xy, PhaseMode::ArcsinJy, PhaseMode::SinusoidFit}) {
    const auto p = extract_phase(s, cfg, jx, jy, m, 50.0);
    EXPECT_NEAR(p.local[1], 0.3, 1e-12) << phase_mode_name(m);
  }
}

TEST(Phase, RecoversIdealLocalPhase) {
  for (auto kind : {SequenceKind::UniDD, SequenceKind::BUniDD}) {
    const auto s = synthetic(kind, 5, 4, 37.0);
    for (auto m : {PhaseMode::Atan2Xy, PhaseMode::ArcsinJy}) {
      const auto p = extract_phase(s.schedule, s.cfg, s.jx, s.jy, m, 37.0);
      for (std::size_t i = 0; i < p.size(); ++i) {
        ASSERT_NEAR(p.local[i], s.local[i], 1e-9) << phase_mode_name(m) << " i=" << i;
        ASSERT_FALSE(p.flagged[i]);
      }
    }
  }
}

// The window fit assumes a constant phase across at most five samples of one
// segment; its error is bounded by the phase excursion inside that window.
TEST(Phase, SinusoidFitWithinWindowExcursion) {
  const auto s = synthetic(SequenceKind::BUniDD, 5, 8, 37.0);
  const auto p = extract_phase(s.schedule, s.cfg, s.jx, s.jy, PhaseMode::SinusoidFit, 37.0);
  const double step = s.cfg.gamma * s.cfg.b0 * s.schedule.tau / 8.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(p.local[i], s.local[i], 2.0 * step) << i;
  }
  FieldConfig still{kBias, 0.0};
  const auto z = synthetic(SequenceKind::BUniDD, 2, 8, 37.0);
  std::vector<double> jx(z.jx.size()), jy(z.jy.size());
  const auto bias = bias_reference(z.schedule, still);
  for (std::size_t i = 0; i < bias.size(); ++i) {
    jx[i] = 37.0 * std::cos(bias[i] + 0.2);
    jy[i] = 37.0 * std::sin(bias[i] + 0.2);
  }
  const auto c = extract_phase(z.schedule, still, jx, jy, PhaseMode::SinusoidFit, 37.0);
  for (double v : c.local) EXPECT_NEAR(v, 0.2, 1e-9);
}

TEST(Phase, ArcsinFlagsOverRange) {
  const FieldConfig cfg{};
  const std::vector<double> t{1e-3};
  const auto s = build_fid(1e-3, t);
  const std::vector<double> jx{1.0, 0.0}, jy{0.0, 12.0};
  const auto p = extract_phase(s, cfg, jx, jy, PhaseMode::ArcsinJy, 10.0);
  EXPECT_TRUE(p.flagged[1]);
  EXPECT_FALSE(p.flagged[0]);
}

TEST(Phase, BiasReferenceReturnsAtMagicTau) {
  const FieldConfig cfg{kBias};
  const auto s = build_schedule(SequenceKind::BUniDD, magic_tau(cfg, 1), 3, 1);
  const auto b = bias_reference(s, cfg);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_NEAR(std::remainder(b[i], 2 * std::numbers::pi), 0.0, 1e-9);
  }
}

TEST(Phase, SizeMismatchThrows) {
  const auto s = build_schedule(SequenceKind::Fid, 1e-3, 1, 1);
  const std::vector<double> one{1.0};
  EXPECT_THROW(extract_phase(s, {}, one, one, PhaseMode::Atan2Xy, 1.0), InvalidArgument);
}

TEST(Relay, Multiples) {
  EXPECT_EQ(relay_multiple(1, 1), 0);
  EXPECT_EQ(relay_multiple(1, 2), 1);
  EXPECT_EQ(relay_multiple(1, 3), 1);
  EXPECT_EQ(relay_multiple(1, 4), 2);
  EXPECT_EQ(relay_multiple(3, 1), 4);
  EXPECT_EQ(relay_multiple(3, 4), 6);
  EXPECT_THROW(relay_multiple(0, 1), InvalidArgument);
  EXPECT_THROW(relay_multiple(1, 5), InvalidArgument);
}

TEST(Relay, IdealPhaseBecomesTheFreeLine) {
  const auto s = synthetic(SequenceKind::BUniDD, 6, 3, 10.0);
  const auto p = extract_phase(s.schedule, s.cfg, s.jx, s.jy, PhaseMode::Atan2Xy, 10.0);
  const double theta0 = s.cfg.gamma * s.cfg.b0 * s.schedule.tau;
  const auto r = relay(p, theta0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_NEAR(r[i], s.cfg.gamma * s.cfg.b0 * p.samples[i].t, 1e-9);
  }
  EXPECT_LT(relay_residual(p, theta0), 1e-18);
  EXPECT_GT(relay_residual(p, 1.1 * theta0), relay_residual(p, theta0) + 1e-12);
  EXPECT_GT(relay_residual(p, 0.9 * theta0), relay_residual(p, theta0) + 1e-12);
}

TEST(Relay, FidIsIdentity) {
  const auto s = synthetic(SequenceKind::Fid, 2, 2, 10.0);
  const auto p = extract_phase(s.schedule, s.cfg, s.jx, s.jy, PhaseMode::Atan2Xy, 10.0);
  EXPECT_EQ(relay(p, 0.7), p.local);
}

TEST(Estimate, ExactOnIdealData) {
  for (auto kind : {SequenceKind::UniDD, SequenceKind::BUniDD, SequenceKind::Fid}) {
    const auto s = synthetic(kind, 8, 2, 20.0);
    const auto p = extract_phase(s.schedule, s.cfg, s.jx, s.jy, PhaseMode::Atan2Xy, 20.0);
    const auto e = estimate_b0(p, s.schedule.tau, s.cfg.gamma);
    EXPECT_NEAR(e.b0_hat, kSignal, 1e-8 * kSignal) << sequence_name(kind);
    EXPECT_NEAR(e.b0_slope, kSignal, 1e-8 * kSignal);
    EXPECT_GT(e.r2, 0.999999);
    EXPECT_FALSE(e.multimodal);
  }
}

// The relayed residual is quadratic in theta0, so its minimiser is a
// projection: theta* = -<P local, P m> / (2 |P m|^2) with P removing
// span{1, t}.
double closed_form_theta(const PhaseSeries& p) {
  const Eigen::Index n = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd y(n), m(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = p.samples[i].t;
    y(i) = p.local[i];
    m(i) = 2.0 * relay_multiple(p.samples[i].cycle, p.samples[i].quarter);
  }
  const Eigen::MatrixXd q = a.householderQr().householderQ() * Eigen::MatrixXd::Identity(n, 2);
  const Eigen::VectorXd py = y - q * (q.transpose() * y);
  const Eigen::VectorXd pm = m - q * (q.transpose() * m);
  return -py.dot(pm) / pm.squaredNorm();
}

TEST(Estimate, MatchesClosedFormMinimiserOnNoisyData) {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> noise(0.0, 2e-4);
  for (int trial = 0; trial < 5; ++trial) {
    auto s = synthetic(SequenceKind::BUniDD, 10, 2, 30.0);
    auto p = extract_phase(s.schedule, s.cfg, s.jx, s.jy, PhaseMode::Atan2Xy, 30.0);
    for (auto& v : p.local) v += noise(gen);
    const auto e = estimate_b0(p, s.schedule.tau, s.cfg.gamma);
    const double ref = closed_form_theta(p);
    // The residual is flat to rounding within ~1e-8 relative of its minimum.
    EXPECT_NEAR(e.theta0_refined, ref, 1e-7 * std::abs(ref)) << trial;
  }
}

TEST(Estimate, BracketExpandsForPoorCrudeGuess) {
  const auto s = synthetic(SequenceKind::BUniDD, 6, 2, 20.0);
  const auto p = extract_phase(s.schedule, s.cfg, s.jx, s.jy, PhaseMode::Atan2Xy, 20.0);
  const double theta0 = s.cfg.gamma * kSignal * s.schedule.tau;
  const auto e = refine_theta0(p, 0.2 * theta0, s.schedule.tau, s.cfg.gamma);
  EXPECT_TRUE(e.bracket_expanded);
  EXPECT_NEAR(e.theta0_refined, theta0, 1e-8 * theta0);
}

TEST(Estimate, NeedsTwoCycles) {
  const auto s = synthetic(SequenceKind::BUniDD, 1, 2, 20.0);
  const auto p = extract_phase(s.schedule, s.cfg, s.jx, s.jy, PhaseMode::Atan2Xy, 20.0);
  EXPECT_THROW(estimate_b0(p, s.schedule.tau, s.cfg.gamma), InvalidArgument);
}

TEST(Estimate, CrudeFromFirstQuarter) {
  const auto s = synthetic(SequenceKind::BUniDD, 3, 4, 20.0);
  const auto p = extract_phase(s.schedule, s.cfg, s.jx, s.jy, PhaseMode::Atan2Xy, 20.0);
  EXPECT_NEAR(crude_theta0(p, s.schedule.tau), s.cfg.gamma * kSignal * s.schedule.tau, 1e-12);
}

TEST(Estimate, SimulatedNoiselessPipeline) {
  const SpinMagnitude j(20);
  const FieldConfig cfg{kBias, kSignal, 0.0};
  const auto sched = build_schedule(SequenceKind::BUniDD, magic_tau(cfg, 1), 6, 2);
  EnsembleOptions o;
  o.realizations = 2;
  const auto ens = run_ensemble(cfg, sched, prepare_css(j, {1, 0, 0}), o);
  for (auto m : {PhaseMode::Atan2Xy, PhaseMode::ArcsinJy, PhaseMode::SinusoidFit}) {
    const auto p = extract_phase(ens, sched, cfg, m, 10.0);
    const auto e = estimate_b0(p, sched.tau, cfg.gamma, o.realizations);
    EXPECT_NEAR(e.b0_hat, kSignal, 1e-6 * kSignal) << phase_mode_name(m);
    EXPECT_GT(e.b0_std, 0.0);
  }
}

}  // namespace
}  // namespace ddmag
