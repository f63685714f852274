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

#include <cmath>
#include <numbers>
#include <vector>

#include "ddmag/ddsim.hpp"
#include "ddmag/numerics.hpp"
#include "ddmag/probes.hpp"

namespace ddmag {
namespace {

constexpr double kLabBias = 14.3e-3;

TEST(Schedule, BUniStructure) {
  const auto s = build_schedule(SequenceKind::BUniDD, 1e-4, 3, 2);
  ASSERT_EQ(s.segments.size(), 12u);
  EXPECT_EQ(s.pulse_count(), 12u);
  EXPECT_NEAR(s.duration(), 12e-4, 1e-15);
  const int signs[4] = {1, 1, -1, -1};
  for (std::size_t q = 0; q < 12; ++q) {
    EXPECT_EQ(s.segments[q].bias_sign, signs[q % 4]);
    EXPECT_NEAR(s.segment_start[q], q * 1e-4, 1e-15);
  }
  ASSERT_EQ(s.samples.size(), 25u);
  EXPECT_EQ(s.samples.front().t, 0.0);
  for (std::size_t i = 1; i < s.samples.size(); ++i) {
    EXPECT_GT(s.samples[i].t, s.samples[i - 1].t);
    EXPECT_EQ(s.samples[i].cycle, static_cast<int>((i - 1) / 8 + 1));
    EXPECT_EQ(s.samples[i].quarter, static_cast<int>(((i - 1) / 2) % 4 + 1));
  }
  EXPECT_NEAR(s.samples.back().t, 12e-4, 1e-15);
}

TEST(Schedule, UniKeepsBiasSign) {
  const auto s = build_schedule(SequenceKind::UniDD, 1e-4, 2, 1);
  for (const auto& seg : s.segments) EXPECT_EQ(seg.bias_sign, 1);
  EXPECT_EQ(s.pulse_count(), 8u);
}

TEST(Schedule, FidIsOneSegment) {
  const auto s = build_schedule(SequenceKind::Fid, 1e-4, 2, 3);
  ASSERT_EQ(s.segments.size(), 1u);
  EXPECT_EQ(s.pulse_count(), 0u);
  EXPECT_EQ(s.samples.size(), 25u);
  EXPECT_NEAR(s.samples.back().offset, 8e-4, 1e-15);
}

TEST(Schedule, ExplicitFidTimes) {
  const std::vector<double> t{1e-3, 2e-3, 5e-3};
  const auto s = build_fid(5e-3, t);
  ASSERT_EQ(s.samples.size(), 4u);
  EXPECT_EQ(s.samples[3].t, 5e-3);
  const std::vector<double> bad{2e-3, 1e-3};
  EXPECT_THROW(build_fid(5e-3, bad), InvalidArgument);
  const std::vector<double> late{6e-3};
  EXPECT_THROW(build_fid(5e-3, late), InvalidArgument);
}

TEST(Schedule, RejectsBadInput) {
  EXPECT_THROW(build_schedule(SequenceKind::BUniDD, 0.0, 1, 1), InvalidArgument);
  EXPECT_THROW(build_schedule(SequenceKind::BUniDD, 1e-4, 0, 1), InvalidArgument);
  EXPECT_THROW(build_schedule(SequenceKind::BUniDD, 1e-4, 1, 0), InvalidArgument);
}

TEST(Schedule, MagicWarning) {
  const FieldConfig cfg{kLabBias};
  EXPECT_TRUE(schedule_warnings(build_schedule(SequenceKind::BUniDD, magic_tau(cfg, 1), 1, 1), cfg)
                  .empty());
  EXPECT_EQ(schedule_warnings(build_schedule(SequenceKind::BUniDD, 1e-4, 1, 1), cfg).size(), 1u);
  EXPECT_TRUE(schedule_warnings(build_schedule(SequenceKind::Fid, 1e-4, 1, 1), cfg).empty());
}

TEST(Run, FidFollowsSineLaw) {
  const SpinMagnitude j(40);
  const FieldConfig cfg{0.0, 1.6e-6};
  const auto s = build_schedule(SequenceKind::Fid, 5e-3, 10, 2);
  const auto r = run_realization(prepare_css(j, {1, 0, 0}), s, cfg, {});
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    const double phi = cfg.gamma * cfg.b0 * s.samples[i].t;
    EXPECT_NEAR(r.obs[i].jy, 20.0 * std::sin(phi), 1e-9);
    EXPECT_NEAR(r.obs[i].jx, 20.0 * std::cos(phi), 1e-9);
    EXPECT_NEAR(r.obs[i].jy2 - r.obs[i].jy * r.obs[i].jy, 10.0 * std::cos(phi) * std::cos(phi),
                1e-8);
  }
}

TEST(Run, SlopeInjectionMatchesDerivative) {
  const SpinMagnitude j(40);
  const FieldConfig cfg{0.0, 1.6e-6};
  const auto s = build_schedule(SequenceKind::Fid, 5e-3, 4, 1);
  RunOptions opt;
  opt.slope_delta = 1e-4;
  const auto r = run_realization(prepare_css(j, {1, 0, 0}), s, cfg, {}, opt);
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    const double phi = cfg.gamma * cfg.b0 * s.samples[i].t;
    const double slope = (r.obs[i].jy_plus - r.obs[i].jy_minus) / 2e-4;
    EXPECT_NEAR(slope, 20.0 * std::cos(phi), 1e-6);
  }
}

TEST(Run, StaticZFieldRefocusesAtCycleEnds) {
  const SpinMagnitude j(20);
  FieldConfig cfg{kLabBias};
  const double tau = magic_tau(cfg, 1);
  const StrayField stray{0.0, 0.0, 7e-5};
  const auto psi0 = prepare_css(j, {1, 0, 0});
  for (auto kind : {SequenceKind::UniDD, SequenceKind::BUniDD}) {
    const auto s = build_schedule(kind, tau, 3, 1);
    const auto r = run_realization(psi0, s, cfg, stray);
    for (std::size_t i = 1; i < s.samples.size(); ++i) {
      if (s.samples[i].quarter % 2 == 0) {
        EXPECT_NEAR(r.obs[i].fidelity, 1.0, 1e-9) << sequence_name(kind) << " sample " << i;
      }
    }
  }
}

TEST(Run, FidDoesNotRefocus) {
  const SpinMagnitude j(20);
  FieldConfig cfg{kLabBias};
  const auto s = build_schedule(SequenceKind::Fid, magic_tau(cfg, 1), 1, 1);
  const auto r = run_realization(prepare_css(j, {1, 0, 0}), s, cfg, {0.0, 0.0, 7e-5});
  EXPECT_LT(r.obs.back().fidelity, 0.99);
}

TEST(Run, FinalStateAndNorm) {
  const SpinMagnitude j(30);
  FieldConfig cfg{kLabBias, 1.6e-6};
  const auto s = build_schedule(SequenceKind::BUniDD, magic_tau(cfg, 1), 2, 1);
  SpinState fin = prepare_css(j, {1, 0, 0});
  run_realization(prepare_css(j, {1, 0, 0}), s, cfg, {1e-5, -3e-5, 2e-5}, {}, fin);
  EXPECT_NEAR(fin.norm(), 1.0, 1e-12);
}

TEST(Run, RejectsUnnormalisedState) {
  const SpinMagnitude j(2);
  SpinState bad(j, {1.0, 1.0, 0.0});
  EXPECT_THROW(run_realization(bad, build_schedule(SequenceKind::Fid, 1e-4, 1, 1), {}, {}),
               InvalidArgument);
}

TEST(Rotation, FidAngleIsLarmorAngle) {
  const FieldConfig cfg{0.0, 2e-5};
  const auto s = build_schedule(SequenceKind::Fid, 1e-3, 1, 1);
  const double expect = cfg.gamma * 2e-5 * 4e-3;
  EXPECT_NEAR(net_rotation_angle(s, cfg, {}), std::abs(std::remainder(expect, 2 * std::numbers::pi)),
              1e-10);
  const StrayField tilt{3e-6, -4e-6, 0.0};
  const double b = std::hypot(3e-6, -4e-6, 2e-5);
  EXPECT_NEAR(net_rotation_angle(s, cfg, tilt),
              std::abs(std::remainder(cfg.gamma * b * 4e-3, 2 * std::numbers::pi)), 1e-10);
}

// Rms residual rotation per cycle over random stray fields, for each
// bc / B0 in `eps`. Returns the log-log slope of DD rms over FID rms.
double suppression_slope(SequenceKind kind, const std::vector<double>& eps) {
  std::vector<double> lx, ly;
  for (double e : eps) {
    FieldConfig cfg{kLabBias, 0.0, e * kLabBias};
    const double tau = magic_tau(cfg, 1);
    const auto dd = build_schedule(kind, tau, 1, 1);
    const auto fid = build_schedule(SequenceKind::Fid, tau, 1, 1);
    double s_dd = 0.0, s_fid = 0.0;
    for (int i = 0; i < 64; ++i) {
      RngStream rng(11, i);
      const auto st = sample_stray(cfg, rng);
      s_dd += std::pow(net_rotation_angle(dd, cfg, st), 2);
      s_fid += std::pow(net_rotation_angle(fid, cfg, st), 2);
    }
    lx.push_back(std::log(e));
    ly.push_back(0.5 * std::log(s_dd / s_fid));
  }
  return numerics::fit_line(lx, ly).slope;
}

TEST(Rotation, BUniSuppressionIsSecondOrder) {
  EXPECT_NEAR(suppression_slope(SequenceKind::BUniDD, {2e-3, 5e-3, 1e-2, 2e-2, 5e-2}), 2.0, 0.1);
}

TEST(Rotation, UniSuppressionIsFirstOrder) {
  EXPECT_NEAR(suppression_slope(SequenceKind::UniDD, {2e-3, 5e-3, 1e-2, 2e-2, 5e-2}), 1.0, 0.1);
}

}  // namespace
}  // namespace ddmag
