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

#include "ddmag/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "ddmag/rng.hpp"

namespace ddmag {
namespace {

constexpr std::uint64_t kShotSalt = 0x53484F5453ULL;

double binomial_readout(double j, double mean_jy, RngStream& rng) {
  const int n = static_cast<int>(std::lround(2.0 * j));
  const double p = std::clamp(0.5 * (1.0 + mean_jy / j), 0.0, 1.0);
  int up = 0;
  for (int k = 0; k < n; ++k) up += rng.uniform() < p ? 1 : 0;
  return up - j;
}

}  // namespace

EnsembleSeries run_ensemble(const FieldConfig& cfg, const Schedule& schedule,
                            const SpinState& probe, const EnsembleOptions& opt) {
  if (opt.realizations < 1) throw InvalidArgument("need at least one realization");
  validate(cfg);
  require_normalized(probe);
  const std::size_t m = opt.realizations;
  const std::size_t ns = schedule.samples.size();
  std::vector<RealizationSeries> slots(m);
  std::vector<std::exception_ptr> errors(m);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        RngStream rng(opt.seed, i);
        const StrayField stray = sample_stray(cfg, rng);
        RealizationSeries r = run_realization(probe, schedule, cfg, stray, opt.run);
        r.seed = opt.seed;
        r.stream = i;
        if (opt.finite_shots) {
          RngStream shots(splitmix64_mix(opt.seed ^ kShotSalt), i);
          const double j = probe.spin().value();
          for (auto& o : r.obs) {
            const double y = binomial_readout(j, o.jy, shots);
            const double yp = binomial_readout(j, o.jy_plus, shots);
            const double ym = binomial_readout(j, o.jy_minus, shots);
            o.jy = y;
            o.jy2 = y * y;
            o.jy_plus = yp;
            o.jy_minus = ym;
          }
        }
        slots[i] = std::move(r);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(m)));
  if (threads == 1) {
    work(0, m);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (m + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(m, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!errors[i]) continue;
    std::ostringstream msg;
    msg << "realization " << i << " (seed " << opt.seed << ", stream " << i << ") failed: ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      msg << e.what();
    }
    throw Error(msg.str());
  }

  EnsembleSeries out;
  out.samples = schedule.samples;
  out.realizations = m;
  out.seed = opt.seed;
  out.slope_delta = opt.run.slope_delta;
  for (auto* v : {&out.mean_jx, &out.mean_jy, &out.mean_jz, &out.std_jx, &out.std_jy, &out.var_q,
                  &out.var_c, &out.mean_jy_plus, &out.mean_jy_minus, &out.mean_fidelity,
                  &out.m4_jy, &out.var_var_q}) {
    v->assign(ns, 0.0);
  }
  const double inv_m = 1.0 / static_cast<double>(m);
  const double inv_m1 = m > 1 ? 1.0 / static_cast<double>(m - 1) : 0.0;
  for (std::size_t k = 0; k < ns; ++k) {
    double sx = 0, sy = 0, sz = 0, sq = 0, sp = 0, sm = 0, sf = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const Observation& o = slots[i].obs[k];
      sx += o.jx;
      sy += o.jy;
      sz += o.jz;
      sq += o.jy2 - o.jy * o.jy;
      sp += o.jy_plus;
      sm += o.jy_minus;
      sf += o.fidelity;
    }
    const double mx = sx * inv_m, my = sy * inv_m, mq = sq * inv_m;
    double dx2 = 0, dy2 = 0, dy4 = 0, dq2 = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const Observation& o = slots[i].obs[k];
      const double dx = o.jx - mx, dy = o.jy - my;
      const double dq = (o.jy2 - o.jy * o.jy) - mq;
      dx2 += dx * dx;
      dy2 += dy * dy;
      dy4 += dy * dy * dy * dy;
      dq2 += dq * dq;
    }
    out.mean_jx[k] = mx;
    out.mean_jy[k] = my;
    out.mean_jz[k] = sz * inv_m;
    out.var_q[k] = std::max(0.0, mq);
    out.var_c[k] = dy2 * inv_m1;
    out.std_jx[k] = std::sqrt(dx2 * inv_m1);
    out.std_jy[k] = std::sqrt(out.var_c[k]);
    out.m4_jy[k] = dy4 * inv_m;
    out.var_var_q[k] = dq2 * inv_m1;
    out.mean_jy_plus[k] = sp * inv_m;
    out.mean_jy_minus[k] = sm * inv_m;
    out.mean_fidelity[k] = sf * inv_m;
  }
  if (opt.keep_realizations) out.members = std::move(slots);
  return out;
}

}  // namespace ddmag
