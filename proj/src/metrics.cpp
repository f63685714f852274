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

#include "ddmag/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ddmag {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive");
}
}  // namespace

SensitivityPoint sensitivity(double delta_jy, double slope, double t, double gamma) {
  require_positive(t, "t");
  require_positive(gamma, "gamma");
  if (!(delta_jy >= 0.0)) throw InvalidArgument("delta_jy must be non-negative");
  SensitivityPoint p{t, kInf, delta_jy, slope};
  if (slope != 0.0) p.eta = delta_jy / (std::abs(slope) * gamma * std::sqrt(t));
  return p;
}

double sql_reference(double j, double t, double gamma) {
  require_positive(j, "J");
  require_positive(t, "t");
  return 1.0 / (gamma * std::sqrt(2.0 * t * j));
}

double hl_reference(double j, double t, double gamma) {
  require_positive(j, "J");
  require_positive(t, "t");
  return 1.0 / (gamma * j * std::sqrt(t));
}

double theta_factor(double r, double omega, double t) {
  const double tn = std::tan(omega * t);
  return std::sqrt(1.0 + r * tn * tn);
}

double sss_reference(double j, double t, double gamma, const SqueezingMetrics& m, double theta) {
  if (!(m.lambda > 0.0) || !m.lambda_valid) throw InvalidArgument("lambda = 0: mean spin has no x component");
  return theta / m.lambda * std::sqrt(m.xi2_s) * sql_reference(j, t, gamma);
}

double theta_omega(OmegaInterpretation w, const FieldConfig& cfg) {
  return w == OmegaInterpretation::Signal ? cfg.gamma * cfg.b0 : cfg.gamma * (cfg.B0 + cfg.b0);
}

ThresholdResult threshold_reference(ThresholdKind kind, double j, double t, double gamma,
                                    double B0) {
  require_positive(j, "J");
  require_positive(t, "t");
  require_positive(gamma, "gamma");
  ThresholdResult r;
  switch (kind) {
    case ThresholdKind::CssNoDD:
      r.value = 1.0 / (gamma * t * std::sqrt(j));
      return r;
    case ThresholdKind::SssNoDD:
      r.value = 1.0 / (gamma * t * j);
      return r;
    case ThresholdKind::WithDD: {
      require_positive(std::abs(B0), "B0");
      const double lb = 2.0 * std::log(std::abs(B0)) - std::log(gamma * t * std::sqrt(j));
      double l = std::log(std::abs(B0));
      r.converged = false;
      for (r.iterations = 1; r.iterations <= 500; ++r.iterations) {
        const double next = 0.75 * l + 0.25 * (lb - 2.0 * l);
        const double step = std::abs(next - l);
        l = next;
        if (step < 1e-15 * std::max(1.0, std::abs(l))) {
          r.converged = true;
          break;
        }
      }
      r.value = std::exp(l);
      return r;
    }
  }
  throw InvalidArgument("unknown threshold kind");
}

std::vector<SensitivityPoint> ensemble_sensitivity(const EnsembleSeries& ens, double gamma) {
  if (ens.slope_delta == 0.0) throw InvalidArgument("ensemble ran without a phase offset");
  std::vector<SensitivityPoint> out;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const double t = ens.samples[i].t;
    if (!(t > 0.0)) continue;
    const double slope = (ens.mean_jy_plus[i] - ens.mean_jy_minus[i]) / (2.0 * ens.slope_delta);
    out.push_back(sensitivity(std::sqrt(ens.var_total(i)), slope, t, gamma));
  }
  return out;
}

std::vector<double> lower_envelope(std::span<const double> eta) {
  const std::size_t n = eta.size();
  std::vector<double> out(eta.begin(), eta.end());
  if (n < 3) return out;
  std::vector<std::size_t> mins;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left = i == 0 || eta[i] <= eta[i - 1];
    const bool right = i + 1 == n || eta[i] <= eta[i + 1];
    if (left && right && std::isfinite(eta[i])) mins.push_back(i);
  }
  for (std::size_t k = 0; k + 1 < mins.size(); ++k) {
    const std::size_t a = mins[k], b = mins[k + 1];
    for (std::size_t i = a + 1; i < b; ++i) {
      const double w = static_cast<double>(i - a) / static_cast<double>(b - a);
      out[i] = std::min(eta[i], (1.0 - w) * eta[a] + w * eta[b]);
    }
  }
  return out;
}

double optimal_eta(std::span<const SensitivityPoint> pts) {
  double best = kInf;
  for (const auto& p : pts) {
    if (std::isfinite(p.eta)) best = std::min(best, p.eta);
  }
  return best;
}

}  // namespace ddmag
