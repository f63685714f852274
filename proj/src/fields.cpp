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

#include "ddmag/fields.hpp"

#include <cmath>
#include <numbers>

namespace ddmag {

void validate(const FieldConfig& cfg) {
  if (!std::isfinite(cfg.B0) || !std::isfinite(cfg.b0) || !std::isfinite(cfg.bc) ||
      !std::isfinite(cfg.gamma)) {
    throw InvalidArgument("field configuration contains non-finite values");
  }
  if (cfg.bc < 0.0) throw InvalidArgument("bc must be non-negative");
  if (cfg.gamma <= 0.0) throw InvalidArgument("gamma must be positive");
}

std::vector<std::string> field_warnings(const FieldConfig& cfg) {
  std::vector<std::string> out;
  const double b = std::abs(cfg.B0);
  if (b > 0.0 && b < 10.0 * std::abs(cfg.b0)) out.emplace_back("bias is not much larger than b0");
  if (b > 0.0 && b < 10.0 * cfg.bc) out.emplace_back("bias is not much larger than bc");
  return out;
}

double magic_tau(const FieldConfig& cfg, int m) {
  if (cfg.B0 == 0.0) throw InvalidArgument("magic condition needs a non-zero bias");
  if (m < 1) throw InvalidArgument("magic index m must be >= 1");
  return 2.0 * m * std::numbers::pi / (cfg.gamma * std::abs(cfg.B0));
}

double magic_mismatch(const FieldConfig& cfg, double tau) {
  return std::abs(std::remainder(cfg.gamma * cfg.B0 * tau, 2.0 * std::numbers::pi));
}

StrayField sample_stray(const FieldConfig& cfg, RngStream& rng) {
  StrayField s;
  if (cfg.bc == 0.0) return s;
  if (cfg.noise_model == NoiseModel::Full3d) {
    s.bx = rng.uniform(-cfg.bc, cfg.bc);
    s.by = rng.uniform(-cfg.bc, cfg.bc);
  }
  s.bz = rng.uniform(-cfg.bc, cfg.bc);
  return s;
}

Vec3 segment_field(const FieldConfig& cfg, const StrayField& stray, int bias_sign) {
  return {stray.bx, stray.by, bias_sign * cfg.B0 + cfg.b0 + stray.bz};
}

}  // namespace ddmag
