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

#pragma once

// Bias, signal and quasi-static stray fields. All fields in Gauss.

#include <string>
#include <vector>

#include "ddmag/rng.hpp"
#include "ddmag/types.hpp"

namespace ddmag {

enum class NoiseModel { Full3d, Dephasing };

struct FieldConfig {
  double B0 = 0.0;  // bias along +z
  double b0 = 0.0;  // signal along +z, does not follow bias reversals
  double bc = 0.0;  // stray-field cutoff
  double gamma = kGamma;
  NoiseModel noise_model = NoiseModel::Full3d;
};

struct StrayField {
  double bx = 0.0, by = 0.0, bz = 0.0;
  Vec3 vec() const { return {bx, by, bz}; }
};

/// Throws InvalidArgument for negative bc, non-positive gamma or
/// non-finite values.
void validate(const FieldConfig& cfg);

/// Soft checks, e.g. a bias that is not much larger than b0 or bc.
std::vector<std::string> field_warnings(const FieldConfig& cfg);

/// tau = 2 m pi / (gamma B0).
double magic_tau(const FieldConfig& cfg, int m);

/// Distance of gamma B0 tau from the nearest multiple of 2 pi, in radians.
double magic_mismatch(const FieldConfig& cfg, double tau);

/// Independent uniform components in [-bc, bc]; only bz for the dephasing
/// model.
StrayField sample_stray(const FieldConfig& cfg, RngStream& rng);

/// (bx, by, sign B0 + b0 + bz).
Vec3 segment_field(const FieldConfig& cfg, const StrayField& stray, int bias_sign);

}  // namespace ddmag
