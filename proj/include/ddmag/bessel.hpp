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

#include <vector>

namespace ddmag {

/// Bessel functions of the first kind J_0(x) ... J_K(x) for x >= 0, computed
/// by Miller's backward recurrence normalised with J_0 + 2 sum J_2k = 1.
/// The sequence is truncated after the last order k > x with |J_k| > tol.
std::vector<double> bessel_j_sequence(double x, double tol = 1e-18);

}  // namespace ddmag
