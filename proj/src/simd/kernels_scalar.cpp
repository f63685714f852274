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

#include "kernels_impl.hpp"

namespace ddmag::simd::detail {

void tridiag_apply_scalar(cplx* out, const cplx* in, const double* diag,
                          const cplx* upper, double scale, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = diag ? diag[k] * in[k] : cplx{};
    if (k + 1 < n) acc += upper[k] * in[k + 1];
    if (k > 0) acc += std::conj(upper[k - 1]) * in[k - 1];
    out[k] = scale * acc;
  }
}

void cheb_step_scalar(cplx* out, const cplx* cur, const cplx* prev,
                      const double* diag, const cplx* upper, double scale,
                      std::size_t n) {
  const double s2 = 2.0 * scale;
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = diag ? diag[k] * cur[k] : cplx{};
    if (k + 1 < n) acc += upper[k] * cur[k + 1];
    if (k > 0) acc += std::conj(upper[k - 1]) * cur[k - 1];
    out[k] = s2 * acc - prev[k];
  }
}

void axpy_scalar(cplx* acc, cplx coef, const cplx* v, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) acc[k] += coef * v[k];
}

void mul_scalar(cplx* x, const cplx* w, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) x[k] *= w[k];
}

cplx dot_scalar(const cplx* a, const cplx* b, std::size_t n) {
  cplx s{};
  for (std::size_t k = 0; k < n; ++k) s += std::conj(a[k]) * b[k];
  return s;
}

MomentSums moments_scalar(const cplx* c, const double* ladder, const double* m,
                          std::size_t n) {
  MomentSums s;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = std::norm(c[k]);
    s.norm += w;
    s.jz += m[k] * w;
    s.jz2 += m[k] * m[k] * w;
    if (k >= 1) {
      const cplx t = std::conj(c[k - 1]) * c[k] * ladder[k];
      s.jplus += t;
      s.jplus_jz_sym += t * (m[k - 1] + m[k]);
    }
    if (k >= 2) {
      s.jplus2 += std::conj(c[k - 2]) * c[k] * (ladder[k] * ladder[k - 1]);
    }
  }
  return s;
}

}  // namespace ddmag::simd::detail
