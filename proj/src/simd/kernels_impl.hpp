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

#include "ddmag/simd/kernels.hpp"

namespace ddmag::simd::detail {

void tridiag_apply_scalar(cplx* out, const cplx* in, const double* diag,
                          const cplx* upper, double scale, std::size_t n);
void cheb_step_scalar(cplx* out, const cplx* cur, const cplx* prev,
                      const double* diag, const cplx* upper, double scale,
                      std::size_t n);
void axpy_scalar(cplx* acc, cplx coef, const cplx* v, std::size_t n);
void mul_scalar(cplx* x, const cplx* w, std::size_t n);
cplx dot_scalar(const cplx* a, const cplx* b, std::size_t n);
MomentSums moments_scalar(const cplx* c, const double* ladder, const double* m,
                          std::size_t n);

#if defined(DDMAG_HAVE_AVX2)
void tridiag_apply_avx2(cplx* out, const cplx* in, const double* diag,
                        const cplx* upper, double scale, std::size_t n);
void cheb_step_avx2(cplx* out, const cplx* cur, const cplx* prev,
                    const double* diag, const cplx* upper, double scale,
                    std::size_t n);
void axpy_avx2(cplx* acc, cplx coef, const cplx* v, std::size_t n);
void mul_avx2(cplx* x, const cplx* w, std::size_t n);
cplx dot_avx2(const cplx* a, const cplx* b, std::size_t n);
MomentSums moments_avx2(const cplx* c, const double* ladder, const double* m,
                        std::size_t n);
#endif

}  // namespace ddmag::simd::detail
