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

#include <immintrin.h>

#include "kernels_impl.hpp"

// Two complex<double> per 256-bit register, interleaved [re0 im0 re1 im1].

namespace ddmag::simd::detail {
namespace {

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(dp(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(dp(p), v); }

// [x0 x0 x1 x1] from two consecutive reals.
inline __m256d spread2(const double* p) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(p)), 0x50);
}

// a * b
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d br = _mm256_movedup_pd(b);
  const __m256d bi = _mm256_permute_pd(b, 0xF);
  const __m256d as = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, br, _mm256_mul_pd(as, bi));
}

// conj(a) * b
inline __m256d cmulc(__m256d a, __m256d b) {
  const __m256d ar = _mm256_movedup_pd(a);
  const __m256d ai = _mm256_permute_pd(a, 0xF);
  const __m256d bs = _mm256_permute_pd(b, 0x5);
  return _mm256_fmsubadd_pd(ar, b, _mm256_mul_pd(ai, bs));
}

inline cplx hsum(__m256d v) {
  const __m128d s = _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

inline cplx row(const cplx* in, const double* diag, const cplx* upper,
                std::size_t k, std::size_t n) {
  cplx acc = diag ? diag[k] * in[k] : cplx{};
  if (k + 1 < n) acc += upper[k] * in[k + 1];
  if (k > 0) acc += std::conj(upper[k - 1]) * in[k - 1];
  return acc;
}

// H * in for rows k, k+1 (both interior).
inline __m256d row2(const cplx* in, const double* diag, const cplx* upper,
                    std::size_t k) {
  __m256d acc = cmul(load2(upper + k), load2(in + k + 1));
  acc = _mm256_add_pd(acc, cmulc(load2(upper + k - 1), load2(in + k - 1)));
  if (diag) acc = _mm256_fmadd_pd(spread2(diag + k), load2(in + k), acc);
  return acc;
}

}  // namespace

void tridiag_apply_avx2(cplx* out, const cplx* in, const double* diag,
                        const cplx* upper, double scale, std::size_t n) {
  if (n < 4) {
    tridiag_apply_scalar(out, in, diag, upper, scale, n);
    return;
  }
  const __m256d vs = _mm256_set1_pd(scale);
  out[0] = scale * row(in, diag, upper, 0, n);
  std::size_t k = 1;
  for (; k + 2 < n; k += 2) {
    store2(out + k, _mm256_mul_pd(vs, row2(in, diag, upper, k)));
  }
  for (; k < n; ++k) out[k] = scale * row(in, diag, upper, k, n);
}

void cheb_step_avx2(cplx* out, const cplx* cur, const cplx* prev,
                    const double* diag, const cplx* upper, double scale,
                    std::size_t n) {
  if (n < 4) {
    cheb_step_scalar(out, cur, prev, diag, upper, scale, n);
    return;
  }
  const double s2 = 2.0 * scale;
  const __m256d vs = _mm256_set1_pd(s2);
  out[0] = s2 * row(cur, diag, upper, 0, n) - prev[0];
  std::size_t k = 1;
  for (; k + 2 < n; k += 2) {
    store2(out + k, _mm256_fmsub_pd(vs, row2(cur, diag, upper, k), load2(prev + k)));
  }
  for (; k < n; ++k) out[k] = s2 * row(cur, diag, upper, k, n) - prev[k];
}

void axpy_avx2(cplx* acc, cplx coef, const cplx* v, std::size_t n) {
  const __m256d c = _mm256_setr_pd(coef.real(), coef.imag(), coef.real(), coef.imag());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    store2(acc + k, _mm256_add_pd(load2(acc + k), cmul(c, load2(v + k))));
  }
  for (; k < n; ++k) acc[k] += coef * v[k];
}

void mul_avx2(cplx* x, const cplx* w, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) store2(x + k, cmul(load2(x + k), load2(w + k)));
  for (; k < n; ++k) x[k] *= w[k];
}

cplx dot_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) acc = _mm256_add_pd(acc, cmulc(load2(a + k), load2(b + k)));
  cplx s = hsum(acc);
  for (; k < n; ++k) s += std::conj(a[k]) * b[k];
  return s;
}

MomentSums moments_avx2(const cplx* c, const double* ladder, const double* m,
                        std::size_t n) {
  if (n < 6) return moments_scalar(c, ladder, m, n);
  MomentSums s;
  // Rows 0 and 1 carry partial ladder terms; do them in scalar.
  for (std::size_t k = 0; k < 2; ++k) {
    const double w = std::norm(c[k]);
    s.norm += w;
    s.jz += m[k] * w;
    s.jz2 += m[k] * m[k] * w;
    if (k == 1) {
      const cplx t = std::conj(c[0]) * c[1] * ladder[1];
      s.jplus += t;
      s.jplus_jz_sym += t * (m[0] + m[1]);
    }
  }
  __m256d vnorm = _mm256_setzero_pd();
  __m256d vjz = _mm256_setzero_pd();
  __m256d vjz2 = _mm256_setzero_pd();
  __m256d vjp = _mm256_setzero_pd();
  __m256d vjp2 = _mm256_setzero_pd();
  __m256d vjpz = _mm256_setzero_pd();
  std::size_t k = 2;
  for (; k + 2 <= n; k += 2) {
    const __m256d ck = load2(c + k);
    const __m256d sq = _mm256_mul_pd(ck, ck);
    const __m256d w = _mm256_add_pd(sq, _mm256_permute_pd(sq, 0x5));
    const __m256d mk = spread2(m + k);
    const __m256d mw = _mm256_mul_pd(mk, w);
    vnorm = _mm256_add_pd(vnorm, w);
    vjz = _mm256_add_pd(vjz, mw);
    vjz2 = _mm256_fmadd_pd(mk, mw, vjz2);

    const __m256d lk = spread2(ladder + k);
    const __m256d t = _mm256_mul_pd(lk, cmulc(load2(c + k - 1), ck));
    vjp = _mm256_add_pd(vjp, t);
    vjpz = _mm256_fmadd_pd(_mm256_add_pd(spread2(m + k - 1), mk), t, vjpz);
    const __m256d l2 = _mm256_mul_pd(lk, spread2(ladder + k - 1));
    vjp2 = _mm256_fmadd_pd(l2, cmulc(load2(c + k - 2), ck), vjp2);
  }
  // Lanes of vnorm/vjz/vjz2 hold duplicated values; take one of each pair.
  const cplx hn = hsum(vnorm), hz = hsum(vjz), hz2 = hsum(vjz2);
  s.norm += hn.real();
  s.jz += hz.real();
  s.jz2 += hz2.real();
  s.jplus += hsum(vjp);
  s.jplus2 += hsum(vjp2);
  s.jplus_jz_sym += hsum(vjpz);
  for (; k < n; ++k) {
    const double w = std::norm(c[k]);
    s.norm += w;
    s.jz += m[k] * w;
    s.jz2 += m[k] * m[k] * w;
    const cplx t = std::conj(c[k - 1]) * c[k] * ladder[k];
    s.jplus += t;
    s.jplus_jz_sym += t * (m[k - 1] + m[k]);
    s.jplus2 += std::conj(c[k - 2]) * c[k] * (ladder[k] * ladder[k - 1]);
  }
  return s;
}

}  // namespace ddmag::simd::detail
