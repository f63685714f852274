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

// Inner-loop kernels for spin-state vectors in the |J, m> basis.
//
// Every kernel has a scalar reference implementation. Wider variants
// (currently AVX2+FMA) are compiled into separate translation units and
// selected once at startup from the CPU feature flags. The scalar and the
// vector variants agree to rounding; they are not bit-identical because the
// vector reductions sum in lane order.

#include <complex>
#include <cstddef>
#include <string_view>

namespace ddmag::simd {

using cplx = std::complex<double>;

/// Raw sums produced by a single pass over a state vector. Index k runs over
/// m_k = J - k; `ladder[k]` is the J+ coefficient sqrt(J(J+1) - m_k(m_k+1)),
/// i.e. <k-1|J+|k>.
struct MomentSums {
  double norm = 0.0;        // sum |c_k|^2
  double jz = 0.0;          // sum m_k |c_k|^2
  double jz2 = 0.0;         // sum m_k^2 |c_k|^2
  cplx jplus{};             // <J+>
  cplx jplus2{};            // <J+ J+>
  cplx jplus_jz_sym{};      // <J+ Jz + Jz J+>
};

struct KernelTable {
  /// out = scale * H * in, H Hermitian tridiagonal: diagonal `diag` (may be
  /// null for a zero diagonal) and superdiagonal `upper` (n-1 entries); the
  /// subdiagonal is conj(upper).
  void (*tridiag_apply)(cplx* out, const cplx* in, const double* diag,
                        const cplx* upper, double scale, std::size_t n);
  /// Chebyshev three-term step: out = 2 * scale * H * cur - prev.
  void (*cheb_step)(cplx* out, const cplx* cur, const cplx* prev,
                    const double* diag, const cplx* upper, double scale,
                    std::size_t n);
  /// acc += coef * v
  void (*axpy)(cplx* acc, cplx coef, const cplx* v, std::size_t n);
  /// x[k] *= w[k]
  void (*mul)(cplx* x, const cplx* w, std::size_t n);
  /// sum conj(a[k]) * b[k]
  cplx (*dot)(const cplx* a, const cplx* b, std::size_t n);
  MomentSums (*moments)(const cplx* c, const double* ladder, const double* m,
                        std::size_t n);
};

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Kernel table for the active ISA.
const KernelTable& kernels();

/// Reference implementations; always available.
const KernelTable& scalar_kernels();

/// Table for a specific ISA, or nullptr when not compiled in or not supported
/// by this CPU.
const KernelTable* kernels_for(Isa isa);

Isa active_isa();

/// Best ISA supported by both the build and the running CPU.
Isa detected_isa();

/// Overrides the dispatch choice. Returns false (and leaves the choice
/// untouched) when `isa` is unavailable. The environment variable
/// DDMAG_SIMD=scalar has the same effect at startup.
bool force_isa(Isa isa);

}  // namespace ddmag::simd
