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

#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"

namespace ddmag::simd {
namespace {

const KernelTable kScalar{
    detail::tridiag_apply_scalar, detail::cheb_step_scalar, detail::axpy_scalar,
    detail::mul_scalar,           detail::dot_scalar,       detail::moments_scalar,
};

#if defined(DDMAG_HAVE_AVX2)
const KernelTable kAvx2{
    detail::tridiag_apply_avx2, detail::cheb_step_avx2, detail::axpy_avx2,
    detail::mul_avx2,           detail::dot_avx2,       detail::moments_avx2,
};
#endif

bool cpu_has_avx2() {
#if defined(DDMAG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("DDMAG_SIMD")) {
    if (std::string(env) == "scalar") return Isa::Scalar;
  }
  return detected_isa();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return &kScalar;
    case Isa::Avx2:
#if defined(DDMAG_HAVE_AVX2)
      if (cpu_has_avx2()) return &kAvx2;
#endif
      return nullptr;
  }
  return nullptr;
}

Isa detected_isa() {
  static const Isa isa = cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
  return isa;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

const KernelTable& kernels() { return *kernels_for(active_isa()); }

bool force_isa(Isa isa) {
  if (kernels_for(isa) == nullptr) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

}  // namespace ddmag::simd
