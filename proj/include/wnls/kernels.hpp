// SPDX-License-Identifier: Apache-2.0
//
// Data-parallel inner loops used by the spectral operators and the split-step
// integrator. Each kernel has a portable scalar reference implementation and,
// where the CPU supports it, an AVX2/FMA variant. The variant is chosen once at
// startup (override with WNLS_SIMD=scalar) and both are equivalence-tested.
//
// Reductions operate on one chunk at a time; the caller combines chunk partials
// in a fixed order (see parallel.hpp), so results never depend on worker count.
#pragma once

#include <cstddef>
#include <string_view>

#include "wnls/aligned.hpp"

namespace wnls::simd {

struct KernelTable {
  std::string_view name;

  /// a[i] *= b[i]
  void (*cmul)(cplx* a, const cplx* b, std::size_t n);
  /// a[i] *= w[i] (real weights)
  void (*rmul)(cplx* a, const double* w, std::size_t n);
  /// a[i] *= s
  void (*scale)(cplx* a, double s, std::size_t n);
  /// out[i] = |a[i]|^2
  void (*abs2)(const cplx* a, double* out, std::size_t n);
  /// sum |a[i]|^2
  double (*sum_abs2)(const cplx* a, std::size_t n);
  /// sum w[i] |a[i]|^2
  double (*weighted_abs2)(const cplx* a, const double* w, std::size_t n);
  /// sum |a[i]|^4
  double (*sum_abs4)(const cplx* a, std::size_t n);
  /// sum x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// sum Im(conj(a[i]) * b[i])
  double (*im_conj_dot)(const cplx* a, const cplx* b, std::size_t n);
  /// a[i] *= exp(-i theta[i]); cos/sin are precomputed by the caller
  void (*rotate)(cplx* a, const double* cos_theta, const double* sin_theta, std::size_t n);
};

/// Portable reference kernels.
const KernelTable& scalar_kernels();

/// AVX2/FMA kernels, or nullptr when not compiled in or not supported by the CPU.
const KernelTable* avx2_kernels();

/// Kernels selected for this process.
const KernelTable& active_kernels();

}  // namespace wnls::simd
