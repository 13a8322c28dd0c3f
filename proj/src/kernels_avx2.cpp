// SPDX-License-Identifier: Apache-2.0
//
// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and is
// only entered through the dispatch table after a CPUID check.
#include <immintrin.h>

#include "wnls/kernels.hpp"

namespace wnls::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// (w0, w1) -> (w0, w0, w1, w1)
inline __m256d dup_pairs(const double* w) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w)), 0x50);
}

inline double* raw(cplx* a) { return reinterpret_cast<double*>(a); }
inline const double* raw(const cplx* a) { return reinterpret_cast<const double*>(a); }

void cmul(cplx* a, const cplx* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(raw(a + i));
    const __m256d vb = _mm256_loadu_pd(raw(b + i));
    const __m256d b_re = _mm256_movedup_pd(vb);
    const __m256d b_im = _mm256_permute_pd(vb, 0xF);
    const __m256d a_sw = _mm256_permute_pd(va, 0x5);
    _mm256_storeu_pd(raw(a + i), _mm256_fmaddsub_pd(va, b_re, _mm256_mul_pd(a_sw, b_im)));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    a[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void rmul(cplx* a, const double* w, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    _mm256_storeu_pd(raw(a + i), _mm256_mul_pd(_mm256_loadu_pd(raw(a + i)), dup_pairs(w + i)));
  for (; i < n; ++i) a[i] *= w[i];
}

void scale(cplx* a, double s, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    _mm256_storeu_pd(raw(a + i), _mm256_mul_pd(_mm256_loadu_pd(raw(a + i)), vs));
  for (; i < n; ++i) a[i] *= s;
}

void abs2(const cplx* a, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(raw(a + i));
    const __m256d v1 = _mm256_loadu_pd(raw(a + i + 2));
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0xD8));
  }
  for (; i < n; ++i) out[i] = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
}

double sum_abs2(const cplx* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(raw(a + i));
    const __m256d v1 = _mm256_loadu_pd(raw(a + i + 2));
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return s;
}

double weighted_abs2(const cplx* a, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(raw(a + i));
    acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), dup_pairs(w + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * (a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
  return s;
}

double sum_abs4(const cplx* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(raw(a + i));
    const __m256d v1 = _mm256_loadu_pd(raw(a + i + 2));
    const __m256d m = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    acc = _mm256_fmadd_pd(m, m, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double m = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    s += m * m;
  }
  return s;
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double im_conj_dot(const cplx* a, const cplx* b, std::size_t n) {
  const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(raw(a + i));
    const __m256d b_sw = _mm256_permute_pd(_mm256_loadu_pd(raw(b + i)), 0x5);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(va, sign), b_sw, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  return s;
}

void rotate(cplx* a, const double* c, const double* s, std::size_t n) {
  const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(raw(a + i));
    const __m256d a_sw = _mm256_permute_pd(va, 0x5);
    const __m256d ss = _mm256_mul_pd(dup_pairs(s + i), sign);
    _mm256_storeu_pd(raw(a + i), _mm256_fmadd_pd(a_sw, ss, _mm256_mul_pd(va, dup_pairs(c + i))));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    a[i] = cplx(ar * c[i] + ai * s[i], ai * c[i] - ar * s[i]);
  }
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2",   cmul, rmul,        scale, abs2, sum_abs2, weighted_abs2,
                                 sum_abs4, dot,  im_conj_dot, rotate};
  return table;
}

}  // namespace wnls::simd
