// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "wnls/kernels.hpp"

namespace wnls::simd {
namespace {

void cmul(cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    a[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void rmul(cplx* a, const double* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] *= w[i];
}

void scale(cplx* a, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] *= s;
}

void abs2(const cplx* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
}

double sum_abs2(const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return s;
}

double weighted_abs2(const cplx* a, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += w[i] * (a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
  return s;
}

double sum_abs4(const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    s += m * m;
  }
  return s;
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double im_conj_dot(const cplx* a, const cplx* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  return s;
}

void rotate(cplx* a, const double* c, const double* s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    a[i] = cplx(ar * c[i] + ai * s[i], ai * c[i] - ar * s[i]);
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", cmul,        rmul, scale, abs2, sum_abs2, weighted_abs2,
                                 sum_abs4, dot,         im_conj_dot, rotate};
  return table;
}

}  // namespace wnls::simd
