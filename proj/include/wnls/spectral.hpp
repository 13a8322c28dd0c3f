// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "wnls/grid.hpp"

namespace wnls {

/// Throws DivergedField if any sample is NaN/Inf.
void require_finite(const Field& f, const char* context);

Spectrum transform_forward(const Field& f);
Field transform_inverse(const Spectrum& s);

/// Exact free Schroedinger flow e^{i dt Delta}: multiplier e^{-i|k|^2 dt}.
Field apply_free_propagator(const Field& f, double dt);
void apply_free_propagator_inplace(Field& f, double dt);

/// Spectral partial derivatives, one field per axis.
std::vector<Field> gradient(const Field& f);
Field partial(const Field& f, int axis);
Field laplacian(const Field& f);

enum class LpSide { Low, High, Band };
enum class LpShape { Smooth, Sharp };

/// Radial cutoff: 1 for r <= 1, C-infinity taper on (1, 2), 0 for r >= 2.
double lp_bump(double r);

/// Low: phi(|k|/N). High: 1 - phi(|k|/N). Band: phi(|k|/N) - phi(2|k|/N).
/// The sharp shape uses the indicator of r <= 1 in place of phi.
Field lp_project(const Field& f, double N, LpSide side, LpShape shape = LpShape::Smooth);

struct Norm {
  enum class Kind { L2, L4, Lp, H1, H1dot, HsDot, Sigma };
  Kind kind = Kind::L2;
  double param = 0.0;

  static Norm l2() { return {Kind::L2, 2.0}; }
  static Norm l4() { return {Kind::L4, 4.0}; }
  static Norm lp(double p) { return {Kind::Lp, p}; }
  static Norm h1() { return {Kind::H1, 0.0}; }
  static Norm h1dot() { return {Kind::H1dot, 1.0}; }
  static Norm hs_dot(double s) { return {Kind::HsDot, s}; }
  static Norm sigma() { return {Kind::Sigma, 0.0}; }
};

/// Grid quadrature (dx^d-weighted sums). H1 = sqrt(|f|_2^2 + |grad f|_2^2);
/// Sigma = |f|_H1 + | |x| f |_2. Throws InvalidArgument for p < 1 or s < 0.
double norm(const Field& f, Norm kind);

/// Integral of |f|^2.
double mass(const Field& f);
/// Integral of |grad f|^2, from the spectrum.
double gradient_energy(const Field& f);
/// Integral of |x|^2 |f|^2.
double variance(const Field& f);
/// Integral of |f|^4.
double quartic(const Field& f);

/// Raw unnormalized DFT of f (FFT layout); the building block of the above.
ComplexBuffer raw_spectrum(const Field& f);

}  // namespace wnls
