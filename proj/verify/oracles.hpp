// SPDX-License-Identifier: Apache-2.0
//
// Reference computations that share no code path with the library's spectral
// machinery: direct sums, closed forms and adaptive quadrature.
#pragma once

#include <complex>
#include <vector>

#include "wnls/functionals.hpp"
#include "wnls/grid.hpp"
#include "wnls/model.hpp"

namespace wnls::oracle {

/// dx^d sum_x f(x) e^{-i k.x} at every grid wavenumber, by direct summation.
std::vector<std::complex<double>> direct_fourier(const Field& f);

/// Free evolution of A e^{-|x|^2/w^2} in d dimensions:
/// A (1 + 4it/w^2)^{-d/2} exp(-|x|^2 / (w^2 + 4it)).
std::complex<double> free_gaussian(double r2, double t, double amplitude, double width, int d);
Field free_gaussian_field(const GridPtr& grid, double t, double amplitude, double width);

/// Integral of e^{-a |x|^2} over R^d.
double gaussian_integral(double a, int d);

/// |A e^{-|x|^2/w^2}|^2 in Hdot^s for d = 3, by adaptive quadrature of
/// (2 pi)^{-3} 4 pi k^{2s+2} |fhat(k)|^2 over k in [0, inf).
double gaussian_hs_dot_sq_3d(double amplitude, double width, double s);

/// |P_{<=N} e^{-x^2}|_2^2 in d = 1 with the smooth bump, by quadrature of
/// (2 pi)^{-1} phi(|k|/N)^2 pi e^{-k^2/2}.
double gaussian_low_projection_sq_1d(double N);

/// Interaction Morawetz value by the O(N^2) double sum over sample pairs, with
/// currents built from caller-supplied gradients.
double morawetz_direct(const SystemParams& p, const FieldPair& s, const std::vector<Field>& grad_u,
                       const std::vector<Field>& grad_v);

/// Exact gradient of the Gaussian-times-plane-wave A e^{i k0 . x} e^{-|x|^2/w^2}.
std::vector<Field> plane_gaussian_gradient(const GridPtr& grid, double amplitude, double width,
                                           std::array<double, 3> k0);

}  // namespace wnls::oracle
