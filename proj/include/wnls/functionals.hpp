// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "wnls/hooks.hpp"
#include "wnls/model.hpp"

namespace wnls {

struct ConservedSet {
  double mass_u = 0.0;
  double mass_v = 0.0;
  /// c1 mass_u + c2 mass_v
  double M_w = 0.0;
  /// Im int [c1 u grad(conj u) + c2 v grad(conj v)], one entry per axis.
  std::vector<double> P_w;
  /// c1 |grad u|^2 + c2 |grad v|^2 + int |u|^(alpha+2) |v|^(beta+2)
  double E_w = 0.0;
  /// The gradient part of E_w.
  double kinetic = 0.0;
  /// int |u|^(alpha+2) |v|^(beta+2) (zero for the linear problem).
  double potential = 0.0;
};

ConservedSet conserved_set(const SystemParams& p, const FieldPair& s);

struct VirialSample {
  double t = 0.0;
  /// int |x|^2 (c1 |u|^2 + c2 |v|^2)
  double Y = 0.0;
  /// 4 Im int [c1 conj(u) x.grad u + c2 conj(v) x.grad v]
  double Yp = 0.0;
  /// General-dimension second derivative: 8 kinetic + 2d(alpha+beta+2) int G.
  double Ypp_formula = 0.0;
  /// Closed form 2[3(alpha+beta)+2] sgn(lambda) int G + 8 E_w, reported for
  /// d = 3 and for d = 4 with alpha = beta = 0.
  std::optional<double> Ypp_specialized;
  /// Ypp_specialized - Ypp_formula (0 when not reported).
  double specialization_discrepancy = 0.0;
  double boundary_fraction = 0.0;
  bool truncation_unreliable = false;
};

VirialSample virial_sample(const SystemParams& p, const FieldPair& s, double boundary_tol = 1e-10);

struct PseudoconformalSample {
  double t = 0.0;
  /// int [c1 |(x+2it grad)u|^2 + c2 |(x+2it grad)v|^2] + 4t^2 int G
  double P = 0.0;
  /// int |u|^(alpha+2) |v|^(beta+2)
  double rhs_integrand = 0.0;
  /// dP/dt = -rate_coefficient * t * rhs_integrand, rate_coefficient = 2d(alpha+beta+2) - 8.
  double rate_coefficient = 0.0;
  double boundary_fraction = 0.0;
  bool truncation_unreliable = false;
};

PseudoconformalSample pseudoconformal_sample(const SystemParams& p, const FieldPair& s, double boundary_tol = 1e-10);

struct MorawetzConstants {
  double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
};

/// A = mu^2 (alpha+2)^2, B = lambda^2 (beta+2)^2, C = D = lambda mu (alpha+2)(beta+2).
MorawetzConstants morawetz_constants(const SystemParams& p);

struct MorawetzSample {
  double t = 0.0;
  /// Interaction potential with a(x,y) = |x-y|.
  double M2 = 0.0;
  /// 16 pi int [A|u|^4 + (C+D)|u|^2|v|^2 + B|v|^4]
  double lower_bound_rate = 0.0;
};

/// d = 3 only (UnsupportedDimension otherwise). With j_w = Im(conj(w) grad w),
/// rho_w = |w|^2 and K(z) = z/|z| (K(0) = 0):
///   M2 = 4A J(u,u) + 4B J(v,v) + 2(C+D)(J(u,v) + J(v,u)),
///   J(m,n) = int j_m(x) . (K * rho_n)(x) dx,
/// with the convolution evaluated by FFT on a zero-padded 2n^3 grid.
MorawetzSample morawetz_sample(const SystemParams& p, const FieldPair& s);

/// Spacetime L^4 accumulator: value += dt * int (|u|^4 + |v|^4).
struct L4Accumulator {
  double value = 0.0;
  void add(const FieldPair& s, double dt);
};

/// Fraction of total mass in the outer eighth of the box.
double boundary_fraction(const FieldPair& s);

/// Focusing weights (alpha+2)/(2|lambda|), (beta+2)/(2|mu|).
WeightPair focusing_weights(const SystemParams& p);
/// int [c1 |grad u|^2 + c2 |grad v|^2 - |u|^(alpha+2)|v|^(beta+2)] with focusing weights.
double focusing_energy(const SystemParams& p, const FieldPair& s);
/// V = int |x|^2 (c1|u|^2 + c2|v|^2) and V' with focusing weights.
std::pair<double, double> focusing_variance(const SystemParams& p, const FieldPair& s);

struct FunctionalSelection {
  bool conserved = true;
  bool virial = false;
  bool pseudoconformal = false;
  bool morawetz = false;
  bool l4 = false;
  bool sc_norm = false;
  bool focusing = false;
};

/// Hook that writes the selected functionals into each sample row. Columns:
/// mass_u, mass_v, M_w, P_w_<axis>, E_w, int_G | Y, Yp, Ypp, Ypp_specialized |
/// P_pc, pc_rhs | M2, morawetz_rate | l4_accum | sc_norm | E_tilde, V, Vp.
DiagnosticHook functional_hook(const SystemParams& p, FunctionalSelection sel);

}  // namespace wnls
