// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wnls/grid.hpp"
#include "wnls/rational.hpp"

namespace wnls {

/// iu_t + Lap u = lambda |u|^alpha |v|^(beta+2) u
/// iv_t + Lap v = mu |u|^(alpha+2) |v|^beta v
///
/// lambda = mu = 0 is accepted as the free (linear) control problem.
struct SystemParams {
  int d = 3;
  double alpha = 0.0;
  double beta = 0.0;
  double lambda = 1.0;
  double mu = 1.0;
  /// Permit couplings of opposite sign.
  bool allow_sign_mismatch = false;

  bool linear() const noexcept { return lambda == 0.0 && mu == 0.0; }
  bool defocusing() const noexcept { return lambda > 0.0 && mu > 0.0; }
  bool focusing() const noexcept { return lambda < 0.0 && mu < 0.0; }

  /// Throws InvalidArgument / InvalidCoupling on violated invariants.
  void validate() const;
};

/// Energy weights and potential G(w, z) = g_coeff * w^p z^q with w = |u|^2, z = |v|^2.
struct WeightPair {
  double c1 = 1.0;
  double c2 = 1.0;
  double p = 1.0;
  double q = 1.0;
  /// 1 for the coupled system, 0 for the linear control.
  double g_coeff = 1.0;
};

/// c1 = (alpha+2)/(2 lambda), c2 = (beta+2)/(2 mu). Throws InvalidCoupling when
/// exactly one coupling is zero; lambda = mu = 0 gives unit weights and G = 0.
WeightPair derive_weights(const SystemParams& p);

enum class RegimeLabel { Subcritical, CriticalLine, CriticalLineEndpoint, CriticalPoint, Supercritical, OutsidePaperScope };

std::string_view to_string(RegimeLabel label);

struct Regime {
  RegimeLabel label = RegimeLabel::OutsidePaperScope;
  double s_c = 0.0;
  Rational s_c_exact;
  /// Position of s_c relative to the energy level 1, independent of d:
  /// Subcritical, CriticalLine (s_c = 1) or Supercritical.
  RegimeLabel energy_side = RegimeLabel::Subcritical;
  /// False when d is not 3 or 4, or the couplings are not both positive.
  bool covered_by_theory = false;
  std::string note;
};

/// s_c = d/2 - 2/(alpha+beta+2), computed exactly. Exponents are converted to
/// rationals by best approximation with denominator <= 10^6.
Regime classify_regime(const SystemParams& p);

/// iu_t + Lap u = kappa_u |u|^a1 |v|^b1 u, iv_t + Lap v = kappa_v |u|^a2 |v|^b2 v.
struct MonomialPair {
  Rational a1, b1, a2, b2;
  Rational kappa_u{1};
  Rational kappa_v{1};
};

/// One term coeff * prod_j w_j^{powers[j]} of a potential.
struct Monomial {
  Rational coeff{1};
  std::vector<Rational> powers;
};

/// m-component monomial system: component j has nonlinearity
/// kappa[j] * prod_k |u_k|^{exponents[j][k]} u_j.
struct MonomialSystem {
  std::vector<Rational> kappa;
  std::vector<std::vector<Rational>> exponents;
};

struct GradientCheck {
  bool yes = false;
  std::string reason;
  /// Weights a_j with dG/dw_j = a_j f_j.
  std::vector<Rational> weights;
  std::vector<Monomial> potential;

  /// Two-component accessors.
  Rational a() const { return weights.at(0); }
  Rational b() const { return weights.at(1); }
};

/// Decides in exact arithmetic whether a monomial system admits nonzero weights
/// and a polynomial potential G with dG/dw_j = a_j f_j for all j.
GradientCheck check_weighted_gradient(const MonomialSystem& m);
GradientCheck check_weighted_gradient(const MonomialPair& m);

/// The monomial pair of the coupled system (exponents and couplings as rationals).
MonomialPair monomial_pair(const SystemParams& p);

/// (lambda |u|^alpha |v|^(beta+2) u, mu |u|^(alpha+2) |v|^beta v) pointwise.
FieldPair nonlinearity(const SystemParams& p, const FieldPair& state);

/// |u|^(alpha+2) |v|^(beta+2) pointwise (imaginary part zero).
Field potential_density(const SystemParams& p, const FieldPair& state);

/// Integral of |u|^(alpha+2) |v|^(beta+2).
double potential_integral(const SystemParams& p, const FieldPair& state);

/// Pointwise kernels on squared moduli w = |u|^2, z = |v|^2.
/// Phase rates: lambda w^(alpha/2) z^(beta/2+1) and mu w^(alpha/2+1) z^(beta/2).
void phase_rates(const SystemParams& p, const double* w, const double* z, double* rate_u, double* rate_v,
                 std::size_t n);
/// w^(alpha/2+1) z^(beta/2+1)
void density_kernel(const SystemParams& p, const double* w, const double* z, double* out, std::size_t n);

/// w^e with 0^0 = 1 and integer/half-integer fast paths.
double pow_modulus(double w, double e);

}  // namespace wnls
