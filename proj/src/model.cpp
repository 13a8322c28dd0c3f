// SPDX-License-Identifier: Apache-2.0
#include "wnls/model.hpp"

#include <cmath>
#include <map>
#include <set>

#include "wnls/error.hpp"
#include "wnls/spectral.hpp"

namespace wnls {
namespace {

// w^e evaluated as w^k * sqrt(w)^h for e = k + h/2 when 2e is a small integer.
struct Power {
  int whole = 0;
  bool half = false;
  bool general = false;
  double e = 0.0;

  explicit Power(double exponent) : e(exponent) {
    const double twice = 2.0 * exponent;
    if (twice == std::floor(twice) && twice <= 32.0) {
      const int t = static_cast<int>(twice);
      whole = t / 2;
      half = (t % 2) != 0;
    } else {
      general = true;
    }
  }

  double operator()(double w) const {
    if (general) return w == 0.0 ? (e == 0.0 ? 1.0 : 0.0) : std::pow(w, e);
    double r = half ? std::sqrt(w) : 1.0;
    double b = w;
    for (int k = whole; k > 0; k >>= 1) {
      if (k & 1) r *= b;
      b *= b;
    }
    return r;
  }
};

RegimeLabel side_of_one(const Rational& s_c) {
  if (s_c < Rational(1)) return RegimeLabel::Subcritical;
  if (s_c == Rational(1)) return RegimeLabel::CriticalLine;
  return RegimeLabel::Supercritical;
}

}  // namespace

double pow_modulus(double w, double e) { return Power(e)(w); }

void SystemParams::validate() const {
  if (d < 1) throw UnsupportedDimension("dimension must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be finite and >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be finite and >= 0");
  if (!std::isfinite(lambda) || !std::isfinite(mu)) throw InvalidCoupling("couplings must be finite");
  if ((lambda == 0.0) != (mu == 0.0)) throw InvalidCoupling("lambda and mu must both be nonzero (or both zero for the linear problem)");
  if (!allow_sign_mismatch && lambda * mu < 0.0) throw InvalidCoupling("lambda and mu must have the same sign");
}

WeightPair derive_weights(const SystemParams& p) {
  if ((p.lambda == 0.0) != (p.mu == 0.0)) throw InvalidCoupling("a single zero coupling has no weighted-gradient structure");
  WeightPair w;
  w.p = (p.alpha + 2.0) / 2.0;
  w.q = (p.beta + 2.0) / 2.0;
  if (p.linear()) {
    w.c1 = 1.0;
    w.c2 = 1.0;
    w.g_coeff = 0.0;
    return w;
  }
  w.c1 = (p.alpha + 2.0) / (2.0 * p.lambda);
  w.c2 = (p.beta + 2.0) / (2.0 * p.mu);
  w.g_coeff = 1.0;
  return w;
}

std::string_view to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::Subcritical: return "Subcritical";
    case RegimeLabel::CriticalLine: return "CriticalLine";
    case RegimeLabel::CriticalLineEndpoint: return "CriticalLineEndpoint";
    case RegimeLabel::CriticalPoint: return "CriticalPoint";
    case RegimeLabel::Supercritical: return "Supercritical";
    case RegimeLabel::OutsidePaperScope: return "OutsidePaperScope";
  }
  return "?";
}

Regime classify_regime(const SystemParams& p) {
  const Rational a = Rational::from_double(p.alpha);
  const Rational b = Rational::from_double(p.beta);
  const Rational sum = a + b;
  Regime r;
  r.s_c_exact = Rational(p.d, 2) - Rational(2) / (sum + Rational(2));
  r.s_c = r.s_c_exact.to_double();
  r.energy_side = side_of_one(r.s_c_exact);
  const bool defocusing = p.lambda > 0.0 && p.mu > 0.0;

  if (p.d == 3) {
    if (sum < Rational(2)) {
      r.label = RegimeLabel::Subcritical;
    } else if (sum == Rational(2)) {
      r.label = (a.is_zero() || b.is_zero()) ? RegimeLabel::CriticalLineEndpoint : RegimeLabel::CriticalLine;
    } else {
      r.label = RegimeLabel::Supercritical;
      if (a != b) r.note = "global non-existence is only constructed for alpha = beta above the critical line";
    }
    r.covered_by_theory = defocusing;
  } else if (p.d == 4) {
    r.label = sum.is_zero() ? RegimeLabel::CriticalPoint : RegimeLabel::Supercritical;
    r.covered_by_theory = defocusing;
  } else {
    r.label = RegimeLabel::OutsidePaperScope;
    r.covered_by_theory = false;
    r.note = "classification for this dimension is by s_c only";
  }
  if (!defocusing && r.note.empty()) r.note = "boundedness statements assume lambda, mu > 0";
  return r;
}

MonomialPair monomial_pair(const SystemParams& p) {
  MonomialPair m;
  m.a1 = Rational::from_double(p.alpha);
  m.b1 = Rational::from_double(p.beta) + Rational(2);
  m.a2 = Rational::from_double(p.alpha) + Rational(2);
  m.b2 = Rational::from_double(p.beta);
  m.kappa_u = Rational::from_double(p.lambda);
  m.kappa_v = Rational::from_double(p.mu);
  return m;
}

GradientCheck check_weighted_gradient(const MonomialSystem& m) {
  const std::size_t count = m.kappa.size();
  if (count == 0 || m.exponents.size() != count) throw InvalidArgument("monomial system shape mismatch");
  for (const auto& row : m.exponents) {
    if (row.size() != count) throw InvalidArgument("monomial system shape mismatch");
    for (const Rational& e : row)
      if (e.sign() < 0) throw InvalidArgument("monomial exponents must be >= 0");
  }
  GradientCheck out;
  for (std::size_t j = 0; j < count; ++j) {
    if (m.kappa[j].is_zero()) {
      out.reason = "component " + std::to_string(j + 1) + " has a zero coefficient";
      return out;
    }
  }

  // f_j = kappa_j prod_k w_k^{e_jk/2}. A monomial M = w^P satisfies
  // dM/dw_j proportional to f_j iff P = e_j/2 + unit_j, so each component
  // pins the one monomial of G it can come from. Every variable present in
  // that monomial must be pinned to the same monomial, otherwise dG/dw_k
  // produces a term no weight can match.
  std::vector<std::vector<Rational>> pinned(count);
  for (std::size_t j = 0; j < count; ++j) {
    pinned[j].resize(count);
    for (std::size_t k = 0; k < count; ++k) pinned[j][k] = m.exponents[j][k] / Rational(2) + Rational(j == k ? 1 : 0);
  }
  std::map<std::vector<Rational>, std::set<std::size_t>> groups;
  for (std::size_t j = 0; j < count; ++j) groups[pinned[j]].insert(j);

  for (const auto& [powers, members] : groups) {
    std::set<std::size_t> support;
    for (std::size_t k = 0; k < count; ++k)
      if (powers[k].sign() > 0) support.insert(k);
    if (support != members) {
      for (std::size_t k : support) {
        if (!members.count(k)) {
          out.reason = "dG/dw_" + std::to_string(k + 1) + " would contain a term absent from f_" + std::to_string(k + 1);
          return out;
        }
      }
    }
  }

  out.yes = true;
  out.reason = "exponents match";
  out.weights.resize(count);
  for (const auto& [powers, members] : groups) {
    out.potential.push_back(Monomial{Rational(1), powers});
    for (std::size_t j : members) out.weights[j] = powers[j] / m.kappa[j];
  }
  return out;
}

GradientCheck check_weighted_gradient(const MonomialPair& m) {
  MonomialSystem s;
  s.kappa = {m.kappa_u, m.kappa_v};
  s.exponents = {{m.a1, m.b1}, {m.a2, m.b2}};
  return check_weighted_gradient(s);
}

void phase_rates(const SystemParams& p, const double* w, const double* z, double* rate_u, double* rate_v,
                 std::size_t n) {
  const Power wa(p.alpha / 2.0), zb1(p.beta / 2.0 + 1.0), wa1(p.alpha / 2.0 + 1.0), zb(p.beta / 2.0);
  for (std::size_t i = 0; i < n; ++i) {
    rate_u[i] = p.lambda * wa(w[i]) * zb1(z[i]);
    rate_v[i] = p.mu * wa1(w[i]) * zb(z[i]);
  }
}

void density_kernel(const SystemParams& p, const double* w, const double* z, double* out, std::size_t n) {
  const Power wa1(p.alpha / 2.0 + 1.0), zb1(p.beta / 2.0 + 1.0);
  for (std::size_t i = 0; i < n; ++i) out[i] = wa1(w[i]) * zb1(z[i]);
}

FieldPair nonlinearity(const SystemParams& p, const FieldPair& state) {
  require_finite(state.u, "nonlinearity");
  require_finite(state.v, "nonlinearity");
  const std::size_t n = state.u.size();
  RealBuffer w(n), z(n), ru(n), rv(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::norm(state.u.data[i]);
    z[i] = std::norm(state.v.data[i]);
  }
  phase_rates(p, w.data(), z.data(), ru.data(), rv.data(), n);
  FieldPair out(state.u.grid, state.t);
  for (std::size_t i = 0; i < n; ++i) {
    out.u.data[i] = ru[i] * state.u.data[i];
    out.v.data[i] = rv[i] * state.v.data[i];
  }
  return out;
}

Field potential_density(const SystemParams& p, const FieldPair& state) {
  const std::size_t n = state.u.size();
  RealBuffer w(n), z(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::norm(state.u.data[i]);
    z[i] = std::norm(state.v.data[i]);
  }
  density_kernel(p, w.data(), z.data(), g.data(), n);
  Field out(state.u.grid);
  for (std::size_t i = 0; i < n; ++i) out.data[i] = cplx(g[i], 0.0);
  return out;
}

double potential_integral(const SystemParams& p, const FieldPair& state) {
  const Field g = potential_density(p, state);
  double s = 0.0;
  for (const cplx& c : g.data) s += c.real();
  return s * state.grid().cell_volume();
}

}  // namespace wnls
