// SPDX-License-Identifier: Apache-2.0
#include "wnls/functionals.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "wnls/error.hpp"
#include "wnls/kernels.hpp"
#include "wnls/parallel.hpp"
#include "wnls/spectral.hpp"

namespace wnls {
namespace {

const simd::KernelTable& K() { return simd::active_kernels(); }

double im_conj_dot(const ComplexBuffer& a, const ComplexBuffer& b) {
  return parallel::chunked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    return K().im_conj_dot(a.data() + lo, b.data() + lo, hi - lo);
  });
}

// x . grad f
Field radial_derivative(const Field& f) {
  const std::vector<Field> g = gradient(f);
  Field out(f.grid);
  for (int a = 0; a < f.grid->dim(); ++a) {
    const RealBuffer& x = f.grid->x_axis(a);
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] += x[i] * g[a].data[i];
  }
  return out;
}

// |(x + 2it grad) f|^2 integrated
double pseudoconformal_norm(const Field& f, double t) {
  const std::vector<Field> g = gradient(f);
  const SpectralGrid& grid = *f.grid;
  double total = 0.0;
  Field w(f.grid);
  for (int a = 0; a < grid.dim(); ++a) {
    const RealBuffer& x = grid.x_axis(a);
    for (std::size_t i = 0; i < w.size(); ++i) w.data[i] = x[i] * f.data[i] + cplx(0.0, 2.0 * t) * g[a].data[i];
    total += mass(w);
  }
  return total;
}

double variance_pair(const WeightPair& w, const FieldPair& s) {
  return w.c1 * variance(s.u) + w.c2 * variance(s.v);
}

double variance_rate(const WeightPair& w, const FieldPair& s) {
  const double dv = s.grid().cell_volume();
  const Field ru = radial_derivative(s.u);
  const Field rv = radial_derivative(s.v);
  return 4.0 * dv * (w.c1 * im_conj_dot(s.u.data, ru.data) + w.c2 * im_conj_dot(s.v.data, rv.data));
}

}  // namespace

ConservedSet conserved_set(const SystemParams& p, const FieldPair& s) {
  const WeightPair w = derive_weights(p);
  const SpectralGrid& g = s.grid();
  const double dv = g.cell_volume();
  ConservedSet c;
  c.mass_u = mass(s.u);
  c.mass_v = mass(s.v);
  c.M_w = w.c1 * c.mass_u + w.c2 * c.mass_v;
  const std::vector<Field> gu = gradient(s.u);
  const std::vector<Field> gv = gradient(s.v);
  c.P_w.resize(static_cast<std::size_t>(g.dim()));
  for (int a = 0; a < g.dim(); ++a) {
    // Im(u conj(du)) = -Im(conj(u) du)
    c.P_w[a] = -dv * (w.c1 * im_conj_dot(s.u.data, gu[a].data) + w.c2 * im_conj_dot(s.v.data, gv[a].data));
  }
  c.kinetic = w.c1 * gradient_energy(s.u) + w.c2 * gradient_energy(s.v);
  c.potential = w.g_coeff == 0.0 ? 0.0 : potential_integral(p, s);
  c.E_w = c.kinetic + c.potential;
  return c;
}

VirialSample virial_sample(const SystemParams& p, const FieldPair& s, double boundary_tol) {
  const WeightPair w = derive_weights(p);
  VirialSample v;
  v.t = s.t;
  v.Y = variance_pair(w, s);
  v.Yp = variance_rate(w, s);
  const double kinetic = w.c1 * gradient_energy(s.u) + w.c2 * gradient_energy(s.v);
  const double G = w.g_coeff == 0.0 ? 0.0 : potential_integral(p, s);
  v.Ypp_formula = 8.0 * kinetic + 2.0 * p.d * (p.alpha + p.beta + 2.0) * G;
  const bool d3 = p.d == 3;
  const bool d4_point = p.d == 4 && p.alpha == 0.0 && p.beta == 0.0;
  if ((d3 || d4_point) && !p.linear()) {
    const double sgn = p.lambda > 0.0 ? 1.0 : -1.0;
    const double E_w = kinetic + G;
    v.Ypp_specialized = 2.0 * (3.0 * (p.alpha + p.beta) + 2.0) * sgn * G + 8.0 * E_w;
    v.specialization_discrepancy = *v.Ypp_specialized - v.Ypp_formula;
  }
  v.boundary_fraction = boundary_fraction(s);
  v.truncation_unreliable = v.boundary_fraction > boundary_tol;
  return v;
}

PseudoconformalSample pseudoconformal_sample(const SystemParams& p, const FieldPair& s, double boundary_tol) {
  const WeightPair w = derive_weights(p);
  PseudoconformalSample out;
  out.t = s.t;
  out.rhs_integrand = w.g_coeff == 0.0 ? 0.0 : potential_integral(p, s);
  out.P = w.c1 * pseudoconformal_norm(s.u, s.t) + w.c2 * pseudoconformal_norm(s.v, s.t) +
          4.0 * s.t * s.t * w.g_coeff * out.rhs_integrand;
  out.rate_coefficient = 2.0 * p.d * (p.alpha + p.beta + 2.0) - 8.0;
  out.boundary_fraction = boundary_fraction(s);
  out.truncation_unreliable = out.boundary_fraction > boundary_tol;
  return out;
}

MorawetzConstants morawetz_constants(const SystemParams& p) {
  MorawetzConstants c;
  c.A = p.mu * p.mu * (p.alpha + 2.0) * (p.alpha + 2.0);
  c.B = p.lambda * p.lambda * (p.beta + 2.0) * (p.beta + 2.0);
  c.C = p.lambda * p.mu * (p.alpha + 2.0) * (p.beta + 2.0);
  c.D = c.C;
  return c;
}

namespace {

// FFT of the three components of z/|z| sampled on the zero-padded grid.
struct PaddedKernel {
  std::size_t n2 = 0;
  std::vector<ComplexBuffer> spectra;
};

const PaddedKernel& padded_kernel(const SpectralGrid& g) {
  static std::mutex m;
  static std::map<std::pair<std::size_t, double>, std::unique_ptr<PaddedKernel>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[{g.n(), g.dx()}];
  if (slot) return *slot;
  auto k = std::make_unique<PaddedKernel>();
  const std::size_t n2 = 2 * g.n();
  k->n2 = n2;
  const FftPlan& plan = fft_plan(3, n2);
  const auto disp = [&](std::size_t j) {
    return static_cast<double>(j < g.n() ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n2)) * g.dx();
  };
  k->spectra.assign(3, ComplexBuffer(plan.size(), cplx(0.0, 0.0)));
  for (std::size_t i0 = 0; i0 < n2; ++i0) {
    for (std::size_t i1 = 0; i1 < n2; ++i1) {
      for (std::size_t i2 = 0; i2 < n2; ++i2) {
        const double z[3] = {disp(i0), disp(i1), disp(i2)};
        const double r = std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
        if (r == 0.0) continue;
        const std::size_t flat = (i0 * n2 + i1) * n2 + i2;
        for (int a = 0; a < 3; ++a) k->spectra[a][flat] = cplx(z[a] / r, 0.0);
      }
    }
  }
  for (auto& s : k->spectra) plan.forward(s.data());
  slot = std::move(k);
  return *slot;
}

}  // namespace

MorawetzSample morawetz_sample(const SystemParams& p, const FieldPair& s) {
  if (p.d != 3 || s.grid().dim() != 3) throw UnsupportedDimension("the interaction Morawetz potential is evaluated for d = 3 only");
  const SpectralGrid& g = s.grid();
  const std::size_t n = g.n();
  const double dv = g.cell_volume();
  const MorawetzConstants c = morawetz_constants(p);
  MorawetzSample out;
  out.t = s.t;

  const double quartic_u = quartic(s.u), quartic_v = quartic(s.v);
  double cross = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) cross += std::norm(s.u.data[i]) * std::norm(s.v.data[i]);
  cross *= dv;
  out.lower_bound_rate = 16.0 * std::numbers::pi * (c.A * quartic_u + (c.C + c.D) * cross + c.B * quartic_v);

  const PaddedKernel& kernel = padded_kernel(g);
  const std::size_t n2 = kernel.n2;
  const FftPlan& plan = fft_plan(3, n2);

  // rho_u + i rho_v packed into one transform; K is real, so the real and
  // imaginary parts of the convolution separate.
  ComplexBuffer rho(plan.size(), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    const auto idx = g.unflatten(i);
    rho[(idx[0] * n2 + idx[1]) * n2 + idx[2]] = cplx(std::norm(s.u.data[i]), std::norm(s.v.data[i]));
  }
  plan.forward(rho.data());

  const std::vector<Field> gu = gradient(s.u);
  const std::vector<Field> gv = gradient(s.v);
  double J_uu = 0.0, J_uv = 0.0, J_vu = 0.0, J_vv = 0.0;
  ComplexBuffer conv(plan.size());
  for (int a = 0; a < 3; ++a) {
    for (std::size_t i = 0; i < conv.size(); ++i) conv[i] = rho[i] * kernel.spectra[a][i];
    plan.inverse(conv.data());
    double uu = 0.0, uv = 0.0, vu = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
      const auto idx = g.unflatten(i);
      const cplx k = conv[(idx[0] * n2 + idx[1]) * n2 + idx[2]];
      const double ju = std::imag(std::conj(s.u.data[i]) * gu[a].data[i]);
      const double jv = std::imag(std::conj(s.v.data[i]) * gv[a].data[i]);
      uu += ju * k.real();
      uv += ju * k.imag();
      vu += jv * k.real();
      vv += jv * k.imag();
    }
    J_uu += uu;
    J_uv += uv;
    J_vu += vu;
    J_vv += vv;
  }
  const double scale = dv * dv;
  out.M2 = scale * (4.0 * c.A * J_uu + 4.0 * c.B * J_vv + 2.0 * (c.C + c.D) * (J_uv + J_vu));
  (void)n;
  return out;
}

void L4Accumulator::add(const FieldPair& s, double dt) { value += dt * (quartic(s.u) + quartic(s.v)); }

double boundary_fraction(const FieldPair& s) {
  const SpectralGrid& g = s.grid();
  const double total = mass(s.u) + mass(s.v);
  if (total == 0.0) return 0.0;
  auto edge = [&](const Field& f) {
    return parallel::chunked_sum(f.size(), [&](std::size_t lo, std::size_t hi) {
      return K().weighted_abs2(f.data.data() + lo, g.boundary_mask().data() + lo, hi - lo);
    });
  };
  return g.cell_volume() * (edge(s.u) + edge(s.v)) / total;
}

WeightPair focusing_weights(const SystemParams& p) {
  if (p.lambda == 0.0 || p.mu == 0.0) throw InvalidCoupling("focusing weights need nonzero couplings");
  WeightPair w;
  w.c1 = (p.alpha + 2.0) / (2.0 * std::abs(p.lambda));
  w.c2 = (p.beta + 2.0) / (2.0 * std::abs(p.mu));
  w.p = (p.alpha + 2.0) / 2.0;
  w.q = (p.beta + 2.0) / 2.0;
  return w;
}

double focusing_energy(const SystemParams& p, const FieldPair& s) {
  const WeightPair w = focusing_weights(p);
  return w.c1 * gradient_energy(s.u) + w.c2 * gradient_energy(s.v) - potential_integral(p, s);
}

std::pair<double, double> focusing_variance(const SystemParams& p, const FieldPair& s) {
  const WeightPair w = focusing_weights(p);
  return {variance_pair(w, s), variance_rate(w, s)};
}

DiagnosticHook functional_hook(const SystemParams& p, FunctionalSelection sel) {
  struct L4State {
    L4Accumulator acc;
    double last_t = 0.0;
    bool started = false;
  };
  auto l4 = std::make_shared<L4State>();
  const double s_c = classify_regime(p).s_c;
  return [p, sel, l4, s_c](const FieldPair& s, const SampleInfo&, DiagnosticsTrace::Row& row) {
    if (sel.conserved) {
      const ConservedSet c = conserved_set(p, s);
      row.set("mass_u", c.mass_u);
      row.set("mass_v", c.mass_v);
      row.set("M_w", c.M_w);
      static const char* axes[] = {"P_w_x", "P_w_y", "P_w_z"};
      for (std::size_t a = 0; a < c.P_w.size(); ++a) row.set(axes[a], c.P_w[a]);
      row.set("E_w", c.E_w);
      row.set("int_G", c.potential);
    }
    if (sel.virial) {
      const VirialSample v = virial_sample(p, s);
      row.set("Y", v.Y);
      row.set("Yp", v.Yp);
      row.set("Ypp", v.Ypp_formula);
      if (v.Ypp_specialized) row.set("Ypp_specialized", *v.Ypp_specialized);
    }
    if (sel.pseudoconformal) {
      const PseudoconformalSample pc = pseudoconformal_sample(p, s);
      row.set("P_pc", pc.P);
      row.set("pc_rhs", pc.rhs_integrand);
    }
    if (sel.morawetz && s.grid().dim() == 3) {
      const MorawetzSample m = morawetz_sample(p, s);
      row.set("M2", m.M2);
      row.set("morawetz_rate", m.lower_bound_rate);
    }
    if (sel.l4) {
      if (l4->started) l4->acc.add(s, s.t - l4->last_t);
      l4->started = true;
      l4->last_t = s.t;
      row.set("l4_accum", l4->acc.value);
    }
    if (sel.sc_norm && s_c >= 0.0) {
      row.set("sc_norm", norm(s.u, Norm::hs_dot(s_c)) + norm(s.v, Norm::hs_dot(s_c)));
    }
    if (sel.focusing && p.lambda != 0.0 && p.mu != 0.0) {
      row.set("E_tilde", focusing_energy(p, s));
      const auto [V, Vp] = focusing_variance(p, s);
      row.set("V", V);
      row.set("Vp", Vp);
      if (!sel.conserved) row.set("int_G", potential_integral(p, s));
    }
  };
}

}  // namespace wnls
