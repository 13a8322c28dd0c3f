// SPDX-License-Identifier: Apache-2.0
#include "wnls/spectral.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "wnls/error.hpp"
#include "wnls/kernels.hpp"
#include "wnls/parallel.hpp"

namespace wnls {
namespace {

const simd::KernelTable& K() { return simd::active_kernels(); }

double sum_abs2(const ComplexBuffer& a) {
  return parallel::chunked_sum(a.size(), [&](std::size_t b, std::size_t e) { return K().sum_abs2(a.data() + b, e - b); });
}

double weighted_abs2(const ComplexBuffer& a, const RealBuffer& w) {
  return parallel::chunked_sum(a.size(), [&](std::size_t b, std::size_t e) {
    return K().weighted_abs2(a.data() + b, w.data() + b, e - b);
  });
}

// (-1)^{sum of mode indices}: the phase from placing x_0 at -L.
double corner_sign(const SpectralGrid& g, std::size_t flat) {
  const auto idx = g.unflatten(flat);
  long total = 0;
  for (int a = 0; a < g.dim(); ++a) total += g.mode_index(idx[a]);
  return (total % 2 == 0) ? 1.0 : -1.0;
}

Field multiply_spectrum(const Field& f, const std::function<cplx(std::size_t)>& multiplier) {
  require_finite(f, "spectral multiplier");
  Field out(f.grid);
  out.data = raw_spectrum(f);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] *= multiplier(i);
  f.grid->fft().inverse(out.data.data());
  return out;
}

}  // namespace

void require_finite(const Field& f, const char* context) {
  if (f.diverged || !f.all_finite()) throw DivergedField(std::string(context) + ": field has non-finite samples");
}

ComplexBuffer raw_spectrum(const Field& f) {
  ComplexBuffer out(f.data);
  f.grid->fft().forward(out.data());
  return out;
}

Spectrum transform_forward(const Field& f) {
  require_finite(f, "transform_forward");
  const SpectralGrid& g = *f.grid;
  Spectrum s{f.grid, raw_spectrum(f)};
  const double vol = g.cell_volume();
  for (std::size_t i = 0; i < s.data.size(); ++i) s.data[i] *= vol * corner_sign(g, i);
  return s;
}

Field transform_inverse(const Spectrum& s) {
  const SpectralGrid& g = *s.grid;
  Field f(s.grid);
  const double vol = g.cell_volume();
  for (std::size_t i = 0; i < s.data.size(); ++i) f.data[i] = s.data[i] * (corner_sign(g, i) / vol);
  g.fft().inverse(f.data.data());
  return f;
}

void apply_free_propagator_inplace(Field& f, double dt) {
  require_finite(f, "apply_free_propagator");
  if (!std::isfinite(dt)) throw InvalidArgument("time step must be finite");
  if (dt == 0.0) return;
  const SpectralGrid& g = *f.grid;
  g.fft().forward(f.data.data());
  const RealBuffer& k2 = g.k_squared();
  const double inv = 1.0 / static_cast<double>(g.size());
  parallel::for_chunks(f.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double phase = k2[i] * dt;
      f.data[i] *= cplx(std::cos(phase) * inv, -std::sin(phase) * inv);
    }
  });
  g.fft().backward_raw(f.data.data());
}

Field apply_free_propagator(const Field& f, double dt) {
  Field out = f;
  apply_free_propagator_inplace(out, dt);
  return out;
}

Field partial(const Field& f, int axis) {
  if (axis < 0 || axis >= f.grid->dim()) throw InvalidArgument("axis out of range");
  const RealBuffer& k = f.grid->derivative_symbol(axis);
  return multiply_spectrum(f, [&](std::size_t i) { return cplx(0.0, k[i]); });
}

std::vector<Field> gradient(const Field& f) {
  require_finite(f, "gradient");
  const SpectralGrid& g = *f.grid;
  const ComplexBuffer spec = raw_spectrum(f);
  std::vector<Field> out;
  for (int a = 0; a < g.dim(); ++a) {
    Field c(f.grid);
    const RealBuffer& k = g.derivative_symbol(a);
    for (std::size_t i = 0; i < spec.size(); ++i) c.data[i] = spec[i] * cplx(0.0, k[i]);
    g.fft().inverse(c.data.data());
    out.push_back(std::move(c));
  }
  return out;
}

Field laplacian(const Field& f) {
  const RealBuffer& k2 = f.grid->k_squared();
  return multiply_spectrum(f, [&](std::size_t i) { return cplx(-k2[i], 0.0); });
}

double lp_bump(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double s = r - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

Field lp_project(const Field& f, double N, LpSide side, LpShape shape) {
  if (!(N > 0.0) || !std::isfinite(N)) throw InvalidFrequency("Littlewood-Paley frequency must be positive");
  const RealBuffer& k2 = f.grid->k_squared();
  auto phi = [shape](double r) { return shape == LpShape::Smooth ? lp_bump(r) : (r <= 1.0 ? 1.0 : 0.0); };
  return multiply_spectrum(f, [&](std::size_t i) {
    const double r = std::sqrt(k2[i]) / N;
    switch (side) {
      case LpSide::Low:
        return cplx(phi(r), 0.0);
      case LpSide::High:
        return cplx(1.0 - phi(r), 0.0);
      case LpSide::Band:
        return cplx(phi(r) - phi(2.0 * r), 0.0);
    }
    return cplx(0.0, 0.0);
  });
}

double mass(const Field& f) { return f.grid->cell_volume() * sum_abs2(f.data); }

double gradient_energy(const Field& f) {
  const ComplexBuffer spec = raw_spectrum(f);
  return f.grid->cell_volume() / static_cast<double>(f.size()) * weighted_abs2(spec, f.grid->k_squared());
}

double variance(const Field& f) { return f.grid->cell_volume() * weighted_abs2(f.data, f.grid->x_squared()); }

double quartic(const Field& f) {
  return f.grid->cell_volume() * parallel::chunked_sum(f.size(), [&](std::size_t b, std::size_t e) {
           return K().sum_abs4(f.data.data() + b, e - b);
         });
}

double norm(const Field& f, Norm kind) {
  const SpectralGrid& g = *f.grid;
  switch (kind.kind) {
    case Norm::Kind::L2:
      return std::sqrt(mass(f));
    case Norm::Kind::L4:
      return std::pow(quartic(f), 0.25);
    case Norm::Kind::Lp: {
      const double p = kind.param;
      if (!(p >= 1.0)) throw InvalidArgument("Lp norm needs p >= 1");
      if (p == 2.0) return std::sqrt(mass(f));
      const double s = parallel::chunked_sum(f.size(), [&](std::size_t b, std::size_t e) {
        double acc = 0.0;
        for (std::size_t i = b; i < e; ++i) acc += std::pow(std::abs(f.data[i]), p);
        return acc;
      });
      return std::pow(g.cell_volume() * s, 1.0 / p);
    }
    case Norm::Kind::H1:
      return std::sqrt(mass(f) + gradient_energy(f));
    case Norm::Kind::H1dot:
      return std::sqrt(gradient_energy(f));
    case Norm::Kind::HsDot: {
      const double s = kind.param;
      if (!(s >= 0.0)) throw InvalidArgument("homogeneous Sobolev order must be >= 0");
      if (s == 0.0) return std::sqrt(mass(f));
      RealBuffer w(g.size());
      const RealBuffer& k2 = g.k_squared();
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(k2[i], s);
      const ComplexBuffer spec = raw_spectrum(f);
      return std::sqrt(g.cell_volume() / static_cast<double>(g.size()) * weighted_abs2(spec, w));
    }
    case Norm::Kind::Sigma:
      return std::sqrt(mass(f) + gradient_energy(f)) + std::sqrt(variance(f));
  }
  return 0.0;
}

}  // namespace wnls
