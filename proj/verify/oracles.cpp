// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "wnls/error.hpp"
#include "wnls/spectral.hpp"

namespace wnls::oracle {

std::vector<std::complex<double>> direct_fourier(const Field& f) {
  const SpectralGrid& g = *f.grid;
  const int d = g.dim();
  std::vector<std::complex<double>> out(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) {
    const auto km = g.unflatten(m);
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const auto xj = g.unflatten(j);
      double phase = 0.0;
      for (int a = 0; a < d; ++a) phase += g.wavenumbers()[km[a]] * g.coordinates()[xj[a]];
      acc += f.data[j] * std::complex<double>(std::cos(phase), -std::sin(phase));
    }
    out[m] = acc * g.cell_volume();
  }
  return out;
}

std::complex<double> free_gaussian(double r2, double t, double amplitude, double width, int d) {
  const std::complex<double> w2(width * width, 0.0);
  const std::complex<double> spread = 1.0 + std::complex<double>(0.0, 4.0 * t) / w2;
  return amplitude * std::pow(spread, -0.5 * d) * std::exp(-r2 / (w2 + std::complex<double>(0.0, 4.0 * t)));
}

Field free_gaussian_field(const GridPtr& grid, double t, double amplitude, double width) {
  Field f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f.data[i] = free_gaussian(grid->x_squared()[i], t, amplitude, width, grid->dim());
  return f;
}

double gaussian_integral(double a, int d) { return std::pow(std::numbers::pi / a, 0.5 * d); }

double gaussian_hs_dot_sq_3d(double amplitude, double width, double s) {
  const double pi = std::numbers::pi;
  const double fhat0 = amplitude * std::pow(pi * width * width, 1.5);
  auto integrand = [&](double k) {
    const double fh = fhat0 * std::exp(-width * width * k * k / 4.0);
    return 4.0 * pi * std::pow(k, 2.0 * s + 2.0) * fh * fh;
  };
  const double val = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-14);
  return val / std::pow(2.0 * pi, 3);
}

double gaussian_low_projection_sq_1d(double N) {
  const double pi = std::numbers::pi;
  auto integrand = [&](double k) {
    const double phi = lp_bump(k / N);
    return phi * phi * pi * std::exp(-k * k / 2.0);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  // Split at the kinks of the taper so each piece is smooth.
  const double inner = GK::integrate(integrand, 0.0, N, 15, 1e-14);
  const double taper = GK::integrate(integrand, N, 2.0 * N, 15, 1e-14);
  return 2.0 * (inner + taper) / (2.0 * pi);
}

double morawetz_direct(const SystemParams& p, const FieldPair& s, const std::vector<Field>& grad_u,
                       const std::vector<Field>& grad_v) {
  if (s.grid().dim() != 3) throw UnsupportedDimension("direct Morawetz sum is three-dimensional");
  const SpectralGrid& g = s.grid();
  const std::size_t N = g.size();
  std::vector<double> rho_u(N), rho_v(N), x(3 * N);
  std::vector<double> j_u(3 * N), j_v(3 * N);
  for (std::size_t i = 0; i < N; ++i) {
    rho_u[i] = std::norm(s.u.data[i]);
    rho_v[i] = std::norm(s.v.data[i]);
    for (int a = 0; a < 3; ++a) {
      x[3 * i + a] = g.x_axis(a)[i];
      j_u[3 * i + a] = std::imag(std::conj(s.u.data[i]) * grad_u[a].data[i]);
      j_v[3 * i + a] = std::imag(std::conj(s.v.data[i]) * grad_v[a].data[i]);
    }
  }
  const MorawetzConstants c = morawetz_constants(p);
  // sum_x sum_y (x-y)/|x-y| . [ (4A j_u(x) + 2(C+D) j_v(x)) rho_u(y) + (4B j_v(x) + 2(C+D) j_u(x)) rho_v(y) ]
  long double total = 0.0L;
  for (std::size_t i = 0; i < N; ++i) {
    double wu[3], wv[3];
    for (int a = 0; a < 3; ++a) {
      wu[a] = 4.0 * c.A * j_u[3 * i + a] + 2.0 * (c.C + c.D) * j_v[3 * i + a];
      wv[a] = 4.0 * c.B * j_v[3 * i + a] + 2.0 * (c.C + c.D) * j_u[3 * i + a];
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      const double z0 = x[3 * i] - x[3 * j], z1 = x[3 * i + 1] - x[3 * j + 1], z2 = x[3 * i + 2] - x[3 * j + 2];
      const double r2 = z0 * z0 + z1 * z1 + z2 * z2;
      if (r2 == 0.0) continue;
      const double inv = 1.0 / std::sqrt(r2);
      acc += inv * ((z0 * wu[0] + z1 * wu[1] + z2 * wu[2]) * rho_u[j] + (z0 * wv[0] + z1 * wv[1] + z2 * wv[2]) * rho_v[j]);
    }
    total += acc;
  }
  return static_cast<double>(total) * g.cell_volume() * g.cell_volume();
}

std::vector<Field> plane_gaussian_gradient(const GridPtr& grid, double amplitude, double width,
                                           std::array<double, 3> k0) {
  std::vector<Field> out;
  const int d = grid->dim();
  for (int a = 0; a < d; ++a) out.emplace_back(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    double phase = 0.0;
    for (int a = 0; a < d; ++a) phase += k0[a] * grid->x_axis(a)[i];
    const std::complex<double> f =
        amplitude * std::exp(-grid->x_squared()[i] / (width * width)) * std::complex<double>(std::cos(phase), std::sin(phase));
    for (int a = 0; a < d; ++a)
      out[a].data[i] = f * std::complex<double>(-2.0 * grid->x_axis(a)[i] / (width * width), k0[a]);
  }
  return out;
}

}  // namespace wnls::oracle
