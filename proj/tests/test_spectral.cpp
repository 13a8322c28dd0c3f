// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "wnls/error.hpp"
#include "wnls/initial_data.hpp"
#include "wnls/spectral.hpp"

using namespace wnls;
using std::numbers::pi;

namespace {

Field random_field(const GridPtr& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Field f(g);
  for (auto& z : f.data) z = cplx(n(rng), n(rng));
  return f;
}

Field smooth_random_field(const GridPtr& g, unsigned seed) {
  return lp_project(random_field(g, seed), g->k_max() / 3.0, LpSide::Low, LpShape::Sharp);
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

double l2_rel(const Field& a, const Field& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a.data[i] - b.data[i]);
    den += std::norm(b.data[i]);
  }
  return std::sqrt(num / den);
}

Field plane_wave(const GridPtr& g, long m) {
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double th = pi * static_cast<double>(m) * g->x_axis(0)[i] / g->half_width();
    f.data[i] = cplx(std::cos(th), std::sin(th));
  }
  return f;
}

}  // namespace

TEST(SpectralGrid, RejectsInvalidShapes) {
  EXPECT_THROW(SpectralGrid::create(0, 16, 1.0), UnsupportedDimension);
  EXPECT_THROW(SpectralGrid::create(4, 16, 1.0), UnsupportedDimension);
  EXPECT_THROW(SpectralGrid::create(1, 4, 1.0), InvalidArgument);
  EXPECT_THROW(SpectralGrid::create(1, 22, 1.0), InvalidArgument);
  EXPECT_THROW(SpectralGrid::create(1, 15, 1.0), InvalidArgument);
  EXPECT_THROW(SpectralGrid::create(1, 16, 0.0), InvalidArgument);
  EXPECT_NO_THROW(SpectralGrid::create(3, 24, 8.0));
}

TEST(SpectralGrid, WavenumbersAndSpacing) {
  for (std::size_t n : {8u, 64u, 256u}) {
    const auto g = SpectralGrid::create(1, n, 16.0);
    EXPECT_EQ(g->dx() * static_cast<double>(n), 2.0 * g->half_width());
    for (std::size_t j = 0; j < n; ++j) {
      const long m = j < n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
      EXPECT_DOUBLE_EQ(g->wavenumbers()[j], pi * static_cast<double>(m) / 16.0);
    }
    EXPECT_EQ(g->coordinates()[0], -16.0);
  }
  const auto g3 = SpectralGrid::create(3, 8, 2.0);
  EXPECT_EQ(g3->size(), 512u);
  const auto idx = g3->unflatten(8 * 8 * 3 + 8 * 5 + 7);
  EXPECT_EQ(idx[0], 3u);
  EXPECT_EQ(idx[1], 5u);
  EXPECT_EQ(idx[2], 7u);
}

TEST(Transform, ConstantFieldIsPureZeroMode) {
  const auto g = SpectralGrid::create(2, 16, 3.0);
  Field f(g);
  for (auto& z : f.data) z = 1.0;
  const Spectrum s = transform_forward(f);
  EXPECT_NEAR(std::abs(s.data[0]), 36.0, 1e-12);
  for (std::size_t i = 1; i < s.data.size(); ++i) EXPECT_LT(std::abs(s.data[i]), 1e-12);
}

TEST(Transform, SingleModeHasOneCoefficient) {
  const auto g = SpectralGrid::create(1, 32, 5.0);
  const Spectrum s = transform_forward(plane_wave(g, 1));
  for (std::size_t j = 0; j < 32; ++j) {
    if (j == 1) {
      EXPECT_NEAR(std::abs(s.data[j]), 10.0, 1e-12);
    } else {
      EXPECT_LT(std::abs(s.data[j]), 1e-12);
    }
  }
}

TEST(Transform, GaussianMatchesClosedForm) {
  const auto g = SpectralGrid::create(1, 256, 16.0);
  const Spectrum s = transform_forward(gaussian(g, 1.0, 1.0));
  const double peak = std::sqrt(pi);
  double worst = 0.0;
  for (std::size_t j = 0; j < 256; ++j) {
    const double k = g->wavenumbers()[j];
    if (std::abs(k) > 8.0) continue;
    const double expected = std::sqrt(pi) * std::exp(-k * k / 4.0);
    worst = std::max(worst, std::abs(s.data[j] - expected) / peak);
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Transform, MatchesDirectSum) {
  const auto g = SpectralGrid::create(2, 8, 2.5);
  const Field f = random_field(g, 1);
  const Spectrum s = transform_forward(f);
  const auto direct = oracle::direct_fourier(f);
  for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_NEAR(std::abs(s.data[i] - direct[i]), 0.0, 1e-12);
}

TEST(Transform, RoundTrip) {
  for (int d = 1; d <= 3; ++d) {
    const auto g = SpectralGrid::create(d, 16, 4.0);
    const Field f = random_field(g, static_cast<unsigned>(d));
    EXPECT_LT(l2_rel(transform_inverse(transform_forward(f)), f), 1e-12);
  }
}

TEST(Transform, NonFiniteInputThrows) {
  const auto g = SpectralGrid::create(1, 16, 4.0);
  Field f(g);
  f.data[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(transform_forward(f), DivergedField);
  EXPECT_THROW(apply_free_propagator(f, 0.1), DivergedField);
}

TEST(Transform, ParsevalOnRandomFields) {
  const auto g = SpectralGrid::create(3, 16, 3.0);
  const Field f = random_field(g, 9);
  const Spectrum s = transform_forward(f);
  double spectral = 0.0;
  for (const auto& z : s.data) spectral += std::norm(z);
  spectral /= std::pow(2.0 * g->half_width(), 3);
  EXPECT_NEAR(mass(f) / spectral, 1.0, 1e-12);
}

TEST(FreePropagator, ZeroStepIsIdentity) {
  const auto g = SpectralGrid::create(2, 16, 4.0);
  const Field f = random_field(g, 2);
  EXPECT_EQ(max_abs_diff(apply_free_propagator(f, 0.0), f), 0.0);
}

TEST(FreePropagator, ForwardThenBackward) {
  const auto g = SpectralGrid::create(3, 16, 4.0);
  const Field f = random_field(g, 3);
  EXPECT_LT(l2_rel(apply_free_propagator(apply_free_propagator(f, 0.37), -0.37), f), 1e-12);
}

TEST(FreePropagator, GaussianMatchesClosedForm) {
  const auto g = SpectralGrid::create(1, 256, 16.0);
  const Field evolved = apply_free_propagator(gaussian(g, 1.0, 1.0), 0.5);
  const Field exact = oracle::free_gaussian_field(g, 0.5, 1.0, 1.0);
  EXPECT_LT(max_abs_diff(evolved, exact), 1e-8);
}

TEST(FreePropagator, PreservesL2AndSobolevNorms) {
  const auto g = SpectralGrid::create(2, 32, 5.0);
  const Field f = random_field(g, 4);
  const Field e = apply_free_propagator(f, 1.3);
  EXPECT_NEAR(norm(e, Norm::l2()) / norm(f, Norm::l2()), 1.0, 1e-12);
  for (double s : {0.5, 1.0, 7.0 / 6.0, 2.0})
    EXPECT_NEAR(norm(e, Norm::hs_dot(s)) / norm(f, Norm::hs_dot(s)), 1.0, 1e-12) << "s = " << s;
}

TEST(Gradient, ConstantHasZeroGradient) {
  const auto g = SpectralGrid::create(2, 16, 4.0);
  Field f(g);
  for (auto& z : f.data) z = cplx(2.0, -1.0);
  for (const Field& c : gradient(f))
    for (const auto& z : c.data) EXPECT_LT(std::abs(z), 1e-13);
}

TEST(Gradient, PlaneWaveEigenfunction) {
  const auto g = SpectralGrid::create(1, 32, 3.0);
  const Field f = plane_wave(g, 1);
  const Field df = gradient(f)[0];
  for (std::size_t i = 0; i < f.size(); ++i)
    EXPECT_NEAR(std::abs(df.data[i] - cplx(0.0, pi / 3.0) * f.data[i]), 0.0, 1e-13);
}

TEST(Gradient, GaussianDerivative) {
  const auto g = SpectralGrid::create(1, 256, 16.0);
  const Field df = gradient(gaussian(g, 1.0, 1.0))[0];
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double x = g->x_axis(0)[i];
    if (std::abs(x) > 8.0) continue;
    EXPECT_NEAR(std::abs(df.data[i] - (-2.0 * x * std::exp(-x * x))), 0.0, 1e-9);
  }
}

TEST(Gradient, RealFieldHasRealGradient) {
  const auto g = SpectralGrid::create(2, 8, 2.0);
  Field f = random_field(g, 14);
  for (auto& z : f.data) z = z.real();
  for (const Field& c : gradient(f))
    for (const auto& z : c.data) EXPECT_LT(std::abs(z.imag()), 1e-13);
}

TEST(Gradient, PhysicalAndSpectralEnergiesAgree) {
  const auto g = SpectralGrid::create(3, 16, 4.0);
  const Field f = smooth_random_field(g, 5);
  double physical = 0.0;
  for (const Field& c : gradient(f)) physical += mass(c);
  EXPECT_NEAR(physical / gradient_energy(f), 1.0, 1e-12);
}

TEST(LittlewoodPaley, BumpShape) {
  EXPECT_EQ(lp_bump(0.0), 1.0);
  EXPECT_EQ(lp_bump(1.0), 1.0);
  EXPECT_EQ(lp_bump(2.0), 0.0);
  EXPECT_EQ(lp_bump(5.0), 0.0);
  double prev = 1.0;
  for (double r = 1.0; r <= 2.0; r += 0.01) {
    EXPECT_LE(lp_bump(r), prev + 1e-15);
    prev = lp_bump(r);
  }
  EXPECT_LT(lp_bump(1.999), 1e-100);
}

TEST(LittlewoodPaley, BandLimitedFieldIsLow) {
  const auto g = SpectralGrid::create(1, 64, 4.0);
  Field f(g);
  for (long m = -3; m <= 3; ++m) {
    const Field w = plane_wave(g, m);
    for (std::size_t i = 0; i < f.size(); ++i) f.data[i] += static_cast<double>(m + 5) * w.data[i];
  }
  const double N = 3.0 * pi / 4.0;
  EXPECT_LT(max_abs_diff(lp_project(f, N, LpSide::Low), f), 1e-12);
}

TEST(LittlewoodPaley, LowPlusHighIsIdentity) {
  const auto g = SpectralGrid::create(2, 32, 4.0);
  const Field f = random_field(g, 6);
  const Field lo = lp_project(f, 2.0, LpSide::Low);
  const Field hi = lp_project(f, 2.0, LpSide::High);
  Field sum(g);
  for (std::size_t i = 0; i < f.size(); ++i) sum.data[i] = lo.data[i] + hi.data[i];
  EXPECT_LT(max_abs_diff(sum, f), 1e-12);
}

TEST(LittlewoodPaley, GaussianLowProjectionMatchesQuadrature) {
  const auto g = SpectralGrid::create(1, 4096, 256.0);
  const Field lo = lp_project(gaussian(g, 1.0, 1.0), 1.0, LpSide::Low);
  // Discrete k-sum against the continuous integral: error falls with the mode spacing.
  EXPECT_NEAR(mass(lo) / oracle::gaussian_low_projection_sq_1d(1.0), 1.0, 1e-8);
}

TEST(LittlewoodPaley, SharpVariantIsIdempotent) {
  const auto g = SpectralGrid::create(2, 32, 4.0);
  const Field f = random_field(g, 8);
  const Field once = lp_project(f, 3.0, LpSide::Low, LpShape::Sharp);
  const Field twice = lp_project(once, 3.0, LpSide::Low, LpShape::Sharp);
  EXPECT_LT(max_abs_diff(once, twice), 1e-13);
}

TEST(LittlewoodPaley, SmoothVariantDiffersOnlyInTaperBand) {
  const auto g = SpectralGrid::create(1, 128, 8.0);
  const Field f = random_field(g, 12);
  const double N = 2.0;
  const Field once = lp_project(f, N, LpSide::Low);
  const Field twice = lp_project(once, N, LpSide::Low);
  Field diff(g);
  for (std::size_t i = 0; i < f.size(); ++i) diff.data[i] = once.data[i] - twice.data[i];
  const Spectrum s = transform_forward(diff);
  for (std::size_t j = 0; j < s.data.size(); ++j) {
    const double k = std::abs(g->wavenumbers()[j]);
    if (k <= N || k >= 2.0 * N) {
      EXPECT_LT(std::abs(s.data[j]), 1e-12) << "k = " << k;
    }
  }
  EXPECT_GT(norm(diff, Norm::l2()), 1e-6);
}

TEST(LittlewoodPaley, BandIsDifferenceOfLows) {
  const auto g = SpectralGrid::create(1, 64, 4.0);
  const Field f = random_field(g, 13);
  const Field band = lp_project(f, 2.0, LpSide::Band);
  const Field a = lp_project(f, 2.0, LpSide::Low);
  const Field b = lp_project(f, 1.0, LpSide::Low);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(std::abs(band.data[i] - (a.data[i] - b.data[i])), 0.0, 1e-12);
}

TEST(LittlewoodPaley, NonPositiveFrequencyRejected) {
  const auto g = SpectralGrid::create(1, 16, 4.0);
  const Field f(g);
  EXPECT_THROW(lp_project(f, 0.0, LpSide::Low), InvalidFrequency);
  EXPECT_THROW(lp_project(f, -1.0, LpSide::High), InvalidFrequency);
}

TEST(Norms, ZeroFieldIsZeroForEveryKind) {
  const auto g = SpectralGrid::create(2, 16, 4.0);
  const Field f(g);
  for (const Norm n : {Norm::l2(), Norm::l4(), Norm::lp(3.0), Norm::h1(), Norm::h1dot(), Norm::hs_dot(0.7), Norm::sigma()})
    EXPECT_EQ(norm(f, n), 0.0);
}

TEST(Norms, GaussianClosedForms) {
  const auto g = SpectralGrid::create(1, 256, 16.0);
  const Field f = gaussian(g, 1.0, 1.0);
  EXPECT_NEAR(std::pow(norm(f, Norm::l2()), 2), std::sqrt(pi / 2.0), 1e-10);
  // |e^{-x^2}|_4^4 = sqrt(pi/4); |f'|^2 = sqrt(pi/2); |x f|^2 = sqrt(pi/2)/4
  EXPECT_NEAR(std::pow(norm(f, Norm::l4()), 4), std::sqrt(pi / 4.0), 1e-10);
  EXPECT_NEAR(std::pow(norm(f, Norm::lp(3.0)), 3), std::sqrt(pi / 3.0), 1e-10);
  EXPECT_NEAR(std::pow(norm(f, Norm::h1dot()), 2), std::sqrt(pi / 2.0), 1e-10);
  const double h1 = std::sqrt(2.0 * std::sqrt(pi / 2.0));
  EXPECT_NEAR(norm(f, Norm::h1()), h1, 1e-10);
  EXPECT_NEAR(norm(f, Norm::sigma()), h1 + std::sqrt(std::sqrt(pi / 2.0) / 4.0), 1e-10);
}

TEST(Norms, HsDotSpecialCases) {
  const auto g = SpectralGrid::create(3, 16, 4.0);
  const Field f = smooth_random_field(g, 10);
  EXPECT_NEAR(norm(f, Norm::hs_dot(0.0)), norm(f, Norm::l2()), 1e-13 * norm(f, Norm::l2()));
  EXPECT_NEAR(norm(f, Norm::hs_dot(1.0)), norm(f, Norm::h1dot()), 1e-13 * norm(f, Norm::h1dot()));
  EXPECT_THROW(norm(f, Norm::hs_dot(-0.5)), InvalidArgument);
  EXPECT_THROW(norm(f, Norm::lp(0.5)), InvalidArgument);
}

TEST(Norms, HsDotMatchesRadialQuadrature) {
  const auto g = SpectralGrid::create(3, 64, 16.0);
  const Field f = gaussian(g, 1.0, 1.0);
  const double s = 7.0 / 6.0;
  EXPECT_NEAR(std::pow(norm(f, Norm::hs_dot(s)), 2) / oracle::gaussian_hs_dot_sq_3d(1.0, 1.0, s), 1.0, 1e-6);
}
