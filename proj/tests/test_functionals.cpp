// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wnls/error.hpp"
#include "wnls/functionals.hpp"
#include "wnls/initial_data.hpp"
#include "wnls/spectral.hpp"

using namespace wnls;
using std::numbers::pi;

namespace {

SystemParams params(int d, double a, double b, double l = 1.0, double m = 1.0) {
  SystemParams p;
  p.d = d;
  p.alpha = a;
  p.beta = b;
  p.lambda = l;
  p.mu = m;
  return p;
}

FieldPair gaussian_pair(const GridPtr& g, double a_u, double a_v, double w = 1.0) {
  FieldPair s(g);
  s.u = gaussian(g, a_u, w);
  s.v = gaussian(g, a_v, w);
  return s;
}

// A e^{i k0 x_1} e^{-|x|^2/w^2}
Field boosted(const GridPtr& g, double A, double w, double k0) {
  Field f = gaussian(g, A, w);
  for (std::size_t i = 0; i < f.size(); ++i) f.data[i] *= std::polar(1.0, k0 * g->x_axis(0)[i]);
  return f;
}

// A e^{-i c |x|^2} e^{-|x|^2/w^2}
Field chirped(const GridPtr& g, double A, double w, double c) {
  Field f = gaussian(g, A, w);
  for (std::size_t i = 0; i < f.size(); ++i) f.data[i] *= std::polar(1.0, -c * g->x_squared()[i]);
  return f;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-14); }

}  // namespace

TEST(ConservedSet, ZeroState) {
  const auto g = SpectralGrid::create(2, 16, 4.0);
  const ConservedSet c = conserved_set(params(2, 1, 1), FieldPair(g));
  EXPECT_EQ(c.mass_u, 0.0);
  EXPECT_EQ(c.mass_v, 0.0);
  EXPECT_EQ(c.M_w, 0.0);
  EXPECT_EQ(c.E_w, 0.0);
  ASSERT_EQ(c.P_w.size(), 2u);
  for (double x : c.P_w) EXPECT_EQ(x, 0.0);
}

TEST(ConservedSet, GaussianClosedForms) {
  const auto g = SpectralGrid::create(1, 256, 16.0);
  const ConservedSet c = conserved_set(params(1, 0, 0), gaussian_pair(g, 1.0, 1.0));
  EXPECT_NEAR(c.mass_u, std::sqrt(pi / 2.0), 1e-12);
  EXPECT_NEAR(c.mass_v, std::sqrt(pi / 2.0), 1e-12);
  // |grad e^{-x^2}|^2 = int 4x^2 e^{-2x^2} = sqrt(pi/2); G = int e^{-4x^2} = sqrt(pi)/2
  EXPECT_NEAR(c.kinetic, 2.0 * std::sqrt(pi / 2.0), 1e-11);
  EXPECT_NEAR(c.potential, oracle::gaussian_integral(4.0, 1), 1e-12);
  EXPECT_NEAR(c.E_w, 2.0 * std::sqrt(pi / 2.0) + std::sqrt(pi) / 2.0, 1e-11);
  EXPECT_NEAR(c.P_w[0], 0.0, 1e-14);
}

TEST(ConservedSet, WeightedMassAndMomentum) {
  const auto g = SpectralGrid::create(1, 256, 16.0);
  const SystemParams p = params(1, 0, 2, 1.0, 0.5);
  FieldPair s(g);
  s.u = boosted(g, 1.0, 1.0, 1.5);
  s.v = boosted(g, 0.5, 1.0, 1.5);
  const ConservedSet c = conserved_set(p, s);
  const WeightPair w = derive_weights(p);
  EXPECT_DOUBLE_EQ(c.M_w, w.c1 * c.mass_u + w.c2 * c.mass_v);
  EXPECT_NEAR(c.P_w[0], -1.5 * c.M_w, 1e-10);
}

TEST(VirialSample, ZeroState) {
  const auto g = SpectralGrid::create(3, 8, 4.0);
  const VirialSample v = virial_sample(params(3, 1, 1), FieldPair(g));
  EXPECT_EQ(v.Y, 0.0);
  EXPECT_EQ(v.Yp, 0.0);
  EXPECT_EQ(v.Ypp_formula, 0.0);
}

TEST(VirialSample, LinearSecondDifferenceOfExactEvolution) {
  const auto g = SpectralGrid::create(1, 512, 32.0);
  SystemParams p = params(1, 0, 0, 0.0, 0.0);
  const double t = 0.4, h = 1e-3;
  auto Y_at = [&](double tt) {
    FieldPair s(g, tt);
    s.u = oracle::free_gaussian_field(g, tt, 1.0, 1.0);
    s.v = s.u;
    for (std::size_t i = 0; i < s.u.size(); ++i) s.u.data[i] *= std::polar(1.0, 0.0);
    return virial_sample(p, s);
  };
  const VirialSample m = Y_at(t - h), c = Y_at(t), q = Y_at(t + h);
  EXPECT_LT(rel((q.Y - 2.0 * c.Y + m.Y) / (h * h), c.Ypp_formula), 1e-6);
  EXPECT_LT(rel((q.Y - m.Y) / (2.0 * h), c.Yp), 1e-6);
  // Free flow: Y'' = 8 |grad u|^2 is constant.
  EXPECT_LT(rel(m.Ypp_formula, q.Ypp_formula), 1e-12);
}

TEST(VirialSample, SpecializedFormAgreesInThreeDimensions) {
  const auto g = SpectralGrid::create(3, 24, 6.0);
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{0.0, 0.0}, std::pair{0.5, 1.5}}) {
    const VirialSample v = virial_sample(params(3, a, b, 2.0, 0.5), gaussian_pair(g, 1.0, 0.8));
    ASSERT_TRUE(v.Ypp_specialized.has_value());
    EXPECT_LT(std::abs(v.specialization_discrepancy), 1e-12 * std::abs(v.Ypp_formula));
  }
  const VirialSample f = virial_sample(params(3, 0, 0, -1.0, -1.0), gaussian_pair(g, 1.0, 1.0));
  ASSERT_TRUE(f.Ypp_specialized.has_value());
  EXPECT_GT(std::abs(f.specialization_discrepancy), 1e-3 * std::abs(f.Ypp_formula));
  EXPECT_FALSE(virial_sample(params(2, 0, 0), gaussian_pair(SpectralGrid::create(2, 16, 6.0), 1, 1))
                   .Ypp_specialized.has_value());
}

TEST(VirialSample, BoundaryMassFlagsTruncation) {
  const auto g = SpectralGrid::create(1, 64, 4.0);
  FieldPair s(g);
  s.u = gaussian(g, 1.0, 3.0);
  s.v = s.u;
  EXPECT_TRUE(virial_sample(params(1, 0, 0), s).truncation_unreliable);
  s.u = gaussian(g, 1.0, 0.5);
  s.v = s.u;
  EXPECT_FALSE(virial_sample(params(1, 0, 0), s).truncation_unreliable);
}

TEST(Pseudoconformal, InitialTimeIsWeightedVariance) {
  const auto g = SpectralGrid::create(3, 24, 6.0);
  const SystemParams p = params(3, 1, 1, 1.0, 2.0);
  FieldPair s(g);
  s.u = chirped(g, 1.0, 1.0, 0.3);
  s.v = gaussian(g, 0.7, 1.2);
  const PseudoconformalSample pc = pseudoconformal_sample(p, s);
  const WeightPair w = derive_weights(p);
  EXPECT_LT(rel(pc.P, w.c1 * variance(s.u) + w.c2 * variance(s.v)), 1e-13);
  EXPECT_DOUBLE_EQ(pc.rate_coefficient, 2.0 * 3 * 4 - 8.0);
  EXPECT_EQ(pseudoconformal_sample(p, FieldPair(g)).P, 0.0);
}

TEST(Pseudoconformal, ConservedByFreeFlow) {
  const auto g = SpectralGrid::create(1, 512, 32.0);
  const SystemParams p = params(1, 0, 0, 0.0, 0.0);
  FieldPair s0(g, 0.0), s1(g, 0.7);
  s0.u = oracle::free_gaussian_field(g, 0.0, 1.0, 1.0);
  s0.v = s0.u;
  s1.u = oracle::free_gaussian_field(g, 0.7, 1.0, 1.0);
  s1.v = s1.u;
  EXPECT_LT(rel(pseudoconformal_sample(p, s1).P, pseudoconformal_sample(p, s0).P), 1e-10);
}

TEST(Morawetz, TrivialCases) {
  const auto g = SpectralGrid::create(3, 8, 4.0);
  const SystemParams p = params(3, 0, 0);
  const MorawetzSample z = morawetz_sample(p, FieldPair(g));
  EXPECT_EQ(z.M2, 0.0);
  EXPECT_EQ(z.lower_bound_rate, 0.0);
  EXPECT_NEAR(morawetz_sample(p, gaussian_pair(g, 1.0, 0.5)).M2, 0.0, 1e-12);
  EXPECT_THROW(morawetz_sample(params(2, 0, 0), FieldPair(SpectralGrid::create(2, 8, 4.0))), UnsupportedDimension);
}

TEST(Morawetz, Constants) {
  const MorawetzConstants c = morawetz_constants(params(3, 1, 2, 0.5, 3.0));
  EXPECT_DOUBLE_EQ(c.A, 9.0 * 9.0);
  EXPECT_DOUBLE_EQ(c.B, 0.25 * 16.0);
  EXPECT_DOUBLE_EQ(c.C, 1.5 * 12.0);
  EXPECT_DOUBLE_EQ(c.D, c.C);
}

TEST(Morawetz, FftPathMatchesDirectSum) {
  const auto g = SpectralGrid::create(3, 16, 4.0);
  const SystemParams p = params(3, 0.5, 0.5, 1.0, 2.0);
  FieldPair s(g);
  s.u = boosted(g, 1.0, 1.0, 1.0);
  Field v = gaussian(g, 0.8, 1.1, {0.5, -0.3, 0.2});
  for (std::size_t i = 0; i < v.size(); ++i) v.data[i] *= std::polar(1.0, -0.7 * g->x_axis(1)[i]);
  s.v = v;
  const double direct = oracle::morawetz_direct(p, s, gradient(s.u), gradient(s.v));
  const MorawetzSample m = morawetz_sample(p, s);
  EXPECT_LT(rel(m.M2, direct), 1e-6) << m.M2 << " vs " << direct;
}

TEST(Morawetz, LowerBoundRateClosedForm) {
  const auto g = SpectralGrid::create(3, 48, 6.0);
  const SystemParams p = params(3, 0, 0);
  const MorawetzConstants c = morawetz_constants(p);
  const MorawetzSample m = morawetz_sample(p, gaussian_pair(g, 1.0, 1.0));
  const double q = oracle::gaussian_integral(4.0, 3);
  EXPECT_LT(rel(m.lower_bound_rate, 16.0 * pi * (c.A + c.B + c.C + c.D) * q), 1e-10);
}

TEST(L4Accumulator, Behaviour) {
  const auto g = SpectralGrid::create(1, 64, 8.0);
  L4Accumulator acc;
  acc.add(FieldPair(g), 1.0);
  EXPECT_EQ(acc.value, 0.0);
  const FieldPair s = gaussian_pair(g, 1.0, 1.0);
  acc.add(s, 0.5);
  const double once = acc.value;
  acc.add(s, 0.5);
  EXPECT_DOUBLE_EQ(acc.value, 2.0 * once);
  EXPECT_NEAR(once, 0.5 * 2.0 * std::sqrt(pi / 4.0), 1e-12);
}

TEST(BoundaryFraction, CentredAndEdgeMass) {
  const auto g = SpectralGrid::create(1, 128, 8.0);
  EXPECT_LT(boundary_fraction(gaussian_pair(g, 1.0, 1.0)), 1e-15);
  FieldPair edge(g);
  edge.u.data[0] = 1.0;
  EXPECT_DOUBLE_EQ(boundary_fraction(edge), 1.0);
  EXPECT_EQ(boundary_fraction(FieldPair(g)), 0.0);
}

TEST(Focusing, EnergyAndVariance) {
  const auto g = SpectralGrid::create(1, 512, 32.0);
  const SystemParams p = params(1, 0, 0, -1.0, -1.0);
  const WeightPair w = focusing_weights(p);
  EXPECT_EQ(w.c1, 1.0);
  EXPECT_EQ(w.c2, 1.0);
  const FieldPair real_pair = gaussian_pair(g, 1.0, 1.0);
  EXPECT_NEAR(focusing_energy(p, real_pair), 2.0 * std::sqrt(pi / 2.0) - std::sqrt(pi) / 2.0, 1e-11);
  EXPECT_NEAR(focusing_variance(p, real_pair).second, 0.0, 1e-13);

  FieldPair s(g);
  s.u = chirped(g, 2.0, 1.0, 1.0);
  s.v = chirped(g, 2.0, 1.0, 1.0);
  const auto [V, Vp] = focusing_variance(p, s);
  const double x2 = 4.0 * std::sqrt(pi / 2.0) / 4.0;
  EXPECT_NEAR(V, 2.0 * x2, 1e-11);
  EXPECT_NEAR(Vp, -8.0 * 2.0 * x2, 1e-10);
  EXPECT_THROW(focusing_weights(params(1, 0, 0, 0.0, 0.0)), InvalidCoupling);
}

TEST(FunctionalHook, WritesSelectedColumns) {
  const auto g = SpectralGrid::create(3, 8, 4.0);
  FunctionalSelection sel;
  sel.virial = sel.pseudoconformal = sel.morawetz = sel.l4 = sel.sc_norm = sel.focusing = true;
  const SystemParams p = params(3, 1, 1, -1.0, -1.0);
  const DiagnosticHook hook = functional_hook(p, sel);
  DiagnosticsTrace::Row row;
  hook(gaussian_pair(g, 0.5, 0.5), SampleInfo{}, row);
  for (const char* c : {"mass_u", "mass_v", "M_w", "P_w_x", "P_w_y", "P_w_z", "E_w", "int_G", "Y", "Yp", "Ypp",
                        "Ypp_specialized", "P_pc", "pc_rhs", "M2", "morawetz_rate", "l4_accum", "sc_norm",
                        "E_tilde", "V", "Vp"})
    EXPECT_TRUE(row.get(c).has_value()) << c;
}
