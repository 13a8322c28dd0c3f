// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wnls/error.hpp"
#include "wnls/functionals.hpp"
#include "wnls/initial_data.hpp"
#include "wnls/parallel.hpp"
#include "wnls/propagator.hpp"
#include "wnls/spectral.hpp"

using namespace wnls;

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

FieldPair pair_of(const GridPtr& g, double a_u, double a_v, double w = 1.0, double k0 = 0.0) {
  FieldPair s(g);
  s.u = gaussian(g, a_u, w);
  s.v = gaussian(g, a_v, w, {0.3, 0.0, 0.0});
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    s.u.data[i] *= std::polar(1.0, k0 * g->x_axis(0)[i]);
    s.v.data[i] *= std::polar(1.0, -0.5 * k0 * g->x_axis(0)[i]);
  }
  return s;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return num / den;
}

}  // namespace

TEST(StrangStep, LinearProblemIsFreeFlow) {
  const auto g = SpectralGrid::create(2, 32, 6.0);
  const FieldPair s = pair_of(g, 1.0, 0.5, 1.0, 1.0);
  const FieldPair out = strang_step(params(2, 1, 1, 0.0, 0.0), s, 0.05);
  FieldPair ref(g, 0.05);
  ref.u = apply_free_propagator(s.u, 0.05);
  ref.v = apply_free_propagator(s.v, 0.05);
  EXPECT_LT(relative_distance(out, ref), 1e-15);
  EXPECT_DOUBLE_EQ(out.t, 0.05);
}

TEST(StrangStep, ZeroStepIsIdentity) {
  const auto g = SpectralGrid::create(1, 64, 8.0);
  const FieldPair s = pair_of(g, 1.0, 1.0, 1.0, 0.5);
  EXPECT_EQ(relative_distance(strang_step(params(1, 1, 1), s, 0.0), s), 0.0);
}

TEST(StrangStep, MatchesRk4OracleInOneDimension) {
  const auto g = SpectralGrid::create(1, 256, 16.0);
  const SystemParams p = params(1, 0, 0);
  const FieldPair s = pair_of(g, 1.0, 1.0);
  const FieldPair strang = integrate(p, s, 0.1, 1e-3, Integrator::Strang);
  const FieldPair rk4 = integrate(p, s, 0.1, 1e-5, Integrator::RK4);
  EXPECT_LT(relative_distance(strang, rk4), 1e-6);
}

TEST(StrangStep, ConservesComponentMassEachStep) {
  const auto g = SpectralGrid::create(3, 16, 5.0);
  const SystemParams p = params(3, 1, 1, 1.0, 2.0);
  FieldPair s = pair_of(g, 1.5, 1.0, 1.0, 1.0);
  const double mu0 = mass(s.u), mv0 = mass(s.v);
  for (int i = 0; i < 20; ++i) {
    s = strang_step(p, s, 0.01);
    EXPECT_NEAR(mass(s.u) / mu0, 1.0, 1e-12 * (i + 1));
    EXPECT_NEAR(mass(s.v) / mv0, 1.0, 1e-12 * (i + 1));
  }
}

TEST(StrangStep, TimeReversible) {
  const auto g = SpectralGrid::create(2, 32, 6.0);
  const SystemParams p = params(2, 0.5, 1.0);
  const FieldPair s = pair_of(g, 1.2, 0.8, 1.0, 1.0);
  EXPECT_LT(relative_distance(strang_step(p, strang_step(p, s, 0.02), -0.02), s), 1e-11);
}

TEST(StrangStep, HalfStepsMatchFullStepToThirdOrder) {
  const auto g = SpectralGrid::create(1, 128, 10.0);
  const SystemParams p = params(1, 0, 0, 1.0, 1.0);
  const FieldPair s = pair_of(g, 1.5, 1.5);
  std::vector<double> dts{0.04, 0.02, 0.01}, diffs;
  for (double dt : dts) {
    const FieldPair full = strang_step(p, s, dt);
    const FieldPair halves = strang_step(p, strang_step(p, s, dt / 2), dt / 2);
    diffs.push_back(relative_distance(halves, full));
  }
  EXPECT_NEAR(slope(dts, diffs), 3.0, 0.3);
}

TEST(StrangStep, NonFiniteInputThrows) {
  const auto g = SpectralGrid::create(1, 16, 4.0);
  FieldPair s(g);
  s.u.data[0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(strang_step(params(1, 0, 0), s, 0.1), DivergedField);
  EXPECT_THROW(rk4_oracle_step(params(1, 0, 0), s, 0.1), DivergedField);
}

TEST(Rk4Oracle, TrivialCases) {
  const auto g = SpectralGrid::create(1, 32, 4.0);
  const SystemParams p = params(1, 1, 1);
  const FieldPair zero(g);
  EXPECT_EQ(relative_distance(rk4_oracle_step(p, pair_of(g, 1, 1), 0.0), pair_of(g, 1, 1)), 0.0);
  const FieldPair z = rk4_oracle_step(p, zero, 0.1);
  for (const cplx& c : z.u.data) EXPECT_EQ(c, cplx(0.0));
}

TEST(Rk4Oracle, LocalErrorIsFifthOrder) {
  const auto g = SpectralGrid::create(1, 64, 8.0);
  const SystemParams p = params(1, 0, 0, 0.0, 0.0);
  const FieldPair s = pair_of(g, 1.0, 1.0, 1.5);
  std::vector<double> dts{0.08, 0.04, 0.02}, errs;
  for (double dt : dts) {
    FieldPair ref(g, dt);
    ref.u = apply_free_propagator(s.u, dt);
    ref.v = apply_free_propagator(s.v, dt);
    errs.push_back(relative_distance(rk4_oracle_step(p, s, dt), ref));
  }
  EXPECT_GE(slope(dts, errs), 4.7);
}

TEST(ConvergenceOrder, StrangIsSecondOrder) {
  const auto g = SpectralGrid::create(1, 128, 12.0);
  const ConvergenceReport r = convergence_order(params(1, 1, 1), pair_of(g, 1.0, 1.0, 1.0, 1.0), 0.5,
                                                {0.02, 0.01, 0.005});
  EXPECT_FALSE(r.exact);
  EXPECT_NEAR(r.order, 2.0, 0.2);
}

TEST(ConvergenceOrder, Rk4IsFourthOrder) {
  const auto g = SpectralGrid::create(1, 64, 12.0);
  const ConvergenceReport r = convergence_order(params(1, 1, 1), pair_of(g, 1.0, 1.0, 1.5, 0.5), 0.5,
                                                {0.004, 0.002, 0.001}, Integrator::RK4);
  EXPECT_NEAR(r.order, 4.0, 0.3);
}

TEST(ConvergenceOrder, LinearProblemIsExact) {
  const auto g = SpectralGrid::create(1, 64, 8.0);
  const ConvergenceReport r =
      convergence_order(params(1, 0, 0, 0.0, 0.0), pair_of(g, 1.0, 1.0), 0.4, {0.04, 0.02, 0.01});
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(std::isnan(r.order));
  EXPECT_THROW(convergence_order(params(1, 0, 0), pair_of(g, 1, 1), 0.4, {0.04, 0.02}), InvalidArgument);
}

TEST(Evolve, LinearGaussianMatchesClosedForm) {
  const auto g = SpectralGrid::create(1, 256, 16.0);
  FieldPair s(g);
  s.u = gaussian(g, 1.0, 1.0);
  s.v = gaussian(g, 0.5, 1.0);
  StepperConfig cfg;
  cfg.dt = 0.05;
  cfg.t_end = 0.5;
  const RunResult r = evolve(params(1, 0, 0, 0.0, 0.0), s, cfg);
  EXPECT_EQ(r.run.status, RunStatus::Finished);
  EXPECT_DOUBLE_EQ(r.run.state.t, 0.5);
  const Field exact = oracle::free_gaussian_field(g, 0.5, 1.0, 1.0);
  for (std::size_t i = 0; i < exact.size(); ++i) EXPECT_LT(std::abs(r.run.state.u.data[i] - exact.data[i]), 1e-8);
}

TEST(Evolve, DefocusingMassConservation) {
  const auto g = SpectralGrid::create(1, 128, 12.0);
  StepperConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.sample_every = 100;
  const RunResult r = evolve(params(1, 1, 1), pair_of(g, 1.5, 1.0, 1.0, 1.0), cfg, {functional_hook(params(1, 1, 1), {})});
  ASSERT_EQ(r.run.status, RunStatus::Finished);
  const auto mu = r.trace.column("mass_u"), mv = r.trace.column("mass_v");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    EXPECT_NEAR(mu[i] / mu[0], 1.0, 1e-10);
    EXPECT_NEAR(mv[i] / mv[0], 1.0, 1e-10);
  }
  EXPECT_EQ(r.trace.rows(), 11u);
  for (const char* c : {"t", "step", "dt", "h1_sum", "boundary_fraction"}) EXPECT_TRUE(r.trace.has_column(c));
}

TEST(Evolve, FocusingLargeDataDiverges) {
  const auto g = SpectralGrid::create(2, 64, 8.0);
  const SystemParams p = params(2, 0, 0, -1.0, -1.0);
  FieldPair s(g);
  s.u = gaussian(g, 4.0, 1.0);
  s.v = gaussian(g, 4.0, 1.0);
  StepperConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  cfg.sample_every = 0;
  const RunResult r = evolve(p, s, cfg);
  ASSERT_EQ(r.run.status, RunStatus::DivergenceDetected) << r.run.divergence_reason;
  EXPECT_LT(r.run.t_star, 2.0);
  EXPECT_TRUE(r.run.state.u.all_finite());
  const auto& h = r.h1_history;
  ASSERT_GE(h.size(), 10u);
  for (std::size_t i = h.size() - 10; i + 1 < h.size(); ++i) EXPECT_LT(h[i].second, h[i + 1].second);
}

TEST(Evolve, BackwardEvolutionReturns) {
  const auto g = SpectralGrid::create(1, 128, 12.0);
  const SystemParams p = params(1, 1, 0.5);
  const FieldPair s = pair_of(g, 1.0, 1.0, 1.0, 0.5);
  StepperConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.5;
  const RunResult fwd = evolve(p, s, cfg);
  cfg.t_end = -0.5;
  const RunResult back = evolve(p, fwd.run.state, cfg);
  EXPECT_NEAR(back.run.state.t, 0.0, 1e-12);
  EXPECT_LT(relative_distance(back.run.state, s), 1e-10);
}

TEST(Evolve, LandsOnSampleTimes) {
  const auto g = SpectralGrid::create(1, 64, 8.0);
  StepperConfig cfg;
  cfg.dt = 0.1;
  cfg.t_end = 1.0;
  cfg.sample_every = 0;
  cfg.sample_times = {0.25, 0.333, 0.8};
  const RunResult r = evolve(params(1, 0, 0), pair_of(g, 1, 1), cfg);
  const auto t = r.trace.column("t");
  ASSERT_EQ(t.size(), 5u);
  EXPECT_EQ(t[0], 0.0);
  EXPECT_NEAR(t[1], 0.25, 1e-14);
  EXPECT_NEAR(t[2], 0.333, 1e-14);
  EXPECT_NEAR(t[3], 0.8, 1e-14);
  EXPECT_NEAR(t[4], 1.0, 1e-14);
}

TEST(Evolve, RejectsBadConfiguration) {
  const auto g = SpectralGrid::create(1, 16, 4.0);
  StepperConfig cfg;
  cfg.dt = 0.0;
  EXPECT_THROW(evolve(params(1, 0, 0), pair_of(g, 1, 1), cfg), InvalidArgument);
  cfg.dt = 0.1;
  cfg.t_end = 0.0;
  EXPECT_THROW(evolve(params(1, 0, 0), pair_of(g, 1, 1), cfg), InvalidArgument);
  cfg.t_end = 1.0;
  EXPECT_THROW(evolve(params(1, -1, 0), pair_of(g, 1, 1), cfg), InvalidArgument);
}

TEST(Evolve, FlagsBoundaryMass) {
  const auto g = SpectralGrid::create(1, 64, 4.0);
  StepperConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.1;
  const RunResult r = evolve(params(1, 0, 0), pair_of(g, 1.0, 1.0, 2.5), cfg);
  EXPECT_EQ(r.run.status, RunStatus::Finished);
  EXPECT_TRUE(r.run.truncation_unreliable);
  EXPECT_GT(r.run.max_boundary_fraction, 1e-10);
}

TEST(Evolve, AdaptiveStepKeepsEnergyDriftSmall) {
  const auto g = SpectralGrid::create(1, 128, 12.0);
  const SystemParams p = params(1, 1, 1);
  StepperConfig cfg;
  cfg.dt = 0.05;
  cfg.t_end = 0.5;
  cfg.adapt = true;
  cfg.energy_tol = 1e-7;
  const FieldPair s = pair_of(g, 2.0, 2.0, 1.0, 1.0);
  const RunResult r = evolve(p, s, cfg);
  ASSERT_EQ(r.run.status, RunStatus::Finished);
  EXPECT_GT(r.run.step_count, 10u);
  const double e0 = conserved_set(p, s).E_w;
  EXPECT_LT(std::abs(conserved_set(p, r.run.state).E_w - e0) / e0, 1e-7 * static_cast<double>(r.run.step_count));
}

TEST(Evolve, EnergyDriftIsSecondOrder) {
  const auto g = SpectralGrid::create(1, 128, 12.0);
  const SystemParams p = params(1, 1, 1);
  const FieldPair s = pair_of(g, 1.5, 1.5, 1.0, 1.0);
  const double e0 = conserved_set(p, s).E_w;
  std::vector<double> dts{0.02, 0.01, 0.005}, drift;
  for (double dt : dts) {
    StepperConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 1.0;
    cfg.sample_every = 0;
    const RunResult r = evolve(p, s, cfg, {functional_hook(p, {})});
    double worst = 0.0;
    for (double e : r.trace.column("E_w")) worst = std::max(worst, std::abs(e - e0) / e0);
    drift.push_back(worst);
  }
  EXPECT_NEAR(slope(dts, drift), 2.0, 0.3);
}

TEST(Evolve, BitIdenticalAcrossWorkerCounts) {
  const auto g = SpectralGrid::create(3, 48, 6.0);
  const SystemParams p = params(3, 1, 1);
  const FieldPair s = pair_of(g, 1.0, 1.0, 1.0, 1.0);
  StepperConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.03;
  auto run = [&](std::size_t threads) {
    parallel::set_thread_count(threads);
    return evolve(p, s, cfg, {functional_hook(p, {})});
  };
  const RunResult a = run(1), b = run(4);
  parallel::set_thread_count(0);
  ASSERT_EQ(a.trace.rows(), b.trace.rows());
  for (const std::string& c : a.trace.columns())
    for (std::size_t i = 0; i < a.trace.rows(); ++i) EXPECT_EQ(a.trace.at(i, c), b.trace.at(i, c)) << c;
}
