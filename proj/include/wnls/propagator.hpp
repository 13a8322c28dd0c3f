// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "wnls/hooks.hpp"
#include "wnls/model.hpp"
#include "wnls/trace.hpp"

namespace wnls {

struct StepperConfig {
  double dt = 1e-3;
  /// Sign selects forward or backward evolution.
  double t_end = 1.0;
  /// Halve the step when the single-step relative E_w change exceeds energy_tol.
  bool adapt = false;
  double energy_tol = 1e-6;
  double min_dt = 1e-8;
  /// Divergence when |u|_H1 + |v|_H1 exceeds this multiple of its initial value.
  double blowup_h1_threshold = 1e6;
  /// Divergence when this fraction of the spectral mass sits above 2/3 of k_max.
  double spectral_tail_tol = 1e-2;
  /// Runs whose boundary mass fraction exceeds this are flagged, not stopped.
  double boundary_mass_tol = 1e-10;
  /// Sample every k steps (0: only initial, final and sample_times).
  std::size_t sample_every = 1;
  /// Additional sample times; steps are shortened to land on them exactly.
  std::vector<double> sample_times;
  /// Run even if the nonlinearity fails the weighted-gradient check.
  bool allow_non_gradient = false;
};

enum class RunStatus { Running, Finished, DivergenceDetected };

std::string_view to_string(RunStatus s);

struct RunState {
  FieldPair state;
  std::size_t step_count = 0;
  RunStatus status = RunStatus::Running;
  /// Last reliable time when status is DivergenceDetected.
  double t_star = 0.0;
  std::string divergence_reason;
  bool truncation_unreliable = false;
  double max_boundary_fraction = 0.0;
};

struct RunResult {
  RunState run;
  DiagnosticsTrace trace;
  /// (t, |u|_H1 + |v|_H1) after every accepted step.
  std::vector<std::pair<double, double>> h1_history;
};

/// Strang split-step integrator with reusable work buffers. The nonlinear
/// substep is the exact phase rotation (moduli are invariant under it); the
/// linear substep is the exact free flow.
class SplitStepper {
 public:
  SplitStepper(const SystemParams& p, GridPtr grid);

  /// Advances s in place by dt (either sign). Throws DivergedField on
  /// non-finite output.
  void step(FieldPair& s, double dt);

  /// |u|_H1 + |v|_H1 and spectral tail fraction measured during the last linear substep.
  double last_h1_sum() const noexcept { return h1_sum_; }
  double last_tail_fraction() const noexcept { return tail_fraction_; }

 private:
  void nonlinear(FieldPair& s, double tau);
  void linear(FieldPair& s, double dt);
  void set_multiplier(double dt);

  SystemParams p_;
  GridPtr grid_;
  RealBuffer w_, z_, ru_, rv_, cos_, sin_;
  ComplexBuffer multiplier_;
  double multiplier_dt_ = 0.0;
  bool multiplier_ready_ = false;
  double h1_sum_ = 0.0;
  double tail_fraction_ = 0.0;
};

FieldPair strang_step(const SystemParams& p, const FieldPair& s, double dt);

/// Classical RK4 on u_t = i Lap u - i f, v_t = i Lap v - i g (spectral Laplacian).
FieldPair rk4_oracle_step(const SystemParams& p, const FieldPair& s, double dt);

/// Integrates s0 to cfg.t_end, calling hooks at the configured samples.
/// Base columns: t, step, dt, h1_sum, boundary_fraction.
RunResult evolve(const SystemParams& p, const FieldPair& s0, const StepperConfig& cfg,
                 const std::vector<DiagnosticHook>& hooks = {});

enum class Integrator { Strang, RK4 };

struct ConvergenceReport {
  std::vector<double> dts;
  std::vector<double> errors;
  /// Least-squares slope of log(error) against log(dt); NaN when exact.
  double order = 0.0;
  /// All errors at round-off (below 1e-12 relative).
  bool exact = false;
  double reference_dt = 0.0;
};

/// Errors are relative L2 distances at t_end against the exact free flow for
/// the linear problem and otherwise against RK4 at a finer step.
ConvergenceReport convergence_order(const SystemParams& p, const FieldPair& s0, double t_end,
                                    const std::vector<double>& dts, Integrator integrator = Integrator::Strang);

/// Fixed-step integration helper used by the convergence study.
FieldPair integrate(const SystemParams& p, const FieldPair& s0, double t_end, double dt, Integrator integrator);

/// sqrt(|a.u-b.u|^2 + |a.v-b.v|^2) / sqrt(|b.u|^2 + |b.v|^2)
double relative_distance(const FieldPair& a, const FieldPair& b);

}  // namespace wnls
