// SPDX-License-Identifier: Apache-2.0
#include "wnls/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wnls/error.hpp"
#include "wnls/functionals.hpp"
#include "wnls/kernels.hpp"
#include "wnls/parallel.hpp"
#include "wnls/spectral.hpp"

namespace wnls {
namespace {

const simd::KernelTable& K() { return simd::active_kernels(); }

double spectral_sum(const ComplexBuffer& a, const RealBuffer* w) {
  return parallel::chunked_sum(a.size(), [&](std::size_t b, std::size_t e) {
    return w ? K().weighted_abs2(a.data() + b, w->data() + b, e - b) : K().sum_abs2(a.data() + b, e - b);
  });
}

double h1_sum(const FieldPair& s) { return norm(s.u, Norm::h1()) + norm(s.v, Norm::h1()); }

double tail_fraction(const FieldPair& s) {
  const RealBuffer& mask = s.grid().tail_mask();
  double tail = 0.0, total = 0.0;
  for (const Field* f : {&s.u, &s.v}) {
    const ComplexBuffer spec = raw_spectrum(*f);
    tail += spectral_sum(spec, &mask);
    total += spectral_sum(spec, nullptr);
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Running: return "Running";
    case RunStatus::Finished: return "Finished";
    case RunStatus::DivergenceDetected: return "DivergenceDetected";
  }
  return "?";
}

SplitStepper::SplitStepper(const SystemParams& p, GridPtr grid) : p_(p), grid_(std::move(grid)) {
  const std::size_t n = grid_->size();
  w_.resize(n);
  z_.resize(n);
  ru_.resize(n);
  rv_.resize(n);
  cos_.resize(n);
  sin_.resize(n);
  multiplier_.resize(n);
}

void SplitStepper::set_multiplier(double dt) {
  if (multiplier_ready_ && multiplier_dt_ == dt) return;
  const RealBuffer& k2 = grid_->k_squared();
  const double inv = 1.0 / static_cast<double>(grid_->size());
  for (std::size_t i = 0; i < multiplier_.size(); ++i) {
    const double phase = k2[i] * dt;
    multiplier_[i] = cplx(std::cos(phase) * inv, -std::sin(phase) * inv);
  }
  multiplier_dt_ = dt;
  multiplier_ready_ = true;
}

void SplitStepper::nonlinear(FieldPair& s, double tau) {
  cplx* u = s.u.data.data();
  cplx* v = s.v.data.data();
  parallel::for_chunks(grid_->size(), [&](std::size_t b, std::size_t e) {
    const std::size_t m = e - b;
    K().abs2(u + b, w_.data() + b, m);
    K().abs2(v + b, z_.data() + b, m);
    phase_rates(p_, w_.data() + b, z_.data() + b, ru_.data() + b, rv_.data() + b, m);
    for (std::size_t i = b; i < e; ++i) {
      const double th = ru_[i] * tau;
      cos_[i] = std::cos(th);
      sin_[i] = std::sin(th);
    }
    K().rotate(u + b, cos_.data() + b, sin_.data() + b, m);
    for (std::size_t i = b; i < e; ++i) {
      const double th = rv_[i] * tau;
      cos_[i] = std::cos(th);
      sin_[i] = std::sin(th);
    }
    K().rotate(v + b, cos_.data() + b, sin_.data() + b, m);
  });
}

void SplitStepper::linear(FieldPair& s, double dt) {
  set_multiplier(dt);
  const SpectralGrid& g = *grid_;
  const double scale = g.cell_volume() / static_cast<double>(g.size());
  double h1 = 0.0, total = 0.0, tail = 0.0;
  for (Field* f : {&s.u, &s.v}) {
    g.fft().forward(f->data.data());
    const double m = spectral_sum(f->data, nullptr);
    const double k = spectral_sum(f->data, &g.k_squared());
    tail += spectral_sum(f->data, &g.tail_mask());
    total += m;
    h1 += std::sqrt(scale * (m + k));
    parallel::for_chunks(f->size(), [&](std::size_t b, std::size_t e) {
      K().cmul(f->data.data() + b, multiplier_.data() + b, e - b);
    });
    g.fft().backward_raw(f->data.data());
  }
  h1_sum_ = h1;
  tail_fraction_ = total > 0.0 ? tail / total : 0.0;
}

void SplitStepper::step(FieldPair& s, double dt) {
  if (dt == 0.0) return;
  const bool nl = !p_.linear();
  if (nl) nonlinear(s, 0.5 * dt);
  linear(s, dt);
  if (nl) nonlinear(s, 0.5 * dt);
  s.t += dt;
  if (!std::isfinite(h1_sum_) || !s.u.all_finite() || !s.v.all_finite()) {
    s.u.diverged = s.v.diverged = true;
    throw DivergedField("split step produced non-finite samples");
  }
}

FieldPair strang_step(const SystemParams& p, const FieldPair& s, double dt) {
  require_finite(s.u, "strang_step");
  require_finite(s.v, "strang_step");
  FieldPair out = s;
  SplitStepper stepper(p, s.u.grid);
  stepper.step(out, dt);
  return out;
}

FieldPair rk4_oracle_step(const SystemParams& p, const FieldPair& s, double dt) {
  require_finite(s.u, "rk4_oracle_step");
  require_finite(s.v, "rk4_oracle_step");
  if (dt == 0.0) return s;
  const auto rhs = [&p](const FieldPair& x) {
    FieldPair out(x.u.grid, x.t);
    const Field lu = laplacian(x.u);
    const Field lv = laplacian(x.v);
    const cplx I(0.0, 1.0);
    if (p.linear()) {
      for (std::size_t i = 0; i < out.u.size(); ++i) {
        out.u.data[i] = I * lu.data[i];
        out.v.data[i] = I * lv.data[i];
      }
      return out;
    }
    const FieldPair nl = nonlinearity(p, x);
    for (std::size_t i = 0; i < out.u.size(); ++i) {
      out.u.data[i] = I * (lu.data[i] - nl.u.data[i]);
      out.v.data[i] = I * (lv.data[i] - nl.v.data[i]);
    }
    return out;
  };
  const auto axpy = [](const FieldPair& x, double h, const FieldPair& k) {
    FieldPair out = x;
    for (std::size_t i = 0; i < out.u.size(); ++i) {
      out.u.data[i] += h * k.u.data[i];
      out.v.data[i] += h * k.v.data[i];
    }
    return out;
  };
  const FieldPair k1 = rhs(s);
  const FieldPair k2 = rhs(axpy(s, 0.5 * dt, k1));
  const FieldPair k3 = rhs(axpy(s, 0.5 * dt, k2));
  const FieldPair k4 = rhs(axpy(s, dt, k3));
  FieldPair out = s;
  for (std::size_t i = 0; i < out.u.size(); ++i) {
    out.u.data[i] += dt / 6.0 * (k1.u.data[i] + 2.0 * k2.u.data[i] + 2.0 * k3.u.data[i] + k4.u.data[i]);
    out.v.data[i] += dt / 6.0 * (k1.v.data[i] + 2.0 * k2.v.data[i] + 2.0 * k3.v.data[i] + k4.v.data[i]);
  }
  out.t = s.t + dt;
  if (!out.u.all_finite() || !out.v.all_finite()) throw DivergedField("RK4 step produced non-finite samples");
  return out;
}

RunResult evolve(const SystemParams& p, const FieldPair& s0, const StepperConfig& cfg,
                 const std::vector<DiagnosticHook>& hooks) {
  p.validate();
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InvalidArgument("time step must be positive");
  if (cfg.t_end == 0.0 || !std::isfinite(cfg.t_end)) throw InvalidArgument("t_end must be finite and nonzero");
  if (!p.linear() && !cfg.allow_non_gradient && !check_weighted_gradient(monomial_pair(p)).yes)
    throw InvalidArgument("nonlinearity has no weighted-gradient structure");
  require_finite(s0.u, "evolve");
  require_finite(s0.v, "evolve");

  const double dir = cfg.t_end > 0.0 ? 1.0 : -1.0;
  const double t_final = s0.t + cfg.t_end;
  std::vector<double> targets;
  for (double t : cfg.sample_times) {
    const double rel = (t - s0.t) * dir;
    if (rel > 0.0 && rel < std::abs(cfg.t_end)) targets.push_back(t);
  }
  std::sort(targets.begin(), targets.end(), [dir](double a, double b) { return a * dir < b * dir; });
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  std::size_t next_target = 0;

  RunResult result;
  RunState& run = result.run;
  run.state = s0;
  FieldPair& s = run.state;
  const double h1_initial = h1_sum(s);
  const double h1_limit = cfg.blowup_h1_threshold * h1_initial;
  // The free flow leaves |spectrum| unchanged, so the tail test only applies to
  // nonlinear runs, relative to what the initial data already carries.
  const bool check_tail = !p.linear();
  const double tail_limit = check_tail ? std::max(cfg.spectral_tail_tol, 2.0 * tail_fraction(s)) : 0.0;

  SplitStepper stepper(p, s.u.grid);
  std::size_t last_sampled_step = 0;
  auto sample = [&](const SampleInfo& info) {
    DiagnosticsTrace::Row row;
    row.set("t", info.t);
    row.set("step", static_cast<double>(info.step));
    row.set("dt", info.dt);
    row.set("h1_sum", info.h1_sum);
    row.set("boundary_fraction", info.boundary_fraction);
    for (const auto& h : hooks) h(s, info, row);
    result.trace.append(row);
    last_sampled_step = info.step;
  };

  double bf = boundary_fraction(s);
  run.max_boundary_fraction = bf;
  run.truncation_unreliable = bf > cfg.boundary_mass_tol;
  SampleInfo info0;
  info0.t = s.t;
  info0.h1_sum = h1_initial;
  info0.boundary_fraction = bf;
  info0.initial = true;
  sample(info0);
  result.h1_history.emplace_back(s.t, h1_initial);

  double dt_cur = cfg.dt;
  double last_dt = 0.0;
  double last_h1 = h1_initial;
  FieldPair previous;
  const double eps_t = 1e-12 * std::max(1.0, std::abs(cfg.t_end));
  while ((t_final - s.t) * dir > eps_t) {
    double h = dir * dt_cur;
    bool hits_target = false;
    if (next_target < targets.size() && (targets[next_target] - s.t) * dir <= std::abs(h) + eps_t) {
      h = targets[next_target] - s.t;
      hits_target = true;
    }
    if ((t_final - s.t) * dir <= std::abs(h) + eps_t) {
      h = t_final - s.t;
      hits_target = false;
    }

    previous = s;
    double e_before = 0.0;
    if (cfg.adapt) e_before = conserved_set(p, s).E_w;
    try {
      stepper.step(s, h);
    } catch (const DivergedField&) {
      s = previous;
      run.status = RunStatus::DivergenceDetected;
      run.divergence_reason = "non-finite samples";
      break;
    }
    if (cfg.adapt) {
      const double e_after = conserved_set(p, s).E_w;
      const double drift = std::abs(e_after - e_before) / std::max(std::abs(e_before), 1e-300);
      if (drift > cfg.energy_tol && 0.5 * dt_cur >= cfg.min_dt) {
        s = previous;
        dt_cur *= 0.5;
        continue;
      }
    }
    const double h1 = stepper.last_h1_sum();
    if (h1 > h1_limit && h1_initial > 0.0) {
      s = previous;
      run.status = RunStatus::DivergenceDetected;
      run.divergence_reason = "H1 norm exceeded threshold";
      break;
    }
    if (check_tail && stepper.last_tail_fraction() > tail_limit) {
      s = previous;
      run.status = RunStatus::DivergenceDetected;
      run.divergence_reason = "spectral tail exceeded tolerance";
      break;
    }
    if (hits_target) {
      s.t = targets[next_target];
      ++next_target;
    }
    ++run.step_count;
    last_dt = h;
    last_h1 = h1;
    result.h1_history.emplace_back(s.t, h1);
    bf = boundary_fraction(s);
    run.max_boundary_fraction = std::max(run.max_boundary_fraction, bf);
    if (bf > cfg.boundary_mass_tol) run.truncation_unreliable = true;

    const bool done = (t_final - s.t) * dir <= eps_t;
    const bool cadence = cfg.sample_every > 0 && run.step_count % cfg.sample_every == 0;
    if (hits_target || cadence || done) {
      SampleInfo info;
      info.step = run.step_count;
      info.t = s.t;
      info.dt = h;
      info.h1_sum = h1;
      info.boundary_fraction = bf;
      info.final = done;
      sample(info);
    }
  }

  if (run.status == RunStatus::DivergenceDetected) {
    run.t_star = s.t;
    if (last_sampled_step != run.step_count) {
      SampleInfo info;
      info.step = run.step_count;
      info.t = s.t;
      info.dt = last_dt;
      info.h1_sum = last_h1;
      info.boundary_fraction = boundary_fraction(s);
      info.final = true;
      sample(info);
    }
  } else {
    run.status = RunStatus::Finished;
    run.t_star = s.t;
  }
  return result;
}

double relative_distance(const FieldPair& a, const FieldPair& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.u.size(); ++i) {
    num += std::norm(a.u.data[i] - b.u.data[i]) + std::norm(a.v.data[i] - b.v.data[i]);
    den += std::norm(b.u.data[i]) + std::norm(b.v.data[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

FieldPair integrate(const SystemParams& p, const FieldPair& s0, double t_end, double dt, Integrator integrator) {
  const auto steps = static_cast<std::size_t>(std::llround(std::abs(t_end) / dt));
  if (steps == 0) throw InvalidArgument("t_end shorter than one step");
  const double h = t_end / static_cast<double>(steps);
  FieldPair s = s0;
  if (integrator == Integrator::Strang) {
    SplitStepper stepper(p, s.u.grid);
    for (std::size_t k = 0; k < steps; ++k) stepper.step(s, h);
  } else {
    for (std::size_t k = 0; k < steps; ++k) s = rk4_oracle_step(p, s, h);
  }
  s.t = s0.t + t_end;
  return s;
}

ConvergenceReport convergence_order(const SystemParams& p, const FieldPair& s0, double t_end,
                                    const std::vector<double>& dts, Integrator integrator) {
  if (dts.size() < 3) throw InvalidArgument("convergence study needs at least three step sizes");
  ConvergenceReport rep;
  rep.dts = dts;
  FieldPair reference;
  if (p.linear()) {
    reference = s0;
    apply_free_propagator_inplace(reference.u, t_end);
    apply_free_propagator_inplace(reference.v, t_end);
  } else {
    const double finest = *std::min_element(dts.begin(), dts.end());
    // Explicit RK4 needs |k|^2 dt inside its stability interval.
    const double kmax2 = s0.grid().dim() * s0.grid().k_max() * s0.grid().k_max();
    rep.reference_dt = std::min(finest / 4.0, 2.0 / kmax2);
    reference = integrate(p, s0, t_end, rep.reference_dt, Integrator::RK4);
  }
  for (double dt : dts) rep.errors.push_back(relative_distance(integrate(p, s0, t_end, dt, integrator), reference));

  rep.exact = std::all_of(rep.errors.begin(), rep.errors.end(), [](double e) { return e < 1e-12; });
  if (rep.exact) {
    rep.order = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(dts.size());
  for (std::size_t i = 0; i < dts.size(); ++i) {
    const double x = std::log(dts[i]);
    const double y = std::log(std::max(rep.errors[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return rep;
}

}  // namespace wnls
