// SPDX-License-Identifier: Apache-2.0
#include "wnls/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>

#include "wnls/checkpoint.hpp"
#include "wnls/error.hpp"
#include "wnls/kernels.hpp"
#include "wnls/parallel.hpp"

namespace wnls {
namespace fs = std::filesystem;
namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

void write_plot_script(const fs::path& dir, const DiagnosticsTrace& trace) {
  std::ofstream os = open_out(dir / "plot.gp");
  os << "# gnuplot script; run `gnuplot plot.gp` in this directory.\n"
     << "set datafile separator ','\n"
     << "set terminal pngcairo size 900,600\n"
     << "set key autotitle columnheader\n"
     << "set xlabel 't'\n";
  for (const std::string& col : trace.columns()) {
    if (col == "t" || col == "step") continue;
    os << "set output '" << col << ".png'\n"
       << "plot 'trace.csv' using \"t\":\"" << col << "\" with linespoints\n";
  }
}

nlohmann::json certificate_json(const BlowupCertificate& c) {
  nlohmann::json j;
  j["E_tilde"] = c.E_tilde;
  j["V0"] = c.V0;
  j["V0p"] = c.V0p;
  j["verdict"] = c.criterion_met ? "CriterionMet" : "CriterionNotMet";
  j["envelope_root"] = c.envelope_root ? nlohmann::json(*c.envelope_root) : nlohmann::json(nullptr);
  j["concavity_holds"] = c.concavity_holds;
  return j;
}

nlohmann::json scattering_json(const ScatteringReport& r) {
  nlohmann::json j;
  j["verdict"] = r.converged ? "Converged" : "NotConverged";
  j["tol"] = r.tol;
  j["monotone_tail"] = r.monotone_tail;
  nlohmann::json tail = nlohmann::json::array();
  for (const auto& c : r.cauchy_tail) tail.push_back({c.t, c.tau, c.increment});
  j["cauchy_tail"] = tail;
  return j;
}

}  // namespace

FieldPair build_initial_state(const ExperimentConfig& cfg) {
  const GridPtr grid = SpectralGrid::create(cfg.grid.d, cfg.grid.n, cfg.grid.L);
  return FieldPair(make_initial(cfg.initial_u, grid, cfg.seed, 0), make_initial(cfg.initial_v, grid, cfg.seed, 1), 0.0);
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg_in, const std::string& config_text) {
  const auto wall_start = std::chrono::steady_clock::now();
  ExperimentConfig cfg = cfg_in;
  cfg.params.d = cfg.grid.d;
  ExperimentOutcome out;
  const fs::path dir(cfg.output.dir);

  try {
    fs::create_directories(dir);
  } catch (const fs::filesystem_error& e) {
    out.exit_code = kExitIoError;
    out.message = e.what();
    return out;
  }

  FieldPair s0;
  try {
    cfg.params.validate();
    s0 = build_initial_state(cfg);
  } catch (const IoError& e) {
    out.exit_code = kExitIoError;
    out.message = e.what();
    return out;
  } catch (const Error& e) {
    out.exit_code = kExitConfigError;
    out.message = e.what();
    return out;
  }

  StepperConfig stepper = cfg.stepper;
  stepper.sample_every = cfg.diagnostics.every;
  stepper.sample_times = cfg.diagnostics.sample_times;
  if (const auto& g = cfg.diagnostics.geometric) {
    const auto times = geometric_times(g->start, g->ratio, g->count);
    stepper.sample_times.insert(stepper.sample_times.end(), times.begin(), times.end());
  }

  FunctionalSelection sel = cfg.diagnostics.functionals;
  if (cfg.params.linear()) sel.focusing = false;
  if (cfg.grid.d != 3) sel.morawetz = false;
  std::vector<DiagnosticHook> hooks{functional_hook(cfg.params, sel)};

  struct Drift {
    double e0 = 0.0;
    bool have = false;
    double max = 0.0;
  };
  auto drift = std::make_shared<Drift>();
  if (sel.conserved) {
    hooks.push_back([drift](const FieldPair&, const SampleInfo&, DiagnosticsTrace::Row& row) {
      const double e = row.get("E_w").value_or(0.0);
      if (!drift->have) {
        drift->e0 = e;
        drift->have = true;
      }
      const double d = drift->e0 != 0.0 ? std::abs(e - drift->e0) / std::abs(drift->e0) : std::abs(e);
      drift->max = std::max(drift->max, d);
      row.set("E_w_drift", d);
    });
  }

  PullbackRecorder recorder;
  if (cfg.diagnostics.scattering_norm != "none") hooks.push_back(recorder.hook());

  std::vector<std::string> artifacts;
  if (cfg.output.checkpoint_every > 0) {
    auto counter = std::make_shared<std::size_t>(0);
    const SystemParams params = cfg.params;
    const std::size_t every = cfg.output.checkpoint_every;
    hooks.push_back([counter, params, every, dir](const FieldPair& s, const SampleInfo& info, DiagnosticsTrace::Row&) {
      if ((*counter)++ % every != 0) return;
      save_checkpoint((dir / ("ckpt_" + std::to_string(info.step) + ".wnls")).string(), params, s);
    });
  }

  try {
    out.result = evolve(cfg.params, s0, stepper, hooks);
  } catch (const IoError& e) {
    out.exit_code = kExitIoError;
    out.message = e.what();
    return out;
  } catch (const InvalidArgument& e) {
    out.exit_code = kExitConfigError;
    out.message = e.what();
    return out;
  }
  out.max_energy_drift = drift->max;
  const RunState& run = out.result.run;
  const bool diverged = run.status == RunStatus::DivergenceDetected;

  if (cfg.params.focusing() && sel.focusing && (cfg.grid.d == 3 && cfg.params.alpha + cfg.params.beta <= 2.0))
    out.certificate = blowup_certify(cfg.params, s0, out.result.trace);

  if (cfg.diagnostics.scattering_norm != "none") {
    const ScatteringNorm kind = cfg.diagnostics.scattering_norm == "H1"      ? ScatteringNorm::H1
                                : cfg.diagnostics.scattering_norm == "Sigma" ? ScatteringNorm::Sigma
                                                                             : ScatteringNorm::HsDot;
    const double s_c = classify_regime(cfg.params).s_c;
    try {
      out.scattering = scattering_extract(recorder.snapshots(), kind, cfg.diagnostics.scattering_tol,
                                          cfg.diagnostics.scattering_k, s_c);
    } catch (const NotEnoughData& e) {
      out.message += std::string(e.what()) + "; ";
    }
  }

  if (diverged && !cfg.scenario.expect_blowup) {
    out.exit_code = kExitUnexpectedDivergence;
    out.message += "divergence detected at t* = " + format_double(run.t_star) + " (" + run.divergence_reason + ")";
  } else if (!diverged && cfg.scenario.expect_blowup) {
    out.exit_code = kExitCheckFailed;
    out.message += "blowup expected but the run finished";
  } else if (cfg.scenario.max_energy_drift && !diverged && out.max_energy_drift > *cfg.scenario.max_energy_drift) {
    out.exit_code = kExitCheckFailed;
    out.message += "energy drift " + format_double(out.max_energy_drift) + " above bound";
  }

  try {
    if (cfg.output.csv) {
      std::ofstream os = open_out(dir / "trace.csv");
      out.result.trace.write_csv(os);
      artifacts.push_back("trace.csv");
    }
    if (cfg.output.json) {
      std::ofstream os = open_out(dir / "trace.json");
      out.result.trace.write_json(os);
      artifacts.push_back("trace.json");
    }
    if (cfg.output.checkpoint_final) {
      save_checkpoint((dir / "final.wnls").string(), cfg.params, run.state);
      artifacts.push_back("final.wnls");
    }
    write_plot_script(dir, out.result.trace);
    artifacts.push_back("plot.gp");

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    nlohmann::json m;
    m["version"] = std::string(kVersion);
    m["trace_schema_version"] = DiagnosticsTrace::kSchemaVersion;
    m["kernels"] = std::string(simd::active_kernels().name);
    m["threads"] = parallel::thread_count();
    m["seed"] = cfg.seed;
    m["wall_time_s"] = wall;
    m["status"] = std::string(to_string(run.status));
    m["t_star"] = run.t_star;
    m["divergence_reason"] = run.divergence_reason;
    m["steps"] = run.step_count;
    m["truncation_unreliable"] = run.truncation_unreliable;
    m["max_boundary_fraction"] = run.max_boundary_fraction;
    m["max_energy_drift"] = out.max_energy_drift;
    m["regime"] = std::string(to_string(classify_regime(cfg.params).label));
    m["exit_code"] = out.exit_code;
    m["message"] = out.message;
    m["config"] = serialize_config(cfg);
    if (!config_text.empty()) m["config_source"] = config_text;
    if (out.certificate) m["blowup_certificate"] = certificate_json(*out.certificate);
    if (out.scattering) m["scattering"] = scattering_json(*out.scattering);
    artifacts.push_back("manifest.json");
    m["artifacts"] = artifacts;
    std::ofstream os = open_out(dir / "manifest.json");
    os << m.dump(2) << '\n';
  } catch (const IoError& e) {
    out.exit_code = kExitIoError;
    out.message = e.what();
  }
  return out;
}

std::vector<ScanRow> phase_scan(const ExperimentConfig& base) {
  std::vector<ScanRow> rows;
  const fs::path dir(base.output.dir);
  for (std::size_t i = 0; i < base.scan_cells.size(); ++i) {
    ScanRow row;
    row.alpha = base.scan_cells[i].first;
    row.beta = base.scan_cells[i].second;
    ExperimentConfig cfg = base;
    cfg.params.alpha = row.alpha;
    cfg.params.beta = row.beta;
    cfg.params.d = cfg.grid.d;
    cfg.scenario.kind = "single";
    cfg.diagnostics.functionals.conserved = true;
    cfg.output.dir = (dir / ("cell_" + std::to_string(i))).string();
    row.energy_bound = std::numeric_limits<double>::quiet_NaN();
    try {
      const Regime reg = classify_regime(cfg.params);
      row.regime = reg.label;
      row.s_c = reg.s_c;
      if (cfg.params.defocusing() || cfg.params.linear()) {
        const FieldPair s0 = build_initial_state(cfg);
        const ConservedSet c = conserved_set(cfg.params, s0);
        const WeightPair w = derive_weights(cfg.params);
        row.energy_bound = std::sqrt(c.mass_u + c.E_w / w.c1) + std::sqrt(c.mass_v + c.E_w / w.c2);
      }
      const ExperimentOutcome o = run_experiment(cfg);
      if (o.exit_code == kExitConfigError || o.exit_code == kExitIoError) {
        row.outcome = "inconclusive";
        row.note = o.message;
      } else {
        for (double h : o.result.trace.column("h1_sum")) row.max_h1 = std::max(row.max_h1, h);
        for (const auto& [t, h] : o.result.h1_history) row.max_h1 = std::max(row.max_h1, h);
        row.final_energy_drift = o.result.trace.column("E_w_drift").back();
        if (o.result.run.status == RunStatus::DivergenceDetected) {
          row.outcome = "diverged";
        } else if (!std::isnan(row.energy_bound) && row.max_h1 <= 2.0 * row.energy_bound) {
          row.outcome = "global-bounded";
        } else {
          row.outcome = "inconclusive";
        }
      }
    } catch (const std::exception& e) {
      row.outcome = "inconclusive";
      row.note = e.what();
    }
    rows.push_back(row);
  }
  fs::create_directories(dir);
  std::ofstream os(dir / "scan.csv", std::ios::trunc);
  if (!os) throw IoError("cannot write scan table");
  write_scan_csv(rows, os);
  return rows;
}

void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& os) {
  os << "alpha,beta,regime,s_c,outcome,max_h1,final_energy_drift\n";
  for (const ScanRow& r : rows) {
    os << format_double(r.alpha) << ',' << format_double(r.beta) << ',' << to_string(r.regime) << ','
       << format_double(r.s_c) << ',' << r.outcome << ',' << format_double(r.max_h1) << ','
       << format_double(r.final_energy_drift) << '\n';
  }
}

}  // namespace wnls
