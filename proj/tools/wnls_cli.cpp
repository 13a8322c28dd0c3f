// SPDX-License-Identifier: Apache-2.0
//
// wnls run <cfg> | scan <cfg> | verify <suite> | inspect <checkpoint>
#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "acceptance.hpp"
#include "wnls/checkpoint.hpp"
#include "wnls/error.hpp"
#include "wnls/experiment.hpp"
#include "wnls/spectral.hpp"

namespace {

bool read_file(const std::string& path, std::string& text) {
  std::ifstream is(path);
  if (!is) return false;
  std::ostringstream ss;
  ss << is.rdbuf();
  text = ss.str();
  return true;
}

int load_config(const std::string& path, const std::string& out_dir, wnls::ExperimentConfig& cfg, std::string& text) {
  if (!read_file(path, text)) {
    std::cerr << "cannot read config '" << path << "'\n";
    return wnls::kExitIoError;
  }
  wnls::ParseResult parsed = wnls::parse_config(text);
  if (!parsed.ok()) {
    std::cerr << path << ":\n" << wnls::format_errors(parsed.errors);
    return wnls::kExitConfigError;
  }
  cfg = parsed.config;
  if (!out_dir.empty()) cfg.output.dir = out_dir;
  return wnls::kExitOk;
}

int cmd_run(const std::string& path, const std::string& out_dir) {
  wnls::ExperimentConfig cfg;
  std::string text;
  if (int rc = load_config(path, out_dir, cfg, text)) return rc;
  if (cfg.scenario.kind == "scan") {
    std::cerr << "config describes a scan; use `wnls scan`\n";
    return wnls::kExitConfigError;
  }
  const wnls::ExperimentOutcome o = wnls::run_experiment(cfg, text);
  const wnls::RunState& run = o.result.run;
  std::cout << "status: " << wnls::to_string(run.status) << "  t* = " << wnls::format_double(run.t_star)
            << "  steps = " << run.step_count << '\n';
  if (!run.divergence_reason.empty()) std::cout << "divergence: " << run.divergence_reason << '\n';
  std::cout << "max E_w drift: " << wnls::format_double(o.max_energy_drift) << '\n';
  if (run.truncation_unreliable)
    std::cout << "warning: boundary mass reached " << wnls::format_double(run.max_boundary_fraction)
              << "; periodic truncation unreliable\n";
  if (o.certificate) {
    const auto& c = *o.certificate;
    std::cout << "blowup criterion: " << (c.criterion_met ? "CriterionMet" : "CriterionNotMet")
              << "  E_tilde = " << wnls::format_double(c.E_tilde) << "  V'(0) = " << wnls::format_double(c.V0p);
    if (c.envelope_root) std::cout << "  envelope root = " << wnls::format_double(*c.envelope_root);
    std::cout << '\n';
  }
  if (o.scattering)
    std::cout << "scattering: " << (o.scattering->converged ? "Converged" : "NotConverged") << " (tol "
              << wnls::format_double(o.scattering->tol) << ")\n";
  if (!o.message.empty()) std::cout << o.message << '\n';
  std::cout << "artifacts in " << cfg.output.dir << '\n';
  return o.exit_code;
}

int cmd_scan(const std::string& path, const std::string& out_dir) {
  wnls::ExperimentConfig cfg;
  std::string text;
  if (int rc = load_config(path, out_dir, cfg, text)) return rc;
  if (cfg.scan_cells.empty()) {
    std::cerr << "scan.cells is empty\n";
    return wnls::kExitConfigError;
  }
  try {
    const auto rows = wnls::phase_scan(cfg);
    wnls::write_scan_csv(rows, std::cout);
  } catch (const wnls::IoError& e) {
    std::cerr << e.what() << '\n';
    return wnls::kExitIoError;
  }
  return wnls::kExitOk;
}

int cmd_verify(const std::string& suite) {
  try {
    const auto results = wnls::acceptance::run_suite(suite, std::cout);
    std::size_t passed = 0;
    for (const auto& r : results) passed += r.pass ? 1 : 0;
    std::cout << passed << "/" << results.size() << " criteria passed\n";
    return passed == results.size() ? wnls::kExitOk : wnls::kExitCheckFailed;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return wnls::kExitConfigError;
  }
}

int cmd_inspect(const std::string& path) {
  try {
    const wnls::Checkpoint c = wnls::load_checkpoint(path);
    const wnls::SpectralGrid& g = c.state.grid();
    std::cout << "version " << wnls::kCheckpointVersion << ", d = " << g.dim() << ", n = " << g.n()
              << ", L = " << wnls::format_double(g.half_width()) << ", t = " << wnls::format_double(c.state.t) << '\n'
              << "alpha = " << wnls::format_double(c.params.alpha) << ", beta = " << wnls::format_double(c.params.beta)
              << ", lambda = " << wnls::format_double(c.params.lambda) << ", mu = " << wnls::format_double(c.params.mu)
              << '\n'
              << "mass_u = " << wnls::format_double(wnls::mass(c.state.u))
              << ", mass_v = " << wnls::format_double(wnls::mass(c.state.v)) << '\n'
              << "|u|_H1 = " << wnls::format_double(wnls::norm(c.state.u, wnls::Norm::h1()))
              << ", |v|_H1 = " << wnls::format_double(wnls::norm(c.state.v, wnls::Norm::h1())) << '\n';
    return wnls::kExitOk;
  } catch (const wnls::IoError& e) {
    std::cerr << e.what() << '\n';
    return wnls::kExitIoError;
  } catch (const wnls::FormatError& e) {
    std::cerr << "malformed checkpoint: " << e.what() << '\n';
    return wnls::kExitIoError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-step simulator and diagnostics for coupled weighted-gradient Schroedinger systems"};
  app.require_subcommand(1);
  std::string cfg_path, out_dir, suite, ckpt;

  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("config", cfg_path, "Configuration file")->required();
  run->add_option("-o,--out", out_dir, "Override output.dir");

  auto* scan = app.add_subcommand("scan", "Run a phase scan over (alpha, beta) cells");
  scan->add_option("config", cfg_path, "Configuration file")->required();
  scan->add_option("-o,--out", out_dir, "Override output.dir");

  auto* verify = app.add_subcommand("verify", "Run acceptance criteria (all, fast, or 1-10)");
  verify->add_option("suite", suite, "Suite name")->required();

  auto* inspect = app.add_subcommand("inspect", "Print checkpoint header and norms");
  inspect->add_option("checkpoint", ckpt, "Checkpoint file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : wnls::kExitConfigError;
  }

  if (*run) return cmd_run(cfg_path, out_dir);
  if (*scan) return cmd_scan(cfg_path, out_dir);
  if (*verify) return cmd_verify(suite);
  if (*inspect) return cmd_inspect(ckpt);
  return wnls::kExitConfigError;
}
