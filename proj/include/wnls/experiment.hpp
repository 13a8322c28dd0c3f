// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wnls/asymptotics.hpp"
#include "wnls/config.hpp"
#include "wnls/propagator.hpp"

namespace wnls {

inline constexpr std::string_view kVersion = "0.1.0";

/// Process exit codes of the lab runner.
enum ExitCode : int {
  kExitOk = 0,
  /// A scenario expectation (energy drift bound, expected blowup) was not met.
  kExitCheckFailed = 1,
  kExitConfigError = 2,
  kExitUnexpectedDivergence = 3,
  kExitIoError = 4,
};

struct ExperimentOutcome {
  int exit_code = kExitOk;
  RunResult result;
  std::optional<BlowupCertificate> certificate;
  std::optional<ScatteringReport> scattering;
  /// max_t |E_w(t) - E_w(0)| / |E_w(0)| (0 when E_w(0) = 0).
  double max_energy_drift = 0.0;
  std::string message;
};

/// Initial state described by the config.
FieldPair build_initial_state(const ExperimentConfig& cfg);

/// Evolves the configured experiment and writes trace.csv / trace.json,
/// manifest.json, plot.gp and optional checkpoints into cfg.output.dir.
/// `config_text` is echoed into the manifest (the canonical form is used when empty).
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const std::string& config_text = "");

struct ScanRow {
  double alpha = 0.0;
  double beta = 0.0;
  RegimeLabel regime = RegimeLabel::OutsidePaperScope;
  double s_c = 0.0;
  /// "global-bounded", "diverged" or "inconclusive".
  std::string outcome;
  double max_h1 = 0.0;
  double final_energy_drift = 0.0;
  /// H1 bound implied by conservation of E_w (defocusing only; NaN otherwise).
  double energy_bound = 0.0;
  std::string note;
};

/// Runs every scan cell (alpha, beta) with the base config, each into
/// <dir>/cell_<i>, and writes <dir>/scan.csv. Failures are recorded per cell.
std::vector<ScanRow> phase_scan(const ExperimentConfig& base);

void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& os);

}  // namespace wnls
