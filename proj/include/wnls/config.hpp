// SPDX-License-Identifier: Apache-2.0
//
// Flat "dotted.key = value" configuration. '#' starts a comment; blank lines
// are ignored. Lists are comma separated; scan cells are "alpha:beta" items.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wnls/functionals.hpp"
#include "wnls/initial_data.hpp"
#include "wnls/model.hpp"
#include "wnls/propagator.hpp"

namespace wnls {

struct GridSpec {
  int d = 3;
  std::size_t n = 32;
  double L = 16.0;
};

struct GeometricTimes {
  double start = 1.0;
  double ratio = 2.0;
  std::size_t count = 0;
};

struct DiagnosticsSpec {
  std::size_t every = 1;
  FunctionalSelection functionals;
  /// Explicit sample times, or geometric ones when `geometric` is set.
  std::vector<double> sample_times;
  std::optional<GeometricTimes> geometric;
  /// "none", "H1", "Sigma" or "Hs" (Hdot^{s_c}).
  std::string scattering_norm = "none";
  double scattering_tol = 1e-3;
  std::size_t scattering_k = 5;
};

struct ScenarioSpec {
  /// "single" or "scan".
  std::string kind = "single";
  bool expect_blowup = false;
  /// Upper bound on max_t |E_w(t) - E_w(0)| / |E_w(0)|; unchecked when absent.
  std::optional<double> max_energy_drift;
};

struct OutputSpec {
  std::string dir = "out";
  bool csv = true;
  bool json = true;
  /// Write a checkpoint every k samples (0: never).
  std::size_t checkpoint_every = 0;
  bool checkpoint_final = false;
};

struct ExperimentConfig {
  SystemParams params;
  GridSpec grid;
  InitialSpec initial_u;
  InitialSpec initial_v;
  std::uint64_t seed = 0;
  StepperConfig stepper;
  DiagnosticsSpec diagnostics;
  ScenarioSpec scenario;
  OutputSpec output;
  std::vector<std::pair<double, double>> scan_cells;
};

struct ConfigError {
  /// 1-based; 0 for file-level errors such as a missing mandatory key.
  std::size_t line = 0;
  std::string message;
};

struct ParseResult {
  ExperimentConfig config;
  std::vector<ConfigError> errors;
  bool ok() const noexcept { return errors.empty(); }
};

/// Parses and validates. Unknown keys, type mismatches and constraint
/// violations are reported with their line; params.alpha, params.beta,
/// params.lambda and params.mu are mandatory.
ParseResult parse_config(const std::string& text);

/// Canonical text form: every key, fixed order, shortest round-trip numbers.
std::string serialize_config(const ExperimentConfig& cfg);

std::string format_errors(const std::vector<ConfigError>& errors);

/// Keys accepted by parse_config, in canonical order.
const std::vector<std::string>& config_keys();

}  // namespace wnls
