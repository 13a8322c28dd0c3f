// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "wnls/functionals.hpp"
#include "wnls/hooks.hpp"
#include "wnls/model.hpp"
#include "wnls/trace.hpp"

namespace wnls {

/// e^{-it Lap} applied to both components, t = s.t. The returned pair keeps s.t
/// as the time it was pulled back from.
FieldPair pullback(const FieldPair& s);

/// Hook that stores the pullback of every sampled state.
class PullbackRecorder {
 public:
  DiagnosticHook hook();
  const std::vector<FieldPair>& snapshots() const noexcept { return state_->snapshots; }

 private:
  struct State {
    std::vector<FieldPair> snapshots;
  };
  std::shared_ptr<State> state_ = std::make_shared<State>();
};

enum class ScatteringNorm { H1, Sigma, HsDot };

struct CauchyIncrement {
  double t = 0.0;
  double tau = 0.0;
  double increment = 0.0;
};

struct ScatteringReport {
  Field u_plus;
  Field v_plus;
  std::vector<CauchyIncrement> cauchy_tail;
  ScatteringNorm norm_kind = ScatteringNorm::H1;
  double s = 0.0;
  bool converged = false;
  double tol = 0.0;
  /// Last k increments strictly decreasing.
  bool monotone_tail = false;
};

/// Increments between consecutive pullback snapshots, measured in the chosen
/// norm of the difference (sum over the two components). For Sigma the
/// x-weighted L2 part is added to the H1 part. Converged when the last k
/// increments are below tol. Throws NotEnoughData with fewer than k+1 snapshots.
ScatteringReport scattering_extract(const std::vector<FieldPair>& pulled, ScatteringNorm kind, double tol,
                                    std::size_t k = 5, double s = 0.0);

/// |u|_{Hdot^{s_c}} + |v|_{Hdot^{s_c}}. Throws InvalidArgument when s_c < 0.
double sc_norm_monitor(const SystemParams& p, const FieldPair& s);

struct BlowupCertificate {
  double E_tilde = 0.0;
  double V0 = 0.0;
  double V0p = 0.0;
  /// (t, V'') with V'' = 8 E_tilde(t) - (2d(alpha+beta+2) - 8) int G(t).
  std::vector<std::pair<double, double>> concavity_log;
  bool criterion_met = false;
  /// Positive root of V0 + V0p t + 4 E_tilde t^2, when it exists.
  std::optional<double> envelope_root;
  /// Every logged V'' is <= 8 E_tilde (only meaningful when criterion_met).
  bool concavity_holds = true;
};

/// Focusing criterion: E_tilde <= 0 and V'(0) < 0. Reads columns t, int_G and
/// (if present) E_tilde from the trace. Throws NotFocusing unless lambda, mu < 0
/// and UnsupportedDimension unless d = 3 with alpha+beta <= 2 (or d = 4 at (0,0)).
BlowupCertificate blowup_certify(const SystemParams& p, const FieldPair& s0, const DiagnosticsTrace& trace);

struct DecayReport {
  /// (t, t^2 int G) for t >= t_min.
  std::vector<std::pair<double, double>> envelope;
  double sup = 0.0;
  /// Running sup grew by less than 1% over the second half of the window.
  bool stabilized = false;
};

/// Reads columns t and int_G.
DecayReport decay_monitor(const DiagnosticsTrace& trace, double t_min = 1.0);

/// Geometric sample times start * ratio^j, j = 0..count-1.
std::vector<double> geometric_times(double start, double ratio, std::size_t count);

}  // namespace wnls
