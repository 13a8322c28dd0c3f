// SPDX-License-Identifier: Apache-2.0
#include "wnls/asymptotics.hpp"

#include <cmath>

#include "wnls/error.hpp"
#include "wnls/spectral.hpp"

namespace wnls {
namespace {

Field difference(const Field& a, const Field& b) {
  Field d(a.grid);
  for (std::size_t i = 0; i < d.size(); ++i) d.data[i] = a.data[i] - b.data[i];
  return d;
}

double measure(const Field& f, ScatteringNorm kind, double s) {
  switch (kind) {
    case ScatteringNorm::H1: return norm(f, Norm::h1());
    case ScatteringNorm::Sigma: return norm(f, Norm::sigma());
    case ScatteringNorm::HsDot: return norm(f, Norm::hs_dot(s));
  }
  return 0.0;
}

}  // namespace

FieldPair pullback(const FieldPair& s) {
  FieldPair out = s;
  if (s.t != 0.0) {
    apply_free_propagator_inplace(out.u, -s.t);
    apply_free_propagator_inplace(out.v, -s.t);
  }
  return out;
}

DiagnosticHook PullbackRecorder::hook() {
  auto st = state_;
  return [st](const FieldPair& s, const SampleInfo&, DiagnosticsTrace::Row&) { st->snapshots.push_back(pullback(s)); };
}

ScatteringReport scattering_extract(const std::vector<FieldPair>& pulled, ScatteringNorm kind, double tol,
                                    std::size_t k, double s) {
  if (k == 0) throw InvalidArgument("need k >= 1 increments");
  if (pulled.size() < k + 1) throw NotEnoughData("scattering verdict needs at least k+1 pullback snapshots");
  ScatteringReport rep;
  rep.norm_kind = kind;
  rep.s = s;
  rep.tol = tol;
  for (std::size_t j = 1; j < pulled.size(); ++j) {
    const FieldPair& a = pulled[j - 1];
    const FieldPair& b = pulled[j];
    const double inc = measure(difference(b.u, a.u), kind, s) + measure(difference(b.v, a.v), kind, s);
    rep.cauchy_tail.push_back({a.t, b.t, inc});
  }
  rep.u_plus = pulled.back().u;
  rep.v_plus = pulled.back().v;
  const std::size_t m = rep.cauchy_tail.size();
  rep.converged = true;
  rep.monotone_tail = true;
  for (std::size_t j = m - k; j < m; ++j) {
    if (!(rep.cauchy_tail[j].increment < tol)) rep.converged = false;
    if (j > m - k && !(rep.cauchy_tail[j].increment < rep.cauchy_tail[j - 1].increment)) rep.monotone_tail = false;
  }
  return rep;
}

double sc_norm_monitor(const SystemParams& p, const FieldPair& s) {
  const double s_c = classify_regime(p).s_c;
  if (s_c < 0.0) throw InvalidArgument("critical regularity is negative");
  return norm(s.u, Norm::hs_dot(s_c)) + norm(s.v, Norm::hs_dot(s_c));
}

BlowupCertificate blowup_certify(const SystemParams& p, const FieldPair& s0, const DiagnosticsTrace& trace) {
  if (!(p.lambda < 0.0 && p.mu < 0.0)) throw NotFocusing("blowup certification needs lambda < 0 and mu < 0");
  const bool d3 = p.d == 3 && p.alpha + p.beta <= 2.0;
  const bool d4 = p.d == 4 && p.alpha == 0.0 && p.beta == 0.0;
  if (!d3 && !d4) throw UnsupportedDimension("blowup certification covers d = 3 with alpha+beta <= 2 or d = 4 at (0,0)");

  BlowupCertificate cert;
  cert.E_tilde = focusing_energy(p, s0);
  std::tie(cert.V0, cert.V0p) = focusing_variance(p, s0);
  cert.criterion_met = cert.E_tilde <= 0.0 && cert.V0p < 0.0;

  const double a = 4.0 * cert.E_tilde, b = cert.V0p, c = cert.V0;
  if (a != 0.0) {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double r1 = (-b - sq) / (2.0 * a), r2 = (-b + sq) / (2.0 * a);
      double best = -1.0;
      for (double r : {r1, r2})
        if (r > 0.0 && (best < 0.0 || r < best)) best = r;
      if (best > 0.0) cert.envelope_root = best;
    }
  } else if (b < 0.0) {
    cert.envelope_root = -c / b;
  }

  const double coeff = 2.0 * p.d * (p.alpha + p.beta + 2.0) - 8.0;
  const std::vector<double> t = trace.column("t");
  const std::vector<double> G = trace.column("int_G");
  const bool has_e = trace.has_column("E_tilde");
  const std::vector<double> E = has_e ? trace.column("E_tilde") : std::vector<double>(t.size(), cert.E_tilde);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double vpp = 8.0 * E[i] - coeff * G[i];
    cert.concavity_log.emplace_back(t[i], vpp);
    if (!(vpp <= 8.0 * cert.E_tilde)) cert.concavity_holds = false;
  }
  return cert;
}

DecayReport decay_monitor(const DiagnosticsTrace& trace, double t_min) {
  DecayReport rep;
  const std::vector<double> t = trace.column("t");
  const std::vector<double> G = trace.column("int_G");
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= t_min) rep.envelope.emplace_back(t[i], t[i] * t[i] * G[i]);
  if (rep.envelope.empty()) return rep;
  const std::size_t half = rep.envelope.size() / 2;
  double sup_first = 0.0;
  for (std::size_t i = 0; i < rep.envelope.size(); ++i) {
    rep.sup = std::max(rep.sup, rep.envelope[i].second);
    if (i < std::max<std::size_t>(half, 1)) sup_first = rep.sup;
  }
  rep.stabilized = rep.sup <= sup_first * 1.01 || rep.sup == 0.0;
  return rep;
}

std::vector<double> geometric_times(double start, double ratio, std::size_t count) {
  if (!(start > 0.0) || !(ratio > 1.0)) throw InvalidArgument("geometric times need start > 0 and ratio > 1");
  std::vector<double> out;
  double t = start;
  for (std::size_t j = 0; j < count; ++j) {
    out.push_back(t);
    t *= ratio;
  }
  return out;
}

}  // namespace wnls
