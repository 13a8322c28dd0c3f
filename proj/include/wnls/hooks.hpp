// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

#include "wnls/grid.hpp"
#include "wnls/trace.hpp"

namespace wnls {

/// What the integrator knows about a sample when it calls the hooks.
struct SampleInfo {
  std::size_t step = 0;
  double t = 0.0;
  /// Step size that led to this sample (0 for the initial sample).
  double dt = 0.0;
  /// |u|_H1 + |v|_H1
  double h1_sum = 0.0;
  /// Fraction of total mass in the outer eighth of the box.
  double boundary_fraction = 0.0;
  bool initial = false;
  bool final = false;
};

/// Called at every sample with a read-only state; writes named values into row.
using DiagnosticHook = std::function<void(const FieldPair&, const SampleInfo&, DiagnosticsTrace::Row&)>;

}  // namespace wnls
