// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wnls::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  /// Measured quantities against their thresholds.
  std::string detail;
  double seconds = 0.0;
};

/// Criterion numbers 1..10.
std::vector<int> criterion_ids();
std::string_view criterion_title(int id);

/// Runs one criterion; never throws (exceptions become a failing result).
CriterionResult run_criterion(int id);

/// "PASS [n] title: detail (t s)" or "FAIL ...".
std::string format_line(const CriterionResult& r);

/// Suite names: "all", "fast" (criteria 1, 7, 10) or a single number.
/// Prints one line per criterion to `log` as it completes. Throws
/// std::invalid_argument for an unknown suite name.
std::vector<CriterionResult> run_suite(std::string_view suite, std::ostream& log);

}  // namespace wnls::acceptance
