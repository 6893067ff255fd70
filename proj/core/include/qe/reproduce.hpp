#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qe {

struct ReproductionRow {
  std::string label;
  double computed = 0.0;
  double expected = 0.0;
  double error = 0.0;  ///< relative, max(1, |expected|) in the denominator
  double tolerance = 0.0;
  bool pass = false;
};

struct ReproductionTable {
  std::string name;
  std::vector<ReproductionRow> rows;
  bool all_pass() const noexcept;
};

/// no-blowdown-length, hall-interval-formula, blowdown-consistency.
const std::vector<std::string>& reproduction_cases();

/// Throws qe::Error(InvalidSpec) for an unknown case name.
ReproductionTable run_reproduce(std::string_view name);

/// Right-end position for blowdowns at both ends written out directly:
/// s* = sqrt(k0 (4(n1+1) + k0) + 4(nr+1)^2) - k0 + 2(nr+1).
double literal_interval_length(double kappa0, int n_left, int n_right) noexcept;

}  // namespace qe
