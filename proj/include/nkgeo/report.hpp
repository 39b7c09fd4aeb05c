#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nkgeo/zero_test.hpp"

namespace nkgeo {

/// Outcome of one identity check. pass ⟺ symbolic_zero or max_residual < tolerance.
/// Informational rows are reported but do not enter Report::pass().
struct CheckResult {
  std::string name;
  bool pass = false;
  bool symbolic_zero = false;
  double max_residual = 0.0;
  double tolerance = 0.0;
  int points = 0;
  std::vector<double> residuals;  ///< per sampled point
  std::optional<Point> witness;
  std::string note;
  bool informational = false;
};

CheckResult to_check(std::string name, const ZeroTestResult& r, double tolerance);

/// Check that must come out nonzero (e.g. Ω^n ≠ 0); pass when r found a nonzero value.
CheckResult to_nonzero_check(std::string name, const ZeroTestResult& r, double tolerance);

/// Exact boolean check with no sampling.
CheckResult exact_check(std::string name, bool pass, std::string note = {});

struct Report {
  std::vector<CheckResult> checks;

  /// All non-informational rows pass.
  bool pass() const;
  const CheckResult& operator[](const std::string& name) const;
};

}  // namespace nkgeo
