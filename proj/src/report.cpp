#include "nkgeo/report.hpp"

#include <algorithm>

#include "nkgeo/error.hpp"

namespace nkgeo {

CheckResult to_check(std::string name, const ZeroTestResult& r, double tolerance) {
  CheckResult c;
  c.name = std::move(name);
  c.symbolic_zero = r.verdict == Verdict::SymbolicZero;
  c.pass = r.zero();
  c.max_residual = r.verdict == Verdict::Nonzero ? std::max(r.max_abs, std::abs(r.value)) : r.max_abs;
  c.tolerance = tolerance;
  c.points = r.samples;
  c.residuals = r.residuals;
  c.witness = r.witness;
  return c;
}

CheckResult to_nonzero_check(std::string name, const ZeroTestResult& r, double tolerance) {
  CheckResult c = to_check(std::move(name), r, tolerance);
  c.pass = !r.zero();
  c.note = c.pass ? "nonzero as required" : "vanishes identically";
  return c;
}

CheckResult exact_check(std::string name, bool pass, std::string note) {
  CheckResult c;
  c.name = std::move(name);
  c.pass = pass;
  c.symbolic_zero = pass;
  c.note = std::move(note);
  return c;
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass || c.informational; });
}

const CheckResult& Report::operator[](const std::string& name) const {
  for (const CheckResult& c : checks)
    if (c.name == name) return c;
  throw DomainError("no check named '" + name + "'");
}

}  // namespace nkgeo
