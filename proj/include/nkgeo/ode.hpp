#pragma once

#include <functional>
#include <vector>

namespace nkgeo {

using OdeState = std::vector<double>;
/// dxdt = f(x, t).
using OdeRhs = std::function<void(const OdeState& x, OdeState& dxdt, double t)>;

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
  /// Components with index below `guarded` abort the run with IntegrationFailure past this bound.
  double blowup = 1e6;
  std::size_t guarded = static_cast<std::size_t>(-1);
};

/// Adaptive Dormand-Prince 5(4). Returns the state at each of `times` (monotone, starting
/// anywhere after or at t0 in the direction of travel, repeats allowed). Throws IntegrationFailure
/// on blow-up and DomainError for non-monotone times.
std::vector<OdeState> integrate_at(const OdeRhs& f, OdeState x0, double t0, const std::vector<double>& times,
                                   const OdeOptions& options = {});

OdeState integrate_to(const OdeRhs& f, OdeState x0, double t0, double t1, const OdeOptions& options = {});

}  // namespace nkgeo
