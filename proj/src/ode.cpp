#include "nkgeo/ode.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <string>

#include "nkgeo/error.hpp"

namespace nkgeo {
namespace {

namespace odeint = boost::numeric::odeint;

void guard(const OdeState& x, double t, const OdeOptions& o) {
  const std::size_t n = std::min(o.guarded, x.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(x[i]) || std::abs(x[i]) > o.blowup)
      throw IntegrationFailure("solution left |x| < " + std::to_string(o.blowup) + " (movable pole?) near t = " +
                                   std::to_string(t),
                               t);
}

}  // namespace

std::vector<OdeState> integrate_at(const OdeRhs& f, OdeState x0, double t0, const std::vector<double>& times,
                                   const OdeOptions& options) {
  std::vector<OdeState> out;
  if (times.empty()) return out;
  // integrate_times needs strictly monotone times; repeated entries share one grid slot.
  std::vector<double> grid{t0};
  std::vector<std::size_t> slot;
  slot.reserve(times.size());
  const double direction = times.back() >= t0 ? 1.0 : -1.0;
  for (double t : times) {
    if (direction * (t - grid.back()) < 0.0) throw DomainError("integrate_at: times must be monotone from t0");
    if (t != grid.back()) grid.push_back(t);
    slot.push_back(grid.size() - 1);
  }
  std::vector<OdeState> states;
  states.reserve(grid.size());
  if (grid.size() == 1) {
    states.push_back(x0);
  } else {
    auto stepper =
        odeint::make_dense_output(options.abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<OdeState>());
    const double dt = direction * options.initial_step;
    auto system = [&](const OdeState& x, OdeState& dxdt, double t) {
      guard(x, t, options);
      f(x, dxdt, t);
    };
    odeint::integrate_times(stepper, system, x0, grid.begin(), grid.end(), dt, [&](const OdeState& x, double t) {
      guard(x, t, options);
      states.push_back(x);
    });
  }
  out.reserve(times.size());
  for (std::size_t i : slot) out.push_back(states.at(i));
  return out;
}

OdeState integrate_to(const OdeRhs& f, OdeState x0, double t0, double t1, const OdeOptions& options) {
  if (t0 == t1) return x0;
  return integrate_at(f, std::move(x0), t0, {t1}, options).front();
}

}  // namespace nkgeo
