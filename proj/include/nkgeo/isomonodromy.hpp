#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "nkgeo/ode.hpp"
#include "nkgeo/report.hpp"
#include "nkgeo/sl2.hpp"

namespace nkgeo {

using CMat2 = Eigen::Matrix2cd;

/// Numeric basis images of L₁, L₂, L₃.
const std::array<CMat2, 3>& sl2_numeric_basis();
CMat2 to_numeric(const Mat2& m, const Point& p);

// ------------------------------------------------------------------ flow

/// (Ṗ, Q̇, Ṙ) = (0, ½[R,Q] + ½P, ½[P,Q]).
struct FlowRhs {
  CMat2 dP, dQ, dR;
};
FlowRhs flow_rhs(const CMat2& P, const CMat2& Q, const CMat2& R);
std::array<Mat2, 3> flow_rhs(const Mat2& P, const Mat2& Q, const Mat2& R);

/// (Ṗ, Q̇, Ṙ) = (¼[P,R], ¼[R,Q] + ½P, ½[P,Q]), the system for the orthogonal-time frame.
FlowRhs alt_flow_rhs(const CMat2& P, const CMat2& Q, const CMat2& R);

/// Entries of Ṗ − ..., Q̇ − ..., Ṙ − ... with t-derivatives taken through `chart` (coordinate "t").
std::vector<Expr> flow_residual(const Mat2& P, const Mat2& Q, const Mat2& R, const Chart& chart);

// ------------------------------------------------------------- Lax pair

/// A = Q + λR + λ²P and B (defaults to ½R + ½λP) as matrices in (t, "lambda").
struct LaxPair {
  Mat2 A, B;
};
LaxPair default_lax_pair(const Mat2& P, const Mat2& Q, const Mat2& R);

/// ∂_t A − ∂_λ B + [A, B] on a chart containing "t" and "lambda".
Mat2 compatibility_residual(const LaxPair& lax, const Chart& chart);

/// Coefficients of λ⁰..λ^max_degree of a matrix polynomial in "lambda".
std::vector<Mat2> lambda_coefficients(const Mat2& m, int max_degree);

/// A → γAγ⁻¹ + ∂_λγ·γ⁻¹, B → γBγ⁻¹ + ∂_tγ·γ⁻¹. Throws DomainError if det γ simplifies to 0.
LaxPair gauge_transform(const LaxPair& lax, const Mat2& gamma, const Chart& chart);

// -------------------------------------------------------- classification

enum class GaugeClass { PII, PI, Solvable };
const char* to_string(GaugeClass c);

/// PII if P has distinct eigenvalues, PI if P is nilpotent with Tr(PR) ≠ 0, solvable if
/// nilpotent with Tr(PR) = 0. Quantities are compared relative to ‖P‖² and ‖P‖‖R‖; values
/// between 1e-14 and 1e-10 are rejected as borderline. Throws DomainError for P = 0.
GaugeClass classify_gauge(const CMat2& P, const CMat2& R);

// ------------------------------------------------------ parametrizations

/// Symbolic state: P, Q, R as functions of t and the jet variables of `chart`.
struct SymbolicState {
  Mat2 P, Q, R;
  Chart chart;  ///< coordinates t, lambda plus jet rules
};

/// P = 2L₁, R = uL₂ − 2(z/u)L₃, Q = (2z+t)L₁ − uyL₂ − (q3_shift + (2yz+1−2α)/u)L₃ with
/// u̇ = −yu, ż = −2yz + α_ode − ½, ẏ = z + y² + t/2, so ÿ = 2y³ + ty + α_ode. α_ode defaults to
/// α; the flow closes only when α_ode = α and q3_shift = 0.
SymbolicState pii_state(const Expr& alpha, std::optional<Expr> alpha_ode = std::nullopt, const Expr& q3_shift = Expr());
/// Numeric matrices at one point of a PII trajectory.
std::array<CMat2, 3> pii_matrices(double u, double y, double z, double t, double alpha);
/// (y, z, u)' for the PII auxiliary system.
OdeRhs pii_rhs(double alpha);

/// P = L₂, R = yL₂ + 4L₃, Q = −2zL₁ + (y² + t/2)L₂ − 4yL₃ with ẏ = z, ż = 6y² + t + shift.
SymbolicState pi_state(const Expr& shift = Expr());
/// B = ½(R + yL₂) + ½λP.
LaxPair pi_lax_pair(const SymbolicState& s);
std::array<CMat2, 3> pi_matrices(double y, double z, double t);
CMat2 pi_B(double y, double z, double t, Complex lambda);
/// (y, z)' for Painlevé I.
OdeRhs pi_rhs();

/// Closed form for the nilpotent, trace-free case: P = L₂, R = r₁L₁ + r₂L₂,
/// Q = q₁L₁ + q₂L₂ + q₃L₃ with r₁ = 4 tanh t, r₂ = (a+bt)r₁ − 4b,
/// q₂ = ¼ sinh 2t − d/dt((a+bt)r₂) + c cosh²t, q₁ = −2ṙ₂, q₃ = ṙ₁.
struct SolvableState {
  Expr r1, r2, q1, q2, q3;
  Mat2 P, Q, R;
  Chart chart;
};
SolvableState solvable_state(const Expr& a, const Expr& b, const Expr& c);
/// The same assembly from arbitrary r₁, r₂, q₂ in t. Throws DomainError when r₁ is constant
/// (the branch that degenerates the tetrad).
SolvableState solvable_state_from(const Expr& r1, const Expr& r2, const Expr& q2);
/// 2r̈₁ + ṙ₁r₁, 2r̈₂ + ṙ₁r₂, 2q̇₂ − 2r₂ṙ₂ − q₂r₁ − 1.
std::array<Expr, 3> solvable_residuals(const SolvableState& s);

// ------------------------------------------------------------- flatness

/// A Lax pair driven by auxiliary ODE data s(t). A and B see the current t, state and λ.
struct NumericLax {
  OdeRhs state_rhs;  ///< may be empty when A, B are closed-form in t
  OdeState state0;
  double t0 = 0.0;
  std::function<CMat2(double t, const OdeState& s, Complex lambda)> A, B;
};

struct FlatnessResult {
  double defect = 0.0;
  CMat2 path_lambda_first, path_t_first;
};

/// Integrates Ψ from I around the rectangle [λ₀, λ₁] × [t₀, t₁] along both edge orders and returns
/// ‖Ψ₁ − Ψ₂‖. Throws IntegrationFailure on blow-up.
FlatnessResult flatness_check(const NumericLax& lax, double lambda0, double lambda1, double t0, double t1,
                              const OdeOptions& options = {});

/// Default pair A = Q + λR + λ²P, B = ½R + ½λP driven by the PII auxiliary state (y, z, u).
NumericLax pii_numeric_lax(double alpha, const OdeState& yzu0, double t0 = 0.0);
/// PI pair with B = ½(R + yL₂) + ½λP driven by (y, z).
NumericLax pi_numeric_lax(const OdeState& yz0, double t0 = 0.0);
/// Default pair for the closed-form solvable state.
NumericLax solvable_numeric_lax(const Expr& a, const Expr& b, const Expr& c);

// --------------------------------------------------- alternative frame

struct AltFrameResult {
  double max_p_drift = 0.0;         ///< max ‖P̃(t) − P̃(t₀)‖
  double max_flow_mismatch = 0.0;   ///< max ‖(P̃,Q̃,R̃) − flow solution‖ at the samples
  double max_identity_residual = 0.0;  ///< max ‖d/dt X̃ − flow_rhs(X̃)‖ from the chain rule
};

/// Integrates the alternative system together with γ̇ = ¼γR from γ(t₀) = I, maps
/// X̃ = γXγ⁻¹ and compares with the flow integrated from the same initial data.
AltFrameResult alt_frame_check(const CMat2& P0, const CMat2& Q0, const CMat2& R0, double t0, double t1, int samples,
                               const OdeOptions& options = {});

// ---------------------------------------------------------- trajectories

struct TrajectorySample {
  double t;
  OdeState state;
  CMat2 P, Q, R;
  /// max entry of X_param(t) − X_flow(t), where X_flow solves the matrix system directly from
  /// the initial matrices (for PI, the system of its B with y = ⅛Tr(R²)).
  double flow_mismatch;
};

/// PI-gauge matrix system: Ṗ = 0, Q̇ = ½[R,Q] + ½P + ½y[P,Q], Ṙ = ½[P,Q] + ½y[P,R], y = ⅛Tr(R²).
FlowRhs pi_flow_rhs(const CMat2& P, const CMat2& Q, const CMat2& R);

/// Integrates PII (state y, z, u) or PI (state y, z) and evaluates the matrices at `times`.
std::vector<TrajectorySample> pii_trajectory(double alpha, const OdeState& yzu0, double t0,
                                             const std::vector<double>& times, const OdeOptions& options = {});
std::vector<TrajectorySample> pi_trajectory(const OdeState& yz0, double t0, const std::vector<double>& times,
                                            const OdeOptions& options = {});

}  // namespace nkgeo
