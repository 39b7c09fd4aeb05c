#pragma once

#include <array>
#include <vector>

#include "nkgeo/forms.hpp"
#include "nkgeo/report.hpp"
#include "nkgeo/tensor.hpp"

namespace nkgeo {

// ------------------------------------------------------------ 2×2 matrices

/// Row-major 2×2 matrix of expressions.
using Mat2 = std::array<Expr, 4>;

Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator*(const Expr& s, const Mat2& a);
Mat2 commutator(const Mat2& a, const Mat2& b);
Expr trace(const Mat2& a);
Expr det(const Mat2& a);
/// Inverse via the adjugate; throws DomainError if the determinant simplifies to 0.
Mat2 inverse(const Mat2& a);
Mat2 identity2();
Mat2 simplify(const Mat2& a);
Mat2 diff(const Mat2& a, const std::string& variable);
std::vector<Expr> entries(const Mat2& a);

/// L₁ = diag(½, −½), L₂ = E₁₂, L₃ = E₂₁; [L₁,L₂] = L₂, [L₁,L₃] = −L₃, [L₂,L₃] = 2L₁.
const std::array<Mat2, 3>& sl2_basis();
/// Σ c_α L_α.
Mat2 from_components(const std::array<Expr, 3>& c);
/// Coordinates of a trace-free matrix in the basis L_α.
std::array<Expr, 3> components(const Mat2& m);

// ----------------------------------------------------------------- frames

/// SL(2) on the chart (p, q, r) with G = exp(p L₃) exp(q L₁) exp(r L₂).
/// σ^α: G⁻¹dG = Σ σ^α L_α. ρ^α: dG G⁻¹ = Σ ρ^α L_α.
/// L_α and R_α are the dual vector fields (left- and right-invariant).
struct Sl2Frame {
  Chart chart;
  Mat2 G;
  std::array<std::vector<Expr>, 3> sigma;
  std::array<std::vector<Expr>, 3> rho;
  std::array<VectorField, 3> L;
  std::array<VectorField, 3> R;
};

const Sl2Frame& sl2_frame();

/// Checks named maurer_cartan, duality, left_brackets, right_brackets, left_right_commute,
/// right_invariance (ℒ_{R_α} σ^β = 0) and volume (σ¹∧σ²∧σ³ on L and on R).
Report frame_checks(const Sl2Frame& frame, const ZeroTestOptions& options = {});

/// (ℒ_X α)_a = X^b ∂_b α_a + α_b ∂_a X^b.
std::vector<Expr> lie_derivative_one_form(const Chart& chart, const VectorField& x, const std::vector<Expr>& alpha);

// ---------------------------------------------------- cohomogeneity one

/// Chart (t, p, q, r); jet rules let functions of t obey imposed ODEs.
Chart orbit_chart(std::vector<JetRule> jets = {});

/// σ^α as a one-form on (t, p, q, r).
std::vector<Expr> orbit_sigma(const Sl2Frame& frame, int alpha);
/// dt on (t, p, q, r).
std::vector<Expr> orbit_dt();
/// a ∂_t + Σ c_α L_α on (t, p, q, r).
VectorField invariant_field(const Sl2Frame& frame, const Expr& dt_coefficient, const std::array<Expr, 3>& c);
/// R_α on (t, p, q, r).
VectorField orbit_right_field(const Sl2Frame& frame, int alpha);

/// Two-form σ^α∧σ^β on (t, p, q, r) as a 4×4 antisymmetric component matrix.
std::vector<Expr> sigma_wedge(const Sl2Frame& frame, int alpha, int beta);

struct CohomogeneityOneMetric {
  std::array<Expr, 9> gamma;
  std::array<Expr, 3> n;
  Metric g;
};

/// g = Σ γ_αβ σ^α⊗σ^β + Σ n_α (σ^α⊗dt + dt⊗σ^α). Throws DomainError if γ is not symmetric or
/// the assembled metric is degenerate at a sampled point (reported in the message).
CohomogeneityOneMetric cohomogeneity_metric(const std::array<Expr, 9>& gamma, const std::array<Expr, 3>& n,
                                            const Sl2Frame& frame, std::vector<JetRule> jets = {},
                                            const ZeroTestOptions& options = {});

/// ℒ_{R_α} g = 0 for α = 1, 2, 3.
CheckResult killing_check(const Metric& g, const Sl2Frame& frame, const ZeroTestOptions& options = {});

// ------------------------------------------------------------- tetrads

/// Ordered E₁₁, E₁₂, E₂₁, E₂₂ (vector fields) or e¹¹, e¹², e²¹, e²² (one-forms) on a 4D chart.
using Tetrad = std::array<VectorField, 4>;
using Coframe = std::array<std::vector<Expr>, 4>;

/// g = scale · ½(e¹¹⊗e²² + e²²⊗e¹¹ − e¹²⊗e²¹ − e²¹⊗e¹²). Throws DomainError if the
/// co-frame is dependent at a sampled point.
Metric metric_from_coframe(const Chart& chart, const Coframe& e, const Expr& scale = Expr(1),
                           const ZeroTestOptions& options = {});
/// g^ab = ½(E₁₁⊗E₂₂ + E₂₂⊗E₁₁ − E₁₂⊗E₂₁ − E₂₁⊗E₁₂), d×d row-major. For the dual co-frame this
/// is ¼ of the inverse of metric_from_coframe; both represent the same conformal class.
std::vector<Expr> contravariant_from_frame(const Tetrad& E);
/// The co-frame with E_ij ⨼ e^mn = δ_i^m δ_j^n.
Coframe dual_coframe(const Tetrad& E);

// -------------------------------------------------------------- quartic

struct Quartic {
  std::vector<Complex> coefficients;  ///< c₀..c₄ of q(λ)
  int degree = -1;                    ///< −1 for the zero polynomial
  std::vector<Complex> roots;         ///< finite roots; 4 − degree of them sit at λ = ∞
};

/// q(λ) = Σ f_i T_jk π^k ε^ij with π = (1, −λ), ε^12 = 1 and T_ij = E_ij(t), evaluated at
/// `at` (which binds t, the orbit coordinates and any jet variables). f_i are expressions in
/// t, jet variables and "lambda".
Quartic quartic_from_frame(const Tetrad& E, const Expr& f1, const Expr& f2, const Point& at);

/// The same quartic through (dλ ∧ dt∧σ¹∧σ²∧σ³)(l₁, l₂, R₁, R₂, R₃) with l_i = E_i1 − λE_i2 + f_i∂_λ,
/// evaluated at one λ.
Complex quartic_by_volume(const Sl2Frame& frame, const Tetrad& E, const Expr& f1, const Expr& f2,
                          const Point& at, Complex lambda);

}  // namespace nkgeo
