#pragma once

#include <functional>
#include <vector>

#include "nkgeo/nullkahler.hpp"
#include "nkgeo/report.hpp"

namespace nkgeo {

// Conventions (ω^ij = inverse of ω_ij = −ω):
//   f    = Σ ω^ij Θ_{y^i x^j} + ½ Σ ω^ik ω^jl Θ_{y^i y^j} Θ_{y^k y^l}
//   H_ij = Θ_{y^i x^j} − Θ_{y^j x^i} + Σ ω^kl Θ_{y^i y^k} Θ_{y^j y^l}
//   l_i  = ∂/∂y^i + λ (∂/∂x^i + Σ ω^kj Θ_{y^i y^j} ∂/∂y^k)
// With these, Ricci = 2 ∂²f/∂y^i∂y^j on the dx⊗dx block and Σ ω^ij H_ij = 2f.

/// Constant relating the dx-block of the Ricci tensor to the y-Hessian of f.
constexpr double kRicciPotentialFactor = 2.0;

Expr ricci_potential_f(const Expr& theta, int n);

/// f in the explicit four-dimensional form Θ_{x¹y²} − Θ_{x²y¹} + Θ_{y¹y¹}Θ_{y²y²} − Θ_{y¹y²}².
Expr ricci_potential_f_4d(const Expr& theta);

/// A residual together with geometric cross-checks that must agree with it.
struct SystemReport {
  CheckResult residual;
  std::vector<CheckResult> cross_checks;
};

struct PdeOptions {
  ZeroTestOptions sampling;
  /// Cross-check tolerances.
  double ricci_tol = 1e-8;
  double weyl_tol = 1e-7;
  int cross_points = 20;
};

/// f − G − Σ y^i F_i. On pass, cross-checks Ricci = 0 at sampled points.
SystemReport einstein_residual(const Expr& theta, int n, const Expr& G, const std::vector<Expr>& F,
                               const PdeOptions& options = {});

/// Δ_g f (n = 1). Cross-check: max |C₊| at sampled points, with the orientation making Ω self-dual.
SystemReport asd_residual(const Expr& theta, const PdeOptions& options = {});

/// All fourth pure-y derivatives of Θ (n = 1). Cross-check: max |C₋|.
SystemReport sd_residual(const Expr& theta, const PdeOptions& options = {});

/// f ≡ 0 (n = 1). Cross-checks on pass: Ricci = 0 and C₊ = 0.
SystemReport heavenly_residual(const Expr& theta, const PdeOptions& options = {});

struct HierarchyReport {
  std::vector<Expr> H;         ///< 2n×2n
  CheckResult residual;        ///< H ≡ 0
  CheckResult antisymmetry;    ///< H_ij + H_ji ≡ 0
  CheckResult trace_identity;  ///< Σ ω^ij H_ij − 2f ≡ 0
};

std::vector<Expr> hk_hierarchy(const Expr& theta, int n);
HierarchyReport hk_hierarchy_residual(const Expr& theta, int n, const ZeroTestOptions& options = {});

struct WeakerReport {
  CheckResult residual;   ///< ∂H_ij/∂y^k ≡ 0
  std::vector<Expr> C;    ///< H_ij (functions of x) when the residual passes, else empty
};

WeakerReport weaker_residual(const Expr& theta, int n, const ZeroTestOptions& options = {});

/// Vector fields l_i on the chart (x, y, λ); the last coordinate is "lambda".
Chart lax_chart(int n);
std::vector<VectorField> lax_fields(const Expr& theta, int n);
/// All components of [l_i, l_j], i < j.
CheckResult lax_distribution_check(const Expr& theta, int n, const ZeroTestOptions& options = {});

/// Checks named odd, homothety, lattice.
Report joyce_checks(const Expr& theta, int n, const ZeroTestOptions& options = {});

/// n = 1: y-linear shift Θ → Θ + y¹ Q₁(x) that removes C₁₂ = H₁₂(x), with
/// Q₁(x¹, x²) = −∫₀^{x²} C₁₂(x¹, s) ds by adaptive quadrature. Throws DomainError unless the
/// weaker conditions hold and n = 1.
struct LinearShift {
  Expr C12;
  std::function<double(double x1, double x2)> Q1;
};
LinearShift remove_weaker_constants(const Expr& theta, int n, const ZeroTestOptions& options = {});

/// Orientation sign (±1) making Ω of the normal form self-dual at p; throws if neither.
int normal_form_orientation(const NullKahlerStructure& s, const Point& p);

/// max |C₊| and max |C₋| at p, with the orientation making Ω self-dual.
std::pair<double, double> weyl_halves(const NullKahlerStructure& s, const CompiledMetric& cm, const Point& p);

}  // namespace nkgeo
