#pragma once

#include <string>
#include <vector>

#include "nkgeo/curvature.hpp"
#include "nkgeo/forms.hpp"
#include "nkgeo/number.hpp"
#include "nkgeo/report.hpp"

namespace nkgeo {

/// Null-Kähler structure in normal form on the chart (x1..x{2n}, y1..y{2n}):
///   g = ½ ω_ij (dy^i dx^j + dx^j dy^i) + κ ∂²Θ/∂y^i∂y^j dx^i dx^j,  N = Σ dx^i ⊗ ∂/∂y^i,
///   Ω_ab = g_cb N^c_a,  ω = [[0, I_n], [−I_n, 0]],  ω^ij the inverse matrix (= −ω).
struct NullKahlerStructure {
  int n = 1;
  Expr theta;
  Chart chart;
  Metric g;
  std::vector<Expr> inverse;  ///< g^ab in closed form
  Tensor N;                   ///< N^a_b
  Tensor Omega;               ///< Ω_ab
  std::vector<int> omega;     ///< ω_ij, 2n×2n
  std::vector<int> omega_inv; ///< ω^ij
};

/// κ: coefficient of the Θ-Hessian block g(∂x^i, ∂x^j) = κ ∂²Θ/∂y^i∂y^j.
Rational theta_coefficient();

std::vector<std::string> x_names(int n);
std::vector<std::string> y_names(int n);
Chart normal_chart(int n);
std::vector<int> omega_matrix(int n);
std::vector<int> omega_inverse(int n);

/// Normal-form metric components for Θ (no validation of Θ's variables).
std::vector<Expr> normal_form_metric(int n, const Expr& theta);

/// Throws DomainError if Θ mentions variables outside the chart.
NullKahlerStructure build_normal_form(int n, const Expr& theta);

/// Structure with the normal-form N and a caller-supplied metric whose y-block vanishes and
/// whose mixed block is ½ω (only the x-block may differ). Used for negative controls.
NullKahlerStructure with_x_block(int n, const Expr& theta, const std::vector<Expr>& x_block);

struct VerifyOptions {
  ZeroTestOptions sampling;
  /// Tolerance for curvature identities evaluated numerically, relative to max(1, |Riemann|).
  double curvature_tol = 1e-9;
};

/// Checks named: compatibility, parallel_N, closed_Omega, parallel_Omega, curvature_commutes (cu1),
/// curvature_skew (cu2), ricci_annihilates (cu3), scalar_zero (cu4), Omega_power_n,
/// Omega_power_n_plus_1, walker, kernel_integrable.
Report verify_structure(const NullKahlerStructure& s, const VerifyOptions& options = {});

// ---------------------------------------------------------------- gauge

struct GaugeGenerator {
  Expr H;              ///< function of x
  std::vector<Expr> T; ///< 2n functions of x
  std::vector<Expr> Q; ///< 2n functions of x
  Expr R;              ///< function of x
};

struct GaugeTransform {
  VectorField Y;       ///< generator on the 4n chart; new coordinates are z + ε Y(z)
  Expr delta_theta;
};

/// Throws DomainError if any generator function depends on y.
GaugeTransform gauge_transform(const NullKahlerStructure& s, const GaugeGenerator& gen);

/// max_ab |(φ*g[Θ̃])_ab − g[Θ]_ab| at p for φ(z) = z + εY(z) and Θ̃ = Θ + ε δΘ read in the new
/// coordinates. O(ε²) when δΘ is the correct variation.
double gauge_defect(const NullKahlerStructure& s, const GaugeTransform& t, const Point& p, double epsilon);

// ---------------------------------------------------- conformal rescaling

struct ConformalRescale {
  Metric g_hat;
  Tensor Omega_hat;
  CheckResult parallel;
};

/// ĝ = F²g, Ω̂ = F³Ω for n = 1, with the check ∇̂Ω̂ = 0. F depending on y is not rejected:
/// the check then reports the failure.
ConformalRescale restricted_conformal_rescale(const NullKahlerStructure& s, const Expr& F,
                                              const ZeroTestOptions& options = {});

// ------------------------------------------------- pseudo-quaternionic algebra

/// Dense square matrix with exact rational entries.
class RationalMatrix {
public:
  explicit RationalMatrix(std::size_t n) : n_(n), a_(n * n) {}
  RationalMatrix(std::size_t n, const std::vector<std::int64_t>& entries);
  static RationalMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  RationalMatrix operator-() const;
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) { return a.a_ == b.a_; }

private:
  std::size_t n_;
  std::vector<Rational> a_;
};

struct QuaternionicTriple {
  RationalMatrix I, S, T;
  Report algebra;
};

/// I = N1 + N2, S = N1 − N2, T = [N1, N2]. Throws DomainError unless N1² = N2² = 0 and
/// N1N2 + N2N1 = −Id.
QuaternionicTriple pseudo_quaternionic_triple(const RationalMatrix& N1, const RationalMatrix& N2);

}  // namespace nkgeo
