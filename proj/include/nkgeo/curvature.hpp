#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nkgeo/tensor.hpp"

namespace nkgeo {

// Conventions, used throughout the library:
//   Γ^a_bc = ½ g^ae (∂_b g_ec + ∂_c g_eb − ∂_e g_bc)
//   R^a_bcd = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb, so [∇_c, ∇_d] V^a = R^a_bcd V^b
//   R_abcd = g_ae R^e_bcd,  r_bd = R^a_bad,  S = g^bd r_bd
// Covariant derivatives append the derivative index last: (∇T)_{...;c}.

// ------------------------------------------------------------------ symbolic

struct Curvature {
  std::vector<Expr> inverse;  ///< g^ab, d×d
  Tensor gamma;               ///< Γ^a_bc
  Tensor riemann;             ///< R^a_bcd
  Tensor ricci;               ///< r_bd
  Expr scalar;
};

Tensor christoffel(const Metric& g, const std::vector<Expr>& inverse);
Tensor christoffel(const Metric& g);
Tensor riemann(const Metric& g, const Tensor& gamma);
Tensor ricci(const Tensor& riemann);
Expr scalar_curvature(const std::vector<Expr>& inverse, const Tensor& ricci);
/// Full symbolic pipeline; requires d ≤ 6.
Curvature curvature(const Metric& g);
/// R_abcd from R^a_bcd.
Tensor lower_first(const Metric& g, const Tensor& riemann);

Tensor covariant_derivative(const Tensor& t, const Chart& chart, const Tensor& gamma);

// ------------------------------------------------------------------- numeric

using CMatrix = Eigen::MatrixXcd;

/// Curvature data at one point. Flat arrays are row-major in the index order shown.
struct PointCurvature {
  std::size_t dim = 0;
  CMatrix g, ginv;
  std::vector<Complex> dg;             ///< ∂_c g_ab at [c][a][b]
  std::vector<Complex> gamma;          ///< Γ^a_bc at [a][b][c]
  std::vector<Complex> riemann;        ///< R^a_bcd
  std::vector<Complex> riemann_lower;  ///< R_abcd
  std::vector<Complex> ricci;          ///< r_bd
  Complex scalar;
};

/// Metric with its first and second partial derivatives compiled into one tape, so the
/// curvature at a point costs one tape run plus dense linear algebra.
class CompiledMetric {
public:
  explicit CompiledMetric(const Metric& g);

  const Metric& metric() const noexcept { return g_; }
  /// Curvature at p. Throws SingularEvaluation on a singular point or degenerate metric.
  PointCurvature at(const Point& p) const;
  CMatrix metric_at(const Point& p) const;

private:
  CompiledMetric(const Metric& g, const std::vector<Expr>& outputs);
  Metric g_;
  std::vector<std::string> vars_;
  Tape tape_;
};

/// Independent curvature oracle: R^a_bcd from central differences of g_ab with one
/// Richardson step (h and h/2). Charts with jet rules are rejected.
std::vector<Complex> fd_riemann(const Metric& g, const Point& p, double h = 1e-3);

/// Numeric covariant derivative of a tensor field at a point; derivative index last.
class CompiledTensor {
public:
  CompiledTensor(const Tensor& t, const Chart& chart);
  /// Component values at p.
  std::vector<Complex> values(const Point& p) const;
  std::vector<Complex> covariant_derivative(const Point& p, const PointCurvature& pc) const;

private:
  CompiledTensor(const Tensor& t, const Chart& chart, const std::vector<Expr>& outputs);
  Tensor t_;
  std::vector<std::string> vars_;
  Tape tape_;
};

// ------------------------------------------------------------ 4D, split signature

/// ε_abcd = s·sqrt(det g)·[abcd] with orientation sign s = ±1.
std::vector<Complex> volume_form(const CMatrix& g, int orientation);

/// (★α)_ab = ½ ε_ab^cd α_cd for a d×d antisymmetric array (d = 4).
std::vector<Complex> hodge_star(const CMatrix& g, const CMatrix& ginv, int orientation,
                                const std::vector<Complex>& alpha);

struct WeylSplit {
  std::vector<Complex> weyl;   ///< C_abcd
  std::vector<Complex> plus;   ///< ½(C + C★) on the second pair
  std::vector<Complex> minus;  ///< ½(C − C★)
};

WeylSplit weyl_split(const PointCurvature& pc, int orientation);

/// Orientation sign making the 2-form α self-dual at the given metric (±1), or 0 if α is
/// neither self-dual nor anti-self-dual to tolerance.
int self_dual_orientation(const CMatrix& g, const std::vector<Complex>& alpha, double tol = 1e-9);

}  // namespace nkgeo
