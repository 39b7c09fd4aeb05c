#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nkgeo/error.hpp"
#include "nkgeo/rng.hpp"
#include "nkgeo/sl2.hpp"

using namespace nkgeo;

namespace {

Expr v(const char* name) { return Expr::var(name); }

bool zero(const Expr& e, ZeroTestOptions o = {}) { return is_zero(e, o).zero(); }

bool zero_matrix(const Mat2& m) {
  for (const Expr& e : m)
    if (!zero(e)) return false;
  return true;
}

std::array<Expr, 9> identity3() { return {Expr(1), Expr(), Expr(), Expr(), Expr(1), Expr(), Expr(), Expr(), Expr(1)}; }

}  // namespace

TEST(Sl2Basis, CommutationRelations) {
  const auto& L = sl2_basis();
  EXPECT_TRUE(zero_matrix(commutator(L[0], L[1]) - L[1]));
  EXPECT_TRUE(zero_matrix(commutator(L[0], L[2]) + L[2]));
  EXPECT_TRUE(zero_matrix(commutator(L[1], L[2]) - Expr(2) * L[0]));
  auto c = components(from_components({v("a"), v("b"), v("c")}));
  EXPECT_TRUE(zero(c[0] - v("a")));
  EXPECT_TRUE(zero(c[1] - v("b")));
  EXPECT_TRUE(zero(c[2] - v("c")));
}

TEST(Sl2Basis, InverseAndTrace) {
  Mat2 m{v("a"), v("b"), v("c"), v("d")};
  ZeroTestOptions o;
  for (const Expr& e : m * inverse(m) - identity2()) EXPECT_TRUE(zero(e, o));
  EXPECT_TRUE(zero(trace(commutator(m, Mat2{v("e"), v("f"), v("g"), v("h")}))));
  EXPECT_THROW(inverse(Mat2{Expr(1), Expr(2), Expr(2), Expr(4)}), DomainError);
}

TEST(Sl2Frame, GroupElementHasUnitDeterminant) { EXPECT_TRUE(zero(det(sl2_frame().G) - Expr(1))); }

TEST(Sl2Frame, AllStructureChecksPass) {
  ZeroTestOptions o;
  o.tol = 1e-10;
  Report r = frame_checks(sl2_frame(), o);
  ASSERT_EQ(r.checks.size(), 7u);
  for (const CheckResult& c : r.checks) {
    EXPECT_TRUE(c.pass) << c.name << " " << c.max_residual;
    EXPECT_TRUE(c.symbolic_zero || c.points >= 50) << c.name;
  }
  EXPECT_TRUE(r["maurer_cartan"].symbolic_zero);
}

TEST(Sl2Frame, CoordinateDifferentialsAtIdentity) {
  const Sl2Frame& f = sl2_frame();
  Point id{{"p", 0.0}, {"q", 0.0}, {"r", 0.0}};
  // σ¹ = dq, σ² = dr, σ³ = dp at the identity.
  const std::size_t expected[3] = {1, 2, 0};
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t mu = 0; mu < 3; ++mu)
      EXPECT_NEAR(std::abs(eval(f.sigma[a][mu], id) - Complex(mu == expected[a] ? 1.0 : 0.0)), 0.0, 1e-15);
}

TEST(Sl2Frame, LeftRightCommuteAtRandomPoints) {
  const Sl2Frame& f = sl2_frame();
  Rng rng(99);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    Point p{{"p", rng.uniform(-2, 2)}, {"q", rng.uniform(-2, 2)}, {"r", rng.uniform(-2, 2)}};
    for (const auto& l : f.L)
      for (const auto& r : f.R)
        for (const Expr& e : bracket(f.chart, l, r)) worst = std::max(worst, std::abs(eval(e, p)));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Sl2Frame, SabotagedStructureConstantFails) {
  const Sl2Frame& f = sl2_frame();
  Form s1 = Form::one_form(f.sigma[0]), s2 = Form::one_form(f.sigma[1]), s3 = Form::one_form(f.sigma[2]);
  EXPECT_FALSE(is_zero(coefficients(exterior_derivative(f.chart, s1) - wedge(s3, s2))).zero());
}

TEST(Cohomogeneity, NoDtBlockIsDegenerate) {
  EXPECT_THROW(cohomogeneity_metric(identity3(), {Expr(), Expr(), Expr()}, sl2_frame()), DomainError);
}

TEST(Cohomogeneity, KillingForRightInvariantFields) {
  auto m = cohomogeneity_metric(identity3(), {Expr(1), Expr(), Expr()}, sl2_frame());
  ZeroTestOptions o;
  o.tol = 1e-10;
  EXPECT_TRUE(killing_check(m.g, sl2_frame(), o).pass);
  // A t-dependent γ keeps the symmetry.
  std::array<Expr, 9> gamma = {v("t"), Expr(1), Expr(), Expr(1), Expr(), exp(v("t")), Expr(), exp(v("t")), Expr(3)};
  auto m2 = cohomogeneity_metric(gamma, {Expr(1), v("t"), Expr()}, sl2_frame());
  EXPECT_TRUE(killing_check(m2.g, sl2_frame(), o).pass);
}

TEST(Cohomogeneity, NonInvariantMetricFailsKilling) {
  auto m = cohomogeneity_metric(identity3(), {Expr(1), Expr(), Expr()}, sl2_frame());
  auto g = m.g.components();
  g[2 * 4 + 2] = simplify(g[2 * 4 + 2] + v("p") * v("p"));
  EXPECT_FALSE(killing_check(Metric(m.g.chart(), g), sl2_frame()).pass);
}

TEST(Cohomogeneity, RejectsAsymmetricGamma) {
  std::array<Expr, 9> gamma = identity3();
  gamma[1] = Expr(2);
  EXPECT_THROW(cohomogeneity_metric(gamma, {Expr(1), Expr(), Expr()}, sl2_frame()), DomainError);
}

TEST(Coframe, FlatCoframeGivesSplitSignature) {
  Chart c({"x1", "x2", "y1", "y2"});
  Coframe e = {std::vector<Expr>{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 1, 0, 0}};
  Metric g = metric_from_coframe(c, e);
  Eigen::Matrix4d m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m(a, b) = eval(g(a, b), {}).real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m);
  int positive = 0;
  for (int i = 0; i < 4; ++i) positive += es.eigenvalues()(i) > 0;
  EXPECT_EQ(positive, 2);
  EXPECT_NEAR(m(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(m(2, 3), -0.5, 1e-15);
}

TEST(Coframe, DependentCoframeThrows) {
  Chart c({"x1", "x2", "y1", "y2"});
  Coframe e = {std::vector<Expr>{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}};
  EXPECT_THROW(metric_from_coframe(c, e), DomainError);
}

TEST(Coframe, DualOfInvariantTetradIsInverse) {
  const Sl2Frame& f = sl2_frame();
  Tetrad E = {invariant_field(f, Expr(), {Expr(1), Expr(), v("t")}), invariant_field(f, Expr(-2), {Expr(), Expr(), Expr()}),
              invariant_field(f, Expr(2), {Expr(), Expr(1), Expr()}), invariant_field(f, Expr(), {Expr(), Expr(), Expr(1)})};
  Coframe e = dual_coframe(E);
  ZeroTestOptions o;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) {
      Expr s = i == k ? Expr(-1) : Expr();
      for (std::size_t a = 0; a < 4; ++a) s += E[i][a] * e[k][a];
      EXPECT_TRUE(zero(simplify(s), o)) << i << k;
    }
  // Signature (2, 2) at 20 points.
  Metric g = metric_from_coframe(orbit_chart(), e);
  Rng rng(4);
  for (int k = 0; k < 20; ++k) {
    Point p{{"t", rng.uniform(-2, 2)}, {"p", rng.uniform(-2, 2)}, {"q", rng.uniform(-2, 2)}, {"r", rng.uniform(-2, 2)}};
    Eigen::Matrix4d m;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) m(a, b) = eval(g(a, b), p).real();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m);
    int positive = 0;
    for (int i = 0; i < 4; ++i) positive += es.eigenvalues()(i) > 0;
    EXPECT_EQ(positive, 2);
  }
  // With both normalized by ½, the contravariant metric from E is ¼ of the inverse of g.
  auto ginv = contravariant_from_frame(E);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      Expr s = a == b ? Expr::rational(-1, 4) : Expr();
      for (std::size_t c = 0; c < 4; ++c) s += g(a, c) * ginv[c * 4 + b];
      EXPECT_TRUE(zero(simplify(s), o));
    }
}

TEST(Quartic, ConstantFrameWithUnitF1HasQuadrupleZeroAtInfinity) {
  const Sl2Frame& f = sl2_frame();
  // E₁₂ = −2∂_t, E₂₁ = 2∂_t − R, E₁₁ = Q, E₂₂ = P.
  Tetrad E = {invariant_field(f, Expr(), {Expr(1), Expr(1), Expr()}), invariant_field(f, Expr(-2), {Expr(), Expr(), Expr()}),
              invariant_field(f, Expr(2), {Expr(), Expr(), Expr(-4)}), invariant_field(f, Expr(), {Expr(), Expr(1), Expr()})};
  Point at{{"t", 0.3}, {"p", 0.1}, {"q", -0.2}, {"r", 0.4}};
  Quartic q = quartic_from_frame(E, Expr(-1), Expr(), at);
  EXPECT_EQ(q.degree, 0);
  EXPECT_NEAR(std::abs(q.coefficients[0] + 2.0), 0.0, 1e-14);
  Quartic z = quartic_from_frame(E, Expr(), Expr(), at);
  EXPECT_EQ(z.degree, -1);
}

TEST(Quartic, GenericCubicFHasFourDistinctRoots) {
  const Sl2Frame& f = sl2_frame();
  Rng rng(7);
  auto c = [&] { return Expr::decimal(rng.uniform(-1, 1)); };
  Tetrad E = {invariant_field(f, c(), {c(), c(), c()}), invariant_field(f, c(), {c(), c(), c()}),
              invariant_field(f, c(), {c(), c(), c()}), invariant_field(f, c(), {c(), c(), c()})};
  Expr lam = v("lambda");
  Expr f1 = c() + c() * lam + c() * lam * lam + c() * pow(lam, 3);
  Expr f2 = c() + c() * lam + c() * lam * lam + c() * pow(lam, 3);
  Point at{{"t", 0.3}, {"p", 0.1}, {"q", -0.2}, {"r", 0.4}};
  Quartic q = quartic_from_frame(E, f1, f2, at);
  ASSERT_EQ(q.degree, 4);
  ASSERT_EQ(q.roots.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) EXPECT_GT(std::abs(q.roots[i] - q.roots[j]), 1e-6);
  // The volume route is proportional with a λ-independent factor.
  std::vector<Complex> ratios;
  for (double l : {-1.3, -0.2, 0.7, 2.1}) {
    Complex direct = q.coefficients[0];
    for (int k = 1; k <= 4; ++k) direct += q.coefficients[static_cast<std::size_t>(k)] * std::pow(Complex(l), k);
    ratios.push_back(quartic_by_volume(f, E, f1, f2, at, l) / direct);
  }
  for (const Complex& r : ratios) EXPECT_NEAR(std::abs(r - ratios[0]), 0.0, 1e-9 * std::abs(ratios[0]));
  EXPECT_GT(std::abs(ratios[0]), 1e-9);
}
