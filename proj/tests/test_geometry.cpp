#include <gtest/gtest.h>

#include <cmath>

#include "nkgeo/curvature.hpp"
#include "nkgeo/error.hpp"
#include "nkgeo/forms.hpp"
#include "nkgeo/rng.hpp"
#include "nkgeo/zero_test.hpp"

using namespace nkgeo;

namespace {

Expr v(const char* name) { return Expr::var(name); }

std::vector<Expr> parse_all(std::initializer_list<const char*> texts) {
  std::vector<Expr> out;
  for (const char* t : texts) out.push_back(parse(t));
  return out;
}

// Walker-type split-signature metric with nontrivial curvature everywhere.
Metric walker_metric() {
  Chart ch({"x1", "x2", "y1", "y2"});
  return Metric(ch, parse_all({"x1^2*y1 + sin(x2)", "y1*y2 + x1", "1", "0",  //
                               "y1*y2 + x1", "exp(x1*y2) - x2^2", "0", "1",  //
                               "1", "0", "0", "0",                           //
                               "0", "1", "0", "0"}));
}

// Generic Riemannian-type metric in three dimensions.
Metric generic3() {
  Chart ch({"u", "v", "w"});
  return Metric(ch, parse_all({"2 + u^2", "u*v", "sin(w)",  //
                               "u*v", "3 + v^2*w", "0",     //
                               "sin(w)", "0", "2 + cos(u)"}));
}

Point walker_point(Rng& rng) {
  return {{"x1", rng.uniform(-1, 1)}, {"x2", rng.uniform(-1, 1)}, {"y1", rng.uniform(-1, 1)},
          {"y2", rng.uniform(-1, 1)}};
}

double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double max_abs(const std::vector<Complex>& a) {
  double m = 0.0;
  for (const Complex& z : a) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

TEST(Curvature, PolarChristoffels) {
  Metric g(Chart({"x1", "x2"}), parse_all({"1", "0", "0", "x1^2"}));
  Tensor gamma = christoffel(g);
  EXPECT_TRUE(is_zero(gamma.at({1, 0, 1}) - parse("1/x1")).zero());
  EXPECT_TRUE(is_zero(gamma.at({1, 1, 0}) - parse("1/x1")).zero());
  EXPECT_TRUE(is_zero(gamma.at({0, 1, 1}) + v("x1")).zero());
  EXPECT_TRUE(gamma.at({0, 0, 0}).is_zero());
}

TEST(Curvature, FlatInCurvilinearCoordinatesIsFlat) {
  Metric g(Chart({"r", "t", "z"}), parse_all({"1", "0", "0", "0", "r^2", "0", "0", "0", "1"}));
  Curvature c = curvature(g);
  EXPECT_TRUE(is_zero(c.riemann.components()).zero());
  EXPECT_TRUE(c.scalar.is_zero());
}

TEST(Curvature, RoundSphereHasScalarTwo) {
  Metric g(Chart({"th", "ph"}), parse_all({"1", "0", "0", "sin(th)^2"}));
  Curvature c = curvature(g);
  ZeroTestOptions opt;
  opt.lo = 0.2;
  opt.hi = 2.9;
  EXPECT_TRUE(is_zero(c.scalar - Expr(2), opt).zero());
  EXPECT_FALSE(is_zero(c.scalar - Expr(1), opt).zero());
}

TEST(Curvature, SymbolicMatchesCompiledAndFiniteDifference) {
  for (const Metric& g : {walker_metric(), generic3()}) {
    Curvature c = curvature(g);
    CompiledMetric cm(g);
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
      Point p;
      for (const auto& name : g.chart().coordinates()) p[name] = rng.uniform(-0.8, 0.8);
      PointCurvature pc = cm.at(p);
      std::vector<Complex> symbolic;
      for (const Expr& e : c.riemann.components()) symbolic.push_back(eval(e, p));
      double scale = std::max(1.0, max_abs(symbolic));
      EXPECT_LT(max_abs_diff(symbolic, pc.riemann), 1e-10 * scale);
      std::vector<Complex> fd = fd_riemann(g, p);
      EXPECT_LT(max_abs_diff(symbolic, fd), 1e-4 * scale);
      EXPECT_LT(std::abs(eval(c.scalar, p) - pc.scalar), 1e-10 * std::max(1.0, std::abs(pc.scalar)));
    }
  }
}

TEST(Curvature, RiemannSymmetriesAndBianchi) {
  CompiledMetric cm(walker_metric());
  Rng rng(11);
  const std::size_t d = 4;
  for (int trial = 0; trial < 5; ++trial) {
    PointCurvature pc = cm.at(walker_point(rng));
    auto R = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t e) {
      return pc.riemann_lower[((a * d + b) * d + c) * d + e];
    };
    double scale = std::max(1.0, max_abs(pc.riemann_lower));
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t c = 0; c < d; ++c)
          for (std::size_t e = 0; e < d; ++e) {
            EXPECT_LT(std::abs(R(a, b, c, e) + R(b, a, c, e)), 1e-10 * scale);
            EXPECT_LT(std::abs(R(a, b, c, e) + R(a, b, e, c)), 1e-10 * scale);
            EXPECT_LT(std::abs(R(a, b, c, e) - R(c, e, a, b)), 1e-10 * scale);
            EXPECT_LT(std::abs(R(a, b, c, e) + R(a, c, e, b) + R(a, e, b, c)), 1e-10 * scale);
          }
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        EXPECT_LT(std::abs(pc.ricci[a * d + b] - pc.ricci[b * d + a]), 1e-10 * scale);
  }
}

TEST(Curvature, MetricIsParallel) {
  Metric g = walker_metric();
  CompiledMetric cm(g);
  CompiledTensor tg(g.as_tensor(), g.chart());
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    Point p = walker_point(rng);
    auto nabla = tg.covariant_derivative(p, cm.at(p));
    EXPECT_LT(max_abs(nabla), 1e-10);
  }
  Tensor gamma = christoffel(g);
  Tensor nabla_sym = covariant_derivative(g.as_tensor(), g.chart(), gamma);
  EXPECT_TRUE(is_zero(nabla_sym.components()).zero());
}

TEST(Curvature, JetChartAgreesWithExplicitCurve) {
  // y = sin(t), z = cos(t) imposed through jet rules on the chart.
  Chart jets({"t", "s"}, {JetRule{"y", "t", v("z")}, JetRule{"z", "t", -v("y")}});
  Metric gj(jets, parse_all({"1", "0", "0", "y^2"}));
  Metric ge(Chart({"t", "s"}), parse_all({"1", "0", "0", "sin(t)^2"}));
  CompiledMetric cj(gj), ce(ge);
  for (double t : {0.4, 1.1, 2.3}) {
    PointCurvature a = cj.at({{"t", t}, {"s", 0.3}, {"y", std::sin(t)}, {"z", std::cos(t)}});
    PointCurvature b = ce.at({{"t", t}, {"s", 0.3}});
    EXPECT_LT(max_abs_diff(a.riemann, b.riemann), 1e-12);
    EXPECT_NEAR(a.scalar.real(), 2.0, 1e-12);
  }
  EXPECT_THROW(fd_riemann(gj, {{"t", 0.4}, {"s", 0.0}, {"y", 0.1}, {"z", 0.2}}), DomainError);
}

TEST(Curvature, DegenerateMetricThrows) {
  Metric g(Chart({"x1", "x2"}), parse_all({"x1", "0", "0", "1"}));
  CompiledMetric cm(g);
  EXPECT_THROW(cm.at({{"x1", 0.0}, {"x2", 0.5}}), SingularEvaluation);
}

TEST(Hodge, StarSquaresToOneInSplitSignature) {
  CompiledMetric cm(walker_metric());
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    CMatrix g = cm.metric_at(walker_point(rng));
    CMatrix ginv = g.inverse();
    std::vector<Complex> alpha(16, 0.0);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b) {
        alpha[a * 4 + b] = rng.uniform(-1, 1);
        alpha[b * 4 + a] = -alpha[a * 4 + b];
      }
    for (int s : {1, -1}) {
      auto twice = hodge_star(g, ginv, s, hodge_star(g, ginv, s, alpha));
      EXPECT_LT(max_abs_diff(twice, alpha), 1e-12);
      auto plus = alpha;
      auto star = hodge_star(g, ginv, s, alpha);
      for (std::size_t k = 0; k < 16; ++k) plus[k] = alpha[k] + star[k];
      EXPECT_EQ(self_dual_orientation(g, plus), s);
    }
  }
}

TEST(Hodge, WeylIsTraceFreeAndSplits) {
  CompiledMetric cm(walker_metric());
  Rng rng(9);
  const std::size_t d = 4;
  for (int trial = 0; trial < 3; ++trial) {
    PointCurvature pc = cm.at(walker_point(rng));
    WeylSplit w = weyl_split(pc, 1);
    double scale = std::max(1.0, max_abs(w.weyl));
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t e = 0; e < d; ++e) {
        Complex trace = 0.0;
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t c = 0; c < d; ++c) trace += pc.ginv(a, c) * w.weyl[((a * d + b) * d + c) * d + e];
        EXPECT_LT(std::abs(trace), 1e-10 * scale);
      }
    for (std::size_t k = 0; k < 256; ++k) EXPECT_LT(std::abs(w.plus[k] + w.minus[k] - w.weyl[k]), 1e-12 * scale);
    WeylSplit flipped = weyl_split(pc, -1);
    EXPECT_LT(max_abs_diff(flipped.plus, w.minus), 1e-10 * scale);
  }
}

TEST(Forms, WedgeAndExteriorDerivative) {
  Chart ch({"x1", "x2", "y1", "y2"});
  Form a = Form::one_form(parse_all({"x1*y2", "sin(y1)", "0", "x2^2"}));
  Form b = Form::one_form(parse_all({"1", "y1", "x1*x2", "0"}));
  Form ab = wedge(a, b), ba = wedge(b, a);
  EXPECT_TRUE((ab + ba).empty_after_simplify());
  EXPECT_TRUE(wedge(a, a).empty_after_simplify());
  EXPECT_TRUE(exterior_derivative(ch, exterior_derivative(ch, a)).empty_after_simplify());
  // d(a∧b) = da∧b − a∧db
  Form lhs = exterior_derivative(ch, ab);
  Form rhs = wedge(exterior_derivative(ch, a), b) - wedge(a, exterior_derivative(ch, b));
  EXPECT_TRUE(is_zero(coefficients((lhs - rhs).simplified())).zero());
  // d(x1 dx2) = dx1∧dx2
  Form f = exterior_derivative(ch, Form::one_form(parse_all({"0", "x1", "0", "0"})));
  EXPECT_TRUE(f.component(0, 1).is_one());
  EXPECT_TRUE(is_zero(f.component(1, 0) + Expr(1)).zero());
}

TEST(Fields, LieDerivativeAndBracket) {
  Chart ch({"x", "y"});
  Metric flat(ch, parse_all({"1", "0", "0", "1"}));
  VectorField rot = {-v("y"), v("x")};
  EXPECT_TRUE(is_zero(lie_derivative_metric(flat, rot)).zero());
  VectorField dil = {v("x"), v("y")};
  EXPECT_FALSE(is_zero(lie_derivative_metric(flat, dil)).zero());
  VectorField br = bracket(ch, rot, dil);
  EXPECT_TRUE(is_zero(br).zero());
  VectorField dx = {Expr(1), Expr(0)};
  VectorField b2 = bracket(ch, dx, rot);
  EXPECT_TRUE(is_zero(b2[0]).zero());
  EXPECT_TRUE(is_zero(b2[1] - Expr(1)).zero());
}
