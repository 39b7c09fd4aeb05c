#include <gtest/gtest.h>

#include <random>

#include "nkgeo/error.hpp"
#include "nkgeo/isomonodromy.hpp"

using namespace nkgeo;

namespace {

CMat2 random_sl2(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  const auto& L = sl2_numeric_basis();
  return d(rng) * L[0] + d(rng) * L[1] + d(rng) * L[2];
}

bool all_zero(const std::vector<Expr>& v, ZeroTestOptions o = {}) { return is_zero(v, o).zero(); }

ZeroTestOptions positive_box() {
  ZeroTestOptions o;
  o.lo = 0.3;
  o.hi = 1.7;
  return o;
}

}  // namespace

TEST(Flow, ZeroStateGivesZero) {
  const CMat2 z = CMat2::Zero();
  const FlowRhs f = flow_rhs(z, z, z);
  EXPECT_EQ(f.dP.norm() + f.dQ.norm() + f.dR.norm(), 0.0);
  const FlowRhs a = alt_flow_rhs(z, z, z);
  EXPECT_EQ(a.dP.norm() + a.dQ.norm() + a.dR.norm(), 0.0);
}

TEST(Flow, OutputsAreTraceFree) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const FlowRhs f = flow_rhs(random_sl2(rng), random_sl2(rng), random_sl2(rng));
    EXPECT_LT(std::abs(f.dQ.trace()), 1e-14);
    EXPECT_LT(std::abs(f.dR.trace()), 1e-14);
  }
}

TEST(Compatibility, LambdaCoefficientsAreTheFlowEquations) {
  // Generic P, Q, R whose t-derivatives are free symbols dp1.. so nothing is imposed.
  std::vector<JetRule> jets;
  std::array<std::array<Expr, 3>, 3> c;
  const char* names[3] = {"p", "q", "r"};
  for (int m = 0; m < 3; ++m)
    for (int a = 0; a < 3; ++a) {
      const std::string v = std::string(names[m]) + std::to_string(a + 1);
      c[m][a] = Expr::var(v);
      jets.push_back({v, "t", Expr::var("d" + v)});
    }
  const Chart chart({"t", "lambda"}, jets);
  const Mat2 P = from_components(c[0]), Q = from_components(c[1]), R = from_components(c[2]);
  const auto coeffs = lambda_coefficients(compatibility_residual(default_lax_pair(P, Q, R), chart), 4);
  const auto rhs = flow_rhs(P, Q, R);
  auto dot = [&](const Mat2& m) {
    Mat2 out;
    for (int i = 0; i < 4; ++i) out[i] = chart.partial(m[i], "t");
    return out;
  };
  const std::array<Mat2, 3> expected{dot(Q) - rhs[1], dot(R) - rhs[2], dot(P) - rhs[0]};
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(all_zero(entries(coeffs[k] - expected[k]))) << "lambda^" << k;
  EXPECT_TRUE(all_zero(entries(coeffs[3])));
  EXPECT_TRUE(all_zero(entries(coeffs[4])));
}

TEST(Pii, FlowResidualVanishesUnderAuxiliarySystem) {
  const SymbolicState s = pii_state(Expr::var("alpha"));
  const auto r = flow_residual(s.P, s.Q, s.R, s.chart);
  for (const Expr& e : r) EXPECT_TRUE(e.is_zero()) << e.str();
}

TEST(Pii, ShiftedParameterLeavesResidual) {
  const Expr alpha = Expr::var("alpha");
  const SymbolicState s = pii_state(alpha, alpha + 1);
  const ZeroTestResult z = is_zero(flow_residual(s.P, s.Q, s.R, s.chart), positive_box());
  EXPECT_FALSE(z.zero());
  EXPECT_TRUE(z.witness.has_value());
}

TEST(Pii, HalfConstantInQ3IsInconsistentWithTheAuxiliarySystem) {
  // Q₃ = −(2yz + ½ − α)/u differs from the closing value by (α − ½)/u.
  const Expr alpha = Expr::var("alpha");
  const SymbolicState s = pii_state(alpha, std::nullopt, (alpha - Expr::rational(1, 2)) / Expr::var("u"));
  EXPECT_FALSE(is_zero(flow_residual(s.P, s.Q, s.R, s.chart), positive_box()).zero());
}

TEST(Pi, CompatibilityVanishesUnderPainleveOne) {
  const SymbolicState s = pi_state();
  for (const Expr& e : entries(compatibility_residual(pi_lax_pair(s), s.chart))) EXPECT_TRUE(e.is_zero()) << e.str();
}

TEST(Pi, SabotagedEquationLeavesResidual) {
  const SymbolicState s = pi_state(Expr(1));
  const ZeroTestResult z = is_zero(entries(compatibility_residual(pi_lax_pair(s), s.chart)));
  EXPECT_FALSE(z.zero());
}

TEST(Pi, YIsAnEighthOfTraceRSquared) {
  const SymbolicState s = pi_state();
  EXPECT_TRUE(simplify(trace(s.R * s.R) / Expr(8) - Expr::var("y")).is_zero());
}

TEST(Pi, DefaultLaxPairDoesNotCloseOnPainleveOne) {
  const SymbolicState s = pi_state();
  EXPECT_FALSE(is_zero(entries(compatibility_residual(default_lax_pair(s.P, s.Q, s.R), s.chart))).zero());
}

TEST(Gauge, IdentityLeavesPairUnchanged) {
  const SymbolicState s = pi_state();
  const LaxPair lax = pi_lax_pair(s);
  const LaxPair g = gauge_transform(lax, identity2(), s.chart);
  EXPECT_TRUE(all_zero(entries(g.A - lax.A)));
  EXPECT_TRUE(all_zero(entries(g.B - lax.B)));
}

TEST(Gauge, SingularGammaThrows) {
  const Chart chart({"t", "lambda"});
  const Expr t = Expr::var("t");
  EXPECT_THROW(gauge_transform(default_lax_pair(identity2(), identity2(), identity2()), Mat2{t, t, t, t}, chart),
               DomainError);
}

TEST(Gauge, PainleveOneFormReachesDefaultGauge) {
  // γ = I + wL₂ with ẇ = −y/2 removes the ½yL₂ term from B.
  const Expr y = Expr::var("y"), z = Expr::var("z"), t = Expr::var("t"), w = Expr::var("w");
  auto build = [&](const Expr& rate) {
    const Chart chart({"t", "lambda"}, {{"y", "t", z}, {"z", "t", Expr(6) * y * y + t}, {"w", "t", rate}});
    const SymbolicState s = pi_state();
    const Mat2 gamma = identity2() + w * sl2_basis()[1];
    const LaxPair g = gauge_transform(pi_lax_pair(s), gamma, chart);
    const Mat2 Q = simplify(gamma * s.Q * inverse(gamma)), R = simplify(gamma * s.R * inverse(gamma));
    const LaxPair d = default_lax_pair(s.P, Q, R);
    std::vector<Expr> diffs = entries(g.A - d.A);
    for (const Expr& e : entries(g.B - d.B)) diffs.push_back(e);
    return std::make_pair(diffs, flow_residual(s.P, Q, R, chart));
  };
  const auto [half_diffs, half_flow] = build(-Expr::rational(1, 2) * y);
  EXPECT_TRUE(all_zero(half_diffs));
  EXPECT_TRUE(all_zero(half_flow));
  const auto [full_diffs, full_flow] = build(-y);
  EXPECT_FALSE(is_zero(full_diffs).zero());
  EXPECT_FALSE(is_zero(full_flow).zero());
}

TEST(Gauge, ResidualTransformsCovariantly) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(-3, 3);
  const Chart chart({"t", "lambda"});
  const Expr t = Expr::var("t"), l = Expr::var("lambda");
  auto poly = [&](int degree_t, int degree_l) {
    Expr e;
    for (int i = 0; i <= degree_t; ++i)
      for (int j = 0; j <= degree_l; ++j) e += Expr(d(rng)) * pow(t, i) * pow(l, j);
    return e;
  };
  ZeroTestOptions opts;
  opts.symbolic = SymbolicMode::Off;
  opts.points = 10;
  for (int trial = 0; trial < 10; ++trial) {
    const Expr a0 = poly(2, 2), a1 = poly(2, 2), a2 = poly(2, 2), b0 = poly(2, 1), b1 = poly(2, 1), b2 = poly(2, 1);
    const LaxPair lax{{a0, a1, a2, -a0}, {b0, b1, b2, -b0}};
    const Expr g = poly(1, 0);
    const Mat2 gamma{Expr(1) + g * g, g, g, Expr(1)};  // det = 1 + g² − g² = 1
    const Mat2 before = compatibility_residual(lax, chart);
    const Mat2 after = compatibility_residual(gauge_transform(lax, gamma, chart), chart);
    const auto z = is_zero(entries(after - gamma * before * inverse(gamma)), opts);
    EXPECT_LT(z.max_abs, 1e-9) << "trial " << trial;
  }
}

TEST(Classify, NormalForms) {
  const auto& L = sl2_numeric_basis();
  EXPECT_EQ(classify_gauge(2.0 * L[0], L[1]), GaugeClass::PII);
  EXPECT_EQ(classify_gauge(L[1], 0.7 * L[1] + 4.0 * L[2]), GaugeClass::PI);
  EXPECT_EQ(classify_gauge(L[1], 1.3 * L[0] - 0.4 * L[1]), GaugeClass::Solvable);
  EXPECT_EQ(classify_gauge(L[1], CMat2::Zero()), GaugeClass::Solvable);
}

TEST(Classify, ZeroAndBorderlineRejected) {
  const auto& L = sl2_numeric_basis();
  EXPECT_THROW(classify_gauge(CMat2::Zero(), L[1]), DomainError);
  // L₂ + εL₃ has relative discriminant ≈ 4ε.
  EXPECT_THROW(classify_gauge(L[1] + 1e-12 * L[2], L[0]), DomainError);
  EXPECT_EQ(classify_gauge(L[1] + 1e-6 * L[2], L[0]), GaugeClass::PII);
  EXPECT_THROW(classify_gauge(L[1], L[0] + 1e-12 * L[2]), DomainError);
}

TEST(Classify, InvariantUnderConjugation) {
  std::mt19937_64 rng(3);
  const auto& L = sl2_numeric_basis();
  const std::array<std::pair<CMat2, CMat2>, 3> cases{
      std::pair{CMat2(2.0 * L[0]), CMat2(L[1] - L[2])},
      std::pair{CMat2(L[1]), CMat2(0.3 * L[1] + 4.0 * L[2])},
      std::pair{CMat2(L[1]), CMat2(0.5 * L[0] + 2.0 * L[1])},
  };
  for (const auto& [P, R] : cases) {
    const GaugeClass expected = classify_gauge(P, R);
    for (int i = 0; i < 10; ++i) {
      CMat2 g = CMat2::Identity() + random_sl2(rng, 0.5);
      const CMat2 gi = g.inverse();
      EXPECT_EQ(classify_gauge(g * P * gi, g * R * gi), expected);
    }
  }
}

TEST(Solvable, ClosedFormSolvesReducedSystem) {
  const SolvableState s = solvable_state(Expr::var("a"), Expr::var("b"), Expr::var("c"));
  for (const Expr& e : solvable_residuals(s)) EXPECT_TRUE(is_symbolically_zero(e)) << e.str();
  EXPECT_TRUE(all_zero(flow_residual(s.P, s.Q, s.R, s.chart)));
  EXPECT_EQ(classify_gauge(to_numeric(s.P, {}), to_numeric(s.R, {{"t", 0.4}, {"a", 1.0}, {"b", 0.5}})),
            GaugeClass::Solvable);
}

TEST(Solvable, PerturbedClosedFormFails) {
  const Expr t = Expr::var("t");
  const SolvableState s = solvable_state_from(Expr(4) * tanh(t), Expr(3) * tanh(t), sinh(Expr(2) * t));
  const auto r = solvable_residuals(s);
  EXPECT_FALSE(is_zero(std::vector<Expr>(r.begin(), r.end())).zero());
}

TEST(Solvable, ConstantR1IsRejected) {
  EXPECT_THROW(solvable_state_from(Expr(3), Expr::var("t"), Expr()), DomainError);
}

TEST(Trajectory, PiiMatchesDirectMatrixFlow) {
  std::vector<double> times;
  for (int i = 1; i <= 20; ++i) times.push_back(i * 0.05);
  for (double alpha : {0.0, 1.0}) {
    const auto traj = pii_trajectory(alpha, {0.1, 0.2, 1.0}, 0.0, times);
    ASSERT_EQ(traj.size(), times.size());
    for (const auto& s : traj) {
      EXPECT_LT(s.flow_mismatch, 1e-8) << "alpha " << alpha << " t " << s.t;
      EXPECT_LT((s.P - traj.front().P).norm(), 1e-10);
      EXPECT_LT(std::abs(s.Q.trace()) + std::abs(s.R.trace()), 1e-12);
    }
  }
}

TEST(Trajectory, PiMatchesDirectMatrixFlow) {
  std::vector<double> times;
  for (int i = 1; i <= 16; ++i) times.push_back(i * 0.05);
  for (const auto& s : pi_trajectory({0.0, 1.0}, 0.0, times)) EXPECT_LT(s.flow_mismatch, 1e-8) << "t " << s.t;
}

TEST(Trajectory, PoleTriggersGuard) {
  // ÿ = 6y² + t from y = 1 reaches a pole before t = 2.
  EXPECT_THROW(pi_trajectory({1.0, 0.0}, 0.0, {2.0}), IntegrationFailure);
}

namespace {

NumericLax pii_lax(double alpha) { return pii_numeric_lax(alpha, {0.1, 0.2, 1.0}); }

}  // namespace

TEST(Flatness, PiiPairIsPathIndependent) {
  EXPECT_LT(flatness_check(pii_lax(0.0), 0.0, 1.0, 0.0, 0.5).defect, 1e-6);
}

TEST(Flatness, PiPairIsPathIndependent) {
  EXPECT_LT(flatness_check(pi_numeric_lax({0.0, 1.0}), 0.0, 1.0, 0.0, 0.5).defect, 1e-6);
}

TEST(Flatness, SolvablePairIsPathIndependent) {
  const NumericLax lax = solvable_numeric_lax(Expr::rational(1, 2), Expr::rational(1, 3), Expr::rational(1, 5));
  EXPECT_LT(flatness_check(lax, 0.0, 1.0, 0.2, 0.8).defect, 1e-6);
}

TEST(Flatness, PerturbedSolvablePairIsNotFlat) {
  NumericLax lax = solvable_numeric_lax(Expr::rational(1, 2), Expr::rational(1, 3), Expr::rational(1, 5));
  const auto base = lax.A;
  lax.A = [base](double t, const OdeState& s, Complex l) { return CMat2(base(t, s, l) + 0.1 * t * sl2_numeric_basis()[0]); };
  EXPECT_GT(flatness_check(lax, 0.0, 1.0, 0.2, 0.8).defect, 1e-4);
}

TEST(Flatness, IncompatiblePairHasLargeDefect) {
  std::mt19937_64 rng(5);
  const CMat2 a0 = random_sl2(rng), a1 = random_sl2(rng), b0 = random_sl2(rng), b1 = random_sl2(rng);
  NumericLax lax;
  lax.A = [=](double t, const OdeState&, Complex l) { return CMat2(a0 + t * a1 + l * b1); };
  lax.B = [=](double t, const OdeState&, Complex l) { return CMat2(b0 + l * l * a1 + t * b1); };
  EXPECT_GT(flatness_check(lax, 0.0, 1.0, 0.0, 1.0).defect, 1e-2);
}

TEST(Flatness, DefectScalesWithArea) {
  NumericLax lax = pii_lax(0.0);
  const auto base = lax.B;
  const CMat2 kick = 1e-3 * sl2_numeric_basis()[2];
  lax.B = [base, kick](double t, const OdeState& s, Complex l) { return CMat2(base(t, s, l) + kick); };
  const double full = flatness_check(lax, 0.0, 0.2, 0.0, 0.2).defect;
  const double half = flatness_check(lax, 0.0, 0.1, 0.0, 0.1).defect;
  EXPECT_GT(full, 1e-7);
  EXPECT_NEAR(half / full, 0.25, 0.25 * 0.3);
}

TEST(AltFrame, TransformedStateSolvesFlow) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 3; ++i) {
    const AltFrameResult r = alt_frame_check(random_sl2(rng), random_sl2(rng), random_sl2(rng), 0.0, 1.0, 10);
    EXPECT_LT(r.max_p_drift, 1e-8);
    EXPECT_LT(r.max_flow_mismatch, 1e-8);
    EXPECT_LT(r.max_identity_residual, 1e-12);
  }
}

TEST(AltFrame, ZeroStateStaysZero) {
  const CMat2 z = CMat2::Zero();
  const AltFrameResult r = alt_frame_check(z, z, z, 0.0, 1.0, 4);
  EXPECT_EQ(r.max_p_drift + r.max_flow_mismatch + r.max_identity_residual, 0.0);
}

TEST(Ode, RepeatedAndInitialTimesAreAllowed) {
  const OdeRhs decay = [](const OdeState& x, OdeState& dx, double) { dx = {-x[0]}; };
  const auto out = integrate_at(decay, {1.0}, 0.0, {0.0, 0.5, 0.5, 1.0});
  ASSERT_EQ(out.size(), 4u);
  EXPECT_DOUBLE_EQ(out[0][0], 1.0);
  EXPECT_NEAR(out[1][0], std::exp(-0.5), 1e-9);
  EXPECT_EQ(out[1], out[2]);
  EXPECT_NEAR(out[3][0], std::exp(-1.0), 1e-9);
}

TEST(Ode, NonMonotoneTimesRejected) {
  const OdeRhs decay = [](const OdeState& x, OdeState& dx, double) { dx = {-x[0]}; };
  EXPECT_THROW(integrate_at(decay, {1.0}, 0.0, {0.5, 0.2, 1.0}), DomainError);
}
