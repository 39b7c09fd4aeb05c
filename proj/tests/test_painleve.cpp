#include <gtest/gtest.h>

#include "nkgeo/curvature.hpp"
#include "nkgeo/error.hpp"
#include "nkgeo/painleve.hpp"

using namespace nkgeo;

namespace {

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

void expect_rows(const Report& r, const std::vector<std::string>& names) {
  for (const auto& n : names) EXPECT_TRUE(r[n].pass) << n << " residual " << r[n].max_residual << " " << r[n].note;
}

const std::vector<std::string> kCoreRows{"gamma_symmetric", "tetrad_duality", "corrected_coframe", "dt_null",
                                         "coframe_gamma",   "routes_agree",   "omega_closed",      "omega_parallel",
                                         "weyl_plus",       "killing"};

Tensor two_tensor(const std::vector<Expr>& c) {
  Tensor t(4, {Slot::Down, Slot::Down});
  for (std::size_t i = 0; i < 16; ++i) t[i] = c[i];
  return t;
}

}  // namespace

TEST(PainleveFamilies, PiSymbolicRows) {
  const Report r = verify_family(pi_family());
  expect_rows(r, kCoreRows);
  expect_rows(r, {"displayed_coframe", "tabulated_gamma", "n_squared", "n_skew", "omega_is_gN"});
  EXPECT_TRUE(r["routes_agree"].symbolic_zero);
  EXPECT_TRUE(r["omega_closed"].symbolic_zero);
}

TEST(PainleveFamilies, PiiSymbolicRowsAndTabulatedEntry) {
  for (const Expr& alpha : {Expr(0), Expr(1), Expr::rational(1, 3)}) {
    const Report r = verify_family(pii_family(alpha));
    expect_rows(r, kCoreRows);
    EXPECT_TRUE(r["displayed_coframe"].pass);
    EXPECT_TRUE(r["routes_agree"].symbolic_zero);
    EXPECT_NE(r["tabulated_gamma"].note.find("g22"), std::string::npos);
  }
}

TEST(PainleveFamilies, PiiTabulatedCubeIsOnlyWrongAwayFromSpecialAlpha) {
  // 8(α−½)³ and 8(α−½)² agree at α = ½ and α = 3/2.
  EXPECT_TRUE(verify_family(pii_family(Expr::rational(1, 2)))["tabulated_gamma"].pass);
  EXPECT_TRUE(verify_family(pii_family(Expr::rational(3, 2)))["tabulated_gamma"].pass);
  EXPECT_FALSE(verify_family(pii_family(Expr(2)))["tabulated_gamma"].pass);
}

TEST(PainleveFamilies, SolvableRows) {
  const Report r = verify_family(solvable_family(Expr::rational(1, 2), Expr::rational(1, 3), Expr::rational(1, 5)));
  expect_rows(r, kCoreRows);
  expect_rows(r, {"ricci_profile"});
  EXPECT_FALSE(r["displayed_coframe"].pass);
  EXPECT_FALSE(r["tabulated_gamma"].pass);
}

TEST(PainleveFamilies, SolvableDisplayedCoframeIsDualWhenCVanishes) {
  const Report r = verify_family(solvable_family(Expr::rational(1, 2), Expr::rational(1, 3), Expr(0)));
  EXPECT_TRUE(r["displayed_coframe"].pass);
}

TEST(PainleveFamilies, SolvableTauReduction) {
  const PainleveFamily f = solvable_family(Expr(), Expr(), Expr());
  const Metric tau = solvable_tau_metric();
  std::vector<Expr> diff;
  for (std::size_t i = 0; i < 16; ++i) diff.push_back(f.g.components()[i] - tau.components()[i]);
  ZeroTestOptions o;
  o.lo = 0.2;
  o.hi = 1.5;
  o.symbolic = SymbolicMode::Full;
  const auto res = is_zero(diff, o);
  EXPECT_TRUE(res.zero());
  EXPECT_EQ(res.verdict, Verdict::SymbolicZero);
}

TEST(PainleveFamilies, RicciProfileFailsForWrongFactor) {
  const PainleveFamily f = solvable_family(Expr(1), Expr(), Expr(2));
  const CompiledMetric cm(f.g);
  Point p{{"t", 0.7}, {"p", 0.3}, {"q", -0.2}, {"r", 0.5}};
  const PointCurvature pc = cm.at(p);
  const auto display = solvable_ricci_display();
  double diff = 0.0, doubled = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    const Complex d = eval(display[i], p);
    diff = std::max(diff, std::abs(pc.ricci[i] - d));
    doubled = std::max(doubled, std::abs(pc.ricci[i] - 2.0 * d));
  }
  EXPECT_LT(diff, 1e-9);
  EXPECT_GT(doubled, 1e-2);
}

TEST(PainleveFamilies, DisplayedPiNullStructureIsNotSkew) {
  PainleveFamily f = pi_family();
  f.N = pi_null_structure(Expr(2));
  const Report r = verify_family(f);
  EXPECT_TRUE(r["n_squared"].pass);
  EXPECT_FALSE(r["n_skew"].pass);
  EXPECT_FALSE(r["omega_is_gN"].pass);
}

TEST(PainleveFamilies, OmegaNotParallelOffShell) {
  FamilyOptions o;
  o.jets = pi_jets(Expr(1));
  EXPECT_FALSE(omega_parallel_check(pi_family(o)).pass);
  o.jets = pii_jets(Expr::rational(1, 2));
  EXPECT_FALSE(omega_parallel_check(pii_family(Expr(0), o)).pass);
}

TEST(PainleveFamilies, PiCovariantDerivativeBeforeImposingTheEquation) {
  FamilyOptions o;
  o.jets = free_jets({"y", "z"});
  const PainleveFamily f = pi_family(o);
  const CompiledMetric cm(f.g);
  const CompiledTensor omega(two_tensor(f.omega), f.chart);
  const auto& frame = sl2_frame();
  const auto s1 = orbit_sigma(frame, 0), s3 = orbit_sigma(frame, 2);
  const Expr y = Expr::var("y"), z = Expr::var("z"), t = Expr::var("t");
  const Expr A = (Expr(6) * y * y + t - Expr::var("d_z")) / z;
  const Expr B = Expr(3) * (z - Expr::var("d_y")) / z;
  const Expr kHalf = Expr::rational(1, 2);
  FamilyCheckOptions fo;
  fo.points = 5;
  for (const Point& p : family_points(f, fo)) {
    const PointCurvature pc = cm.at(p);
    const auto d = omega.covariant_derivative(p, pc);
    const auto w = omega.values(p);
    double err = 0.0, scale = 0.0;
    for (std::size_t ab = 0; ab < 16; ++ab)
      for (std::size_t c = 0; c < 4; ++c) {
        // Both factors vanish exactly on ẏ = z, ż = 6y² + t.
        const Complex expected = eval(kHalf * B * s1[c] - kHalf * A * s3[c], p) * w[ab];
        err = std::max(err, std::abs(d[ab * 4 + c] - expected));
        scale = std::max(scale, std::abs(expected));
      }
    EXPECT_GT(scale, 1e-3);
    EXPECT_LT(err, 1e-9 * std::max(1.0, scale));
  }
}

TEST(PainleveFamilies, ConformalFactorProbes) {
  const Expr t = Expr::var("t"), y = Expr::var("y"), z = Expr::var("z");
  FamilyOptions o;
  o.k = Expr(16) * z * (1 + Expr::rational(1, 100) * t);
  const PainleveFamily pi = pi_family(o);
  EXPECT_FALSE(omega_parallel_check(pi).pass);

  o.k = Expr(4) * y * z + 1 - Expr(2) * (Expr::rational(1, 3) + Expr::rational(1, 2));
  const PainleveFamily pii = pii_family(Expr::rational(1, 3), o);
  const Report r = verify_family(pii);
  EXPECT_FALSE(r["omega_parallel"].pass);
  EXPECT_FALSE(r["omega_closed"].pass);
}

TEST(PainleveFamilies, PiTrajectory) {
  const PainleveFamily f = pi_family();
  FamilyCheckOptions o;
  o.at = pi_trajectory_points(grid(0.0, 0.8, 10));
  o.tol = 1e-6;
  const Report r = verify_family(f, o);
  EXPECT_TRUE(r["omega_parallel"].pass) << r["omega_parallel"].max_residual;
  EXPECT_TRUE(r["weyl_plus"].pass) << r["weyl_plus"].max_residual;
  EXPECT_EQ(r["weyl_plus"].points, 10);
}

TEST(PainleveFamilies, PiiTrajectories) {
  for (double alpha : {0.0, 1.0}) {
    const PainleveFamily f = pii_family(Expr(static_cast<int>(alpha)));
    FamilyCheckOptions o;
    o.at = pii_trajectory_points(alpha, grid(0.0, 1.0, 10));
    o.tol = 1e-6;
    const Report r = verify_family(f, o);
    EXPECT_TRUE(r["omega_parallel"].pass) << alpha << " " << r["omega_parallel"].max_residual;
    EXPECT_TRUE(r["weyl_plus"].pass) << alpha << " " << r["weyl_plus"].max_residual;
  }
}

TEST(PainleveFamilies, KernelType) {
  const KernelDiagnostic pi = kernel_type(pi_family());
  EXPECT_EQ(pi.type, KernelType::Nilpotent);
  EXPECT_LT(pi.relative_det, 1e-12);
  for (const Expr& alpha : {Expr(0), Expr(1)}) {
    const KernelDiagnostic pii = kernel_type(pii_family(alpha));
    EXPECT_EQ(pii.type, KernelType::NonNilpotent);
    EXPECT_GT(pii.relative_det, 1e-3);
  }
  const KernelDiagnostic s = kernel_type(solvable_family(Expr(1), Expr(1), Expr(1)));
  EXPECT_EQ(s.type, KernelType::Nilpotent);
}

TEST(PainleveFamilies, FamilyInvariants) {
  for (const PainleveFamily& f : {pi_family(), pii_family(Expr(0)), solvable_family(Expr(), Expr(), Expr())}) {
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        EXPECT_TRUE(simplify(f.corrected_gamma[a * 3 + b] - f.corrected_gamma[b * 3 + a]).is_zero());
    EXPECT_EQ(f.omega.size(), 16u);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) EXPECT_TRUE(simplify(f.omega[a * 4 + b] + f.omega[b * 4 + a]).is_zero());
  }
}

TEST(PainleveFamilies, FixedParameterSymbolAlpha) {
  const PainleveFamily f = pii_family(Expr::var("alpha"));
  FamilyCheckOptions o;
  o.points = 5;
  const Report r = verify_family(f, o);
  expect_rows(r, {"routes_agree", "omega_parallel", "weyl_plus"});
}

TEST(PainleveFamilies, KernelOnDegenerateOmegaThrows) {
  PainleveFamily f = pi_family();
  for (Expr& e : f.omega) e = Expr();
  EXPECT_THROW(kernel_type(f), DomainError);
}

TEST(PainleveFamilies, PointsNearSingularLocusAreSkipped) {
  const PainleveFamily f = pii_family(Expr(1));
  FamilyCheckOptions o;
  o.at = pii_trajectory_points(1.0, {0.0, 0.5, 0.776});
  const auto kept = family_points(f, o);
  EXPECT_EQ(kept.size(), 2u);
  const Report r = verify_family(f, o);
  EXPECT_EQ(r["weyl_plus"].points, 2);
  EXPECT_NE(r["weyl_plus"].note.find("1 requested point"), std::string::npos);
}
