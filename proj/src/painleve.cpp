#include "nkgeo/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>

#include "nkgeo/curvature.hpp"
#include "nkgeo/error.hpp"
#include "nkgeo/forms.hpp"
#include "nkgeo/rng.hpp"

namespace nkgeo {
namespace {

Expr tidy(const Expr& e) { return simplify(expand(simplify(e))); }

const Expr kHalf = Expr::rational(1, 2);
const Expr kQuarter = Expr::rational(1, 4);

/// Sign relating the computed Ricci tensor of the solvable family to ½ sinh t cosh³t σ³⊗σ³.
constexpr double kRicciDisplaySign = 1.0;

/// Ω(X, Y) = kNullStructureSign · g(NX, Y) for the PI null structure.
const Expr kNullStructureSign = Expr(-1);

std::vector<Expr> inverse4(const std::vector<Expr>& m) {
  const Expr det = tidy(determinant(m, 4));
  if (det.is_zero()) throw DomainError("tetrad is degenerate");
  std::vector<Expr> out(16);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      std::vector<Expr> minor;
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
          if (r != i && c != j) minor.push_back(m[r * 4 + c]);
      Expr cof = determinant(minor, 3);
      if ((i + j) % 2 == 1) cof = -cof;
      out[j * 4 + i] = tidy(cof / det);
    }
  return out;
}

/// Σ c_β θ^β with θ = (dt, σ¹, σ², σ³) as components on (t, p, q, r).
std::vector<Expr> to_chart(const InvariantForm& c) {
  const auto& frame = sl2_frame();
  std::vector<Expr> out{c[0], Expr(), Expr(), Expr()};
  for (int a = 0; a < 3; ++a) {
    const auto s = orbit_sigma(frame, a);
    for (std::size_t i = 1; i < 4; ++i) out[i] += c[static_cast<std::size_t>(a) + 1] * s[i];
  }
  for (Expr& e : out) e = simplify(e);
  return out;
}

struct Spec {
  FamilyKind kind;
  std::string label;
  Mat2 P, Q, R;
  Expr x;  ///< extra L₂ shift in E₁₂, E₂₁
  std::vector<JetRule> jets;
  std::vector<std::string> data;
  std::vector<Expr> singular;
  Expr k;
  Expr normalization;
  std::array<InvariantForm, 4> displayed_coframe;
  std::array<Expr, 9> displayed_gamma;
  std::array<Expr, 3> displayed_n;
  int omega_a, omega_b;
  Expr omega_coefficient;
  std::array<InvariantForm, 4> corrected_coframe = displayed_coframe;
  std::array<Expr, 9> corrected_gamma = displayed_gamma;
  std::vector<std::string> corrections = {};

  void correct_gamma(std::size_t a, std::size_t b, const Expr& value, const std::string& name) {
    corrected_gamma[a * 3 + b] = corrected_gamma[b * 3 + a] = value;
    corrections.push_back(name);
  }
};

std::array<Expr, 9> symmetric(const Expr& g11, const Expr& g12, const Expr& g13, const Expr& g22, const Expr& g23,
                              const Expr& g33) {
  return {g11, g12, g13, g12, g22, g23, g13, g23, g33};
}

PainleveFamily assemble(Spec s, const FamilyOptions& options) {
  const auto& frame = sl2_frame();
  if (options.jets) s.jets = *options.jets;
  Expr omega_scale = s.omega_coefficient;
  if (options.k) {
    omega_scale = tidy(omega_scale * *options.k / s.k);
    s.k = *options.k;
  }
  s.singular.push_back(s.k);

  const auto cq = components(s.Q), cp = components(s.P), cr = components(s.R);
  std::array<InvariantForm, 4> tetrad{
      InvariantForm{Expr(), cq[0], cq[1], cq[2]},
      InvariantForm{Expr(-2), Expr(), s.x, Expr()},
      InvariantForm{Expr(2), tidy(-cr[0]), tidy(-cr[1] - s.x), tidy(-cr[2])},
      InvariantForm{Expr(), cp[0], cp[1], cp[2]},
  };
  // e^m(E_i) = δ: the co-frame matrix is the inverse transpose of the tetrad matrix.
  std::vector<Expr> mt(16);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t b = 0; b < 4; ++b) mt[b * 4 + i] = tetrad[i][b];
  const auto inv = inverse4(mt);
  std::array<InvariantForm, 4> coframe;
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t b = 0; b < 4; ++b) coframe[m][b] = inv[m * 4 + b];

  const Expr scale = s.normalization * s.k;
  auto G = [&](std::size_t b, std::size_t d) {
    const auto& e = coframe;
    return tidy(scale * kHalf * (e[0][b] * e[3][d] + e[3][b] * e[0][d] - e[1][b] * e[2][d] - e[2][b] * e[1][d]));
  };
  std::array<Expr, 9> gamma;
  std::array<Expr, 3> n;
  for (std::size_t a = 0; a < 3; ++a) {
    n[a] = G(0, a + 1);
    for (std::size_t b = 0; b < 3; ++b) gamma[a * 3 + b] = G(a + 1, b + 1);
  }

  ZeroTestOptions probe;
  probe.lo = 0.2;
  probe.hi = 1.5;
  CohomogeneityOneMetric built = cohomogeneity_metric(s.corrected_gamma, s.displayed_n, frame, s.jets, probe);

  std::vector<Expr> omega = sigma_wedge(frame, s.omega_a, s.omega_b);
  for (Expr& e : omega) e = simplify(omega_scale * e);

  PainleveFamily f{s.kind,
                   s.label,
                   s.P,
                   s.Q,
                   s.R,
                   orbit_chart(s.jets),
                   s.data,
                   s.k,
                   s.singular,
                   s.normalization,
                   tetrad,
                   coframe,
                   s.displayed_coframe,
                   s.corrected_coframe,
                   gamma,
                   n,
                   G(0, 0),
                   s.displayed_gamma,
                   s.displayed_n,
                   s.corrected_gamma,
                   s.corrections,
                   built.g,
                   std::move(omega),
                   std::nullopt};
  return f;
}

// ----------------------------------------------------------- numerics

std::vector<std::string> family_variables(const PainleveFamily& f, const Point& fixed) {
  std::set<std::string> names;
  for (const auto& v : f.chart.variables()) names.insert(v);
  auto add = [&](const Expr& e) {
    for (const auto& v : free_variables(e)) names.insert(v);
  };
  for (const Expr& e : f.g.components()) add(e);
  for (const Expr& e : f.omega) add(e);
  add(f.k);
  for (const auto& j : f.chart.jets()) add(j.rate);
  std::vector<std::string> out;
  for (const auto& v : names)
    if (!fixed.count(v)) out.push_back(v);
  return out;
}

std::vector<Complex> eval_all(const std::vector<Expr>& v, const Point& p) {
  Evaluator ev(p);
  std::vector<Complex> out;
  out.reserve(v.size());
  for (const Expr& e : v) out.push_back(ev(e));
  return out;
}

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const Complex& c : v) m = std::max(m, std::abs(c));
  return m;
}

/// Evaluates a residual at every point, skipping singular ones; passes when all are below tol.
CheckResult numeric_row(std::string name, const std::vector<Point>& points,
                        const std::function<double(const Point&)>& residual, double tol) {
  CheckResult c;
  c.name = std::move(name);
  c.tolerance = tol;
  c.pass = true;
  for (const Point& p : points) {
    double r;
    try {
      r = residual(p);
    } catch (const SingularEvaluation&) {
      continue;
    }
    if (std::isnan(r)) r = INFINITY;
    ++c.points;
    c.residuals.push_back(r);
    c.max_residual = std::max(c.max_residual, r);
    if (!(r < tol) && c.pass) {
      c.pass = false;
      c.witness = p;
    }
  }
  if (c.points == 0) {
    c.pass = false;
    c.note = "no regular sample point";
  }
  return c;
}

ZeroTestOptions zero_options(const PainleveFamily& f, const FamilyCheckOptions& o) {
  ZeroTestOptions z;
  z.points = o.points;
  z.seed = o.seed;
  z.tol = o.tol;
  z.lo = o.lo;
  z.hi = o.hi;
  z.fixed = o.fixed;
  z.symbolic = SymbolicMode::Simplify;
  z.sample_variables = family_variables(f, o.fixed);
  z.regular = [locus = f.singular_locus, margin = o.margin](const Point& p) {
    try {
      for (const Expr& s : locus)
        if (!(std::abs(eval(s, p)) > margin)) return false;
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  return z;
}

Tensor two_tensor(const std::vector<Expr>& comps) {
  Tensor t(4, {Slot::Down, Slot::Down});
  for (std::size_t i = 0; i < 16; ++i) t[i] = comps[i];
  return t;
}

CMatrix as_matrix(const std::vector<Complex>& v) {
  CMatrix m(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) m(i, j) = v[static_cast<std::size_t>(i * 4 + j)];
  return m;
}

}  // namespace

std::vector<Expr> pi_null_structure(const Expr& c) {
  const Expr z = Expr::var("z");
  const auto& frame = sl2_frame();
  const VectorField L2 = invariant_field(frame, Expr(), {Expr(), Expr(1), Expr()});
  const auto s1 = orbit_sigma(frame, 0), s3 = orbit_sigma(frame, 2);
  std::vector<Expr> N(16);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      Expr e = L2[a] * s3[b];
      if (a == 0) e -= c / z * s1[b];
      N[a * 4 + b] = simplify(kHalf * e);
    }
  return N;
}

const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::PI: return "PI";
    case FamilyKind::PII: return "PII";
    case FamilyKind::Solvable: return "solvable";
  }
  return "?";
}

const char* to_string(KernelType k) { return k == KernelType::Nilpotent ? "nilpotent" : "non-nilpotent"; }

std::vector<JetRule> pi_jets(const Expr& shift) {
  const Expr y = Expr::var("y"), z = Expr::var("z"), t = Expr::var("t");
  return {{"y", "t", z}, {"z", "t", Expr(6) * y * y + t + shift}};
}

std::vector<JetRule> pii_jets(const Expr& alpha) {
  const Expr y = Expr::var("y"), z = Expr::var("z"), u = Expr::var("u"), t = Expr::var("t");
  return {{"u", "t", -y * u}, {"z", "t", Expr(-2) * y * z + alpha - kHalf}, {"y", "t", z + y * y + kHalf * t}};
}

std::vector<JetRule> free_jets(const std::vector<std::string>& names) {
  std::vector<JetRule> out;
  for (const auto& n : names) out.push_back({n, "t", Expr::var("d_" + n)});
  return out;
}

PainleveFamily pi_family(const FamilyOptions& options) {
  const Expr t = Expr::var("t"), y = Expr::var("y"), z = Expr::var("z");
  const SymbolicState st = pi_state();
  const Expr e21s1 = y / (Expr(2) * z);
  Spec s{FamilyKind::PI,
         "PI",
         st.P,
         st.Q,
         st.R,
         y,
         pi_jets(),
         {"y", "z"},
         {z},
         Expr(16) * z,
         Expr(1),
         {InvariantForm{Expr(), Expr(-1) / (Expr(2) * z), Expr(), Expr()},
          InvariantForm{-kHalf, e21s1, Expr(), -kQuarter},
          InvariantForm{Expr(), e21s1, Expr(), -kQuarter},
          InvariantForm{kHalf * y, (y * y + kQuarter * t) / z, Expr(1), -kQuarter * y}},
         symmetric(-(Expr(12) * y * y + Expr(2) * t) / z, Expr(-4), Expr(3) * y, Expr(), Expr(), -z),
         {Expr(), Expr(), -z},
         2,
         0,
         Expr(2)};
  PainleveFamily f = assemble(std::move(s), options);
  f.N = pi_null_structure(Expr(4));
  return f;
}

PainleveFamily pii_family(const Expr& alpha, const FamilyOptions& options) {
  const Expr t = Expr::var("t"), y = Expr::var("y"), z = Expr::var("z"), u = Expr::var("u");
  const SymbolicState st = pii_state(alpha);
  const Expr K = Expr(4) * y * z + 1 - Expr(2) * alpha;
  const Expr e21s2 = -(Expr(2) * y * z + 1 - Expr(2) * alpha) / (u * K), e21s3 = y * u / K;
  const Expr g22 = (Expr(8) * pow(z, 3) + (Expr(8) * y * y + Expr(4) * t) * z * z + (Expr(8) - Expr(16) * alpha) * y * z +
                    Expr(8) * pow(alpha - kHalf, 3)) /
                   (K * u * u);
  const Expr g23 = Expr(-2) * (Expr(2) * y * y * z + (1 - Expr(2) * alpha) * y - z * (Expr(2) * z + t)) / K;
  Spec s{FamilyKind::PII,
         "PII(alpha=" + to_string(alpha) + ")",
         st.P,
         st.Q,
         st.R,
         Expr(),
         pii_jets(alpha),
         {"y", "z", "u"},
         {u},
         K,
         Expr(-2),
         {InvariantForm{Expr(), Expr(), Expr(-2) * z / (u * K), -u / K},
          InvariantForm{-kHalf, Expr(), e21s2, e21s3},
          InvariantForm{Expr(), Expr(), e21s2, e21s3},
          InvariantForm{Expr(), kHalf, z * (Expr(2) * z + t) / (u * K), u * (z + kHalf * t) / K}},
         symmetric(Expr(), z / u, u / Expr(2), g22, g23, u * u * (Expr(2) * y * y + Expr(2) * z + t) / K),
         {Expr(), (Expr(2) * y * z - Expr(2) * alpha + 1) / (Expr(2) * u), -y * u / Expr(2)},
         2,
         1,
         Expr(2)};
  s.correct_gamma(1, 1, g22 - Expr(8) * pow(alpha - kHalf, 3) / (K * u * u) + Expr(8) * pow(alpha - kHalf, 2) / (K * u * u),
                  "g22: constant term 8(alpha-1/2)^2");
  return assemble(std::move(s), options);
}

PainleveFamily solvable_family(const Expr& a, const Expr& b, const Expr& c, const FamilyOptions& options) {
  const Expr t = Expr::var("t");
  const SolvableState st = solvable_state(a, b, c);
  const Expr ab = a + b * t, ch = cosh(t), sh = sinh(t), cth = ch / sh;
  const Expr e21s1 = -kQuarter * cth, e21s3 = -kHalf * (b * ch * ch + ab * cth);
  const Expr e22s3 = Expr(2) * b * ab * cth + b * b * ch * ch - Expr::rational(1, 8) * sh * pow(ch, 3) - ab * ab -
                     c / Expr(4) * ch * ch;
  const Expr coth2 = cosh(Expr(2) * t) / sinh(Expr(2) * t);
  Spec s{FamilyKind::Solvable,
         "solvable(a=" + to_string(a) + ",b=" + to_string(b) + ",c=" + to_string(c) + ")",
         st.P,
         st.Q,
         st.R,
         Expr(),
         {},
         {},
         {},
         Expr(8) * sh / pow(ch, 3),
         Expr(-2),
         {InvariantForm{Expr(), Expr(), Expr(), kQuarter * ch * ch},
          InvariantForm{-kHalf, e21s1, Expr(), e21s3},
          InvariantForm{Expr(), e21s1, Expr(), e21s3},
          InvariantForm{Expr(), b * cth - ab, Expr(1), e22s3}},
         symmetric(Expr(2) / sinh(Expr(2) * t), Expr(), ab * coth2, Expr(), -tanh(Expr(2) * t),
                   Expr(4) * ab * ab * cth +
                       Expr::rational(1, 8) * pow(sinh(Expr(2) * t), 2) * (1 + Expr(2) * c * cth)),
         {1 / (ch * ch), Expr(), Expr(2) * ab / (ch * ch) + Expr(2) * b * tanh(t)},
         2,
         0,
         Expr(1)};
  s.corrected_coframe[3][3] = e22s3 + c / Expr(4) * ch * ch - c / Expr(4) * pow(ch, 4);
  s.corrections.push_back("e22: c-term c/4 cosh^4 t");
  s.correct_gamma(0, 2, Expr(2) * ab * cth, "g13: 2(a+bt) coth t");
  s.correct_gamma(1, 2, Expr(-2) * tanh(t), "g23: -2 tanh t");
  return assemble(std::move(s), options);
}

std::vector<Expr> solvable_ricci_display() {
  const Expr t = Expr::var("t");
  const auto s3 = orbit_sigma(sl2_frame(), 2);
  const Expr c = kHalf * sinh(t) * pow(cosh(t), 3);
  std::vector<Expr> out(16);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i * 4 + j] = simplify(c * s3[i] * s3[j]);
  return out;
}

Metric solvable_tau_metric() {
  const Expr tau = tanh(Expr::var("t"));
  const Expr w = 1 - tau * tau;  // dτ = (1 − τ²) dt
  const auto gamma = symmetric(w / tau, Expr(), Expr(), Expr(), Expr(-2) * tau, tau * tau / (Expr(2) * w * w));
  return cohomogeneity_metric(gamma, {w, Expr(), Expr()}, sl2_frame()).g;
}

// ------------------------------------------------------------ checks

std::vector<Point> family_points(const PainleveFamily& family, const FamilyCheckOptions& options) {
  if (!options.at.empty()) {
    const auto regular = zero_options(family, options).regular;
    std::vector<Point> kept;
    std::copy_if(options.at.begin(), options.at.end(), std::back_inserter(kept), regular);
    return kept;
  }
  return sample_points(family_variables(family, options.fixed), zero_options(family, options));
}

CheckResult omega_parallel_check(const PainleveFamily& family, const FamilyCheckOptions& options) {
  const auto points = family_points(family, options);
  const CompiledMetric cm(family.g);
  const CompiledTensor omega(two_tensor(family.omega), family.chart);
  return numeric_row(
      "omega_parallel", points,
      [&](const Point& p) {
        const PointCurvature pc = cm.at(p);
        return max_abs(omega.covariant_derivative(p, pc)) / std::max(1.0, max_abs(omega.values(p)));
      },
      options.tol);
}

Report verify_family(const PainleveFamily& f, const FamilyCheckOptions& options) {
  Report report;
  const ZeroTestOptions zo = zero_options(f, options);
  ZeroTestOptions full = zo;
  full.symbolic = SymbolicMode::Full;

  bool symmetric_gamma = true;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      symmetric_gamma = symmetric_gamma && simplify(f.gamma[a * 3 + b] - f.gamma[b * 3 + a]).is_zero() &&
                        simplify(f.displayed_gamma[a * 3 + b] - f.displayed_gamma[b * 3 + a]).is_zero();
  report.checks.push_back(exact_check("gamma_symmetric", symmetric_gamma));

  auto pairing = [&](const std::array<InvariantForm, 4>& e) {
    std::vector<Expr> out;
    for (std::size_t m = 0; m < 4; ++m)
      for (std::size_t i = 0; i < 4; ++i) {
        Expr s = m == i ? Expr(-1) : Expr();
        for (std::size_t b = 0; b < 4; ++b) s += e[m][b] * f.tetrad[i][b];
        out.push_back(simplify(s));
      }
    return out;
  };
  report.checks.push_back(to_check("tetrad_duality", is_zero(pairing(f.coframe), zo), zo.tol));
  report.checks.push_back(to_check("displayed_coframe", is_zero(pairing(f.displayed_coframe), zo), zo.tol));
  report.checks.back().informational = true;
  report.checks.push_back(to_check("corrected_coframe", is_zero(pairing(f.corrected_coframe), zo), zo.tol));
  report.checks.push_back(to_check("dt_null", is_zero(f.g_tt, zo), zo.tol));

  const char* names[12] = {"g11", "g12", "g13", "g21", "g22", "g23", "g31", "g32", "g33", "n1", "n2", "n3"};
  auto table_row = [&](std::string name, const std::array<Expr, 9>& gamma, const std::array<Expr, 3>& n) {
    std::vector<Expr> diff;
    for (std::size_t i = 0; i < 9; ++i) diff.push_back(simplify(gamma[i] - f.corrected_gamma[i]));
    for (std::size_t i = 0; i < 3; ++i) diff.push_back(simplify(n[i] - f.displayed_n[i]));
    CheckResult row = to_check(std::move(name), is_zero(diff, zo), zo.tol);
    if (!row.pass) {
      std::string bad;
      for (std::size_t i = 0; i < diff.size(); ++i)
        if (!is_zero(diff[i], zo).zero()) bad += std::string(bad.empty() ? "" : ",") + names[i];
      row.note = "differing entries: " + bad;
    }
    return row;
  };
  report.checks.push_back(table_row("coframe_gamma", f.gamma, f.n));

  // Route (i) is the corrected table through γ, n; route (ii) the co-frame on the chart.
  Coframe chart_coframe;
  for (std::size_t m = 0; m < 4; ++m) chart_coframe[m] = to_chart(f.corrected_coframe[m]);
  ZeroTestOptions probe = zo;
  probe.points = 3;
  const Metric from_coframe = metric_from_coframe(f.chart, chart_coframe, f.normalization * f.k, probe);
  std::vector<Expr> route;
  for (std::size_t i = 0; i < 16; ++i)
    route.push_back(f.g.components()[i] - from_coframe.components()[i]);
  CheckResult routes = to_check("routes_agree", is_zero(route, full), zo.tol);
  routes.note = routes.symbolic_zero ? "symbolic" : "numeric only";
  report.checks.push_back(routes);

  CheckResult tabulated = table_row("tabulated_gamma", f.displayed_gamma, f.displayed_n);
  if (!f.corrections.empty()) {
    std::string list;
    for (const auto& c : f.corrections) list += (list.empty() ? "" : "; ") + c;
    tabulated.note += (tabulated.note.empty() ? "" : "; ") + std::string("corrected: ") + list;
  }
  tabulated.informational = true;
  report.checks.push_back(tabulated);

  const Form omega_form = Form::two_form(f.omega, 4);
  report.checks.push_back(
      to_check("omega_closed", is_zero(coefficients(exterior_derivative(f.chart, omega_form).simplified()), zo), zo.tol));

  const auto points = family_points(f, options);
  const std::size_t skipped = options.at.empty() ? 0 : options.at.size() - points.size();
  const CompiledMetric cm(f.g);
  const CompiledTensor omega(two_tensor(f.omega), f.chart);

  report.checks.push_back(numeric_row(
      "omega_parallel", points,
      [&](const Point& p) {
        const PointCurvature pc = cm.at(p);
        return max_abs(omega.covariant_derivative(p, pc)) / std::max(1.0, max_abs(omega.values(p)));
      },
      options.tol));

  CheckResult weyl = numeric_row(
      "weyl_plus", points,
      [&](const Point& p) {
        const PointCurvature pc = cm.at(p);
        const int o = self_dual_orientation(pc.g, omega.values(p));
        if (o == 0) return static_cast<double>(INFINITY);
        return max_abs(weyl_split(pc, o).plus) / std::max(1.0, max_abs(pc.riemann_lower));
      },
      options.tol);
  weyl.note = "orientation making Ω self-dual";
  report.checks.push_back(weyl);

  ZeroTestOptions ko = zo;
  ko.points = std::min(zo.points, 6);
  report.checks.push_back(killing_check(f.g, sl2_frame(), ko));

  if (f.N) {
    const auto& N = *f.N;
    const auto& g = f.g.components();
    std::vector<Expr> sq(16), skew(16), gn(16);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) {
        Expr s, l, r;
        for (std::size_t c = 0; c < 4; ++c) {
          s += N[a * 4 + c] * N[c * 4 + b];
          l += g[a * 4 + c] * N[c * 4 + b];
          r += g[b * 4 + c] * N[c * 4 + a];
        }
        sq[a * 4 + b] = simplify(s);
        skew[a * 4 + b] = simplify(l + r);
        gn[b * 4 + a] = simplify(f.omega[b * 4 + a] - kNullStructureSign * l);
      }
    report.checks.push_back(to_check("n_squared", is_zero(sq, zo), zo.tol));
    report.checks.push_back(to_check("n_skew", is_zero(skew, zo), zo.tol));
    CheckResult row = to_check("omega_is_gN", is_zero(gn, zo), zo.tol);
    row.note = "Ω(X,Y) = -g(NX,Y)";
    report.checks.push_back(row);
  }

  if (f.kind == FamilyKind::Solvable) {
    const auto display = solvable_ricci_display();
    CheckResult row = numeric_row(
        "ricci_profile", points,
        [&](const Point& p) {
          const PointCurvature pc = cm.at(p);
          const auto d = eval_all(display, p);
          double r = 0.0;
          for (std::size_t i = 0; i < 16; ++i) r = std::max(r, std::abs(pc.ricci[i] - kRicciDisplaySign * d[i]));
          return r / std::max(1.0, max_abs(pc.ricci));
        },
        options.tol);
    row.note = "global sign " + std::to_string(static_cast<int>(kRicciDisplaySign));
    report.checks.push_back(row);
  }
  if (skipped > 0)
    for (auto& row : report.checks)
      if (row.name == "omega_parallel" || row.name == "weyl_plus" || row.name == "ricci_profile")
        row.note += (row.note.empty() ? "" : "; ") + std::to_string(skipped) +
                    " requested point(s) inside the singular-locus margin skipped";
  return report;
}

// -------------------------------------------------------- trajectories

namespace {

std::vector<Point> with_orbit_coordinates(std::vector<Point> points, std::uint64_t seed) {
  Rng rng(seed);
  for (Point& p : points) {
    p["p"] = rng.uniform(-1.0, 1.0);
    p["q"] = rng.uniform(-1.0, 1.0);
    p["r"] = rng.uniform(-1.0, 1.0);
  }
  return points;
}

}  // namespace

std::vector<Point> pi_trajectory_points(const std::vector<double>& times, std::uint64_t seed) {
  std::vector<Point> out;
  for (const auto& s : pi_trajectory({0.0, 1.0}, 0.0, times))
    out.push_back({{"t", s.t}, {"y", s.state[0]}, {"z", s.state[1]}});
  return with_orbit_coordinates(std::move(out), seed);
}

std::vector<Point> pii_trajectory_points(double alpha, const std::vector<double>& times, std::uint64_t seed) {
  std::vector<Point> out;
  for (const auto& s : pii_trajectory(alpha, {0.1, 0.2, 1.0}, 0.0, times))
    out.push_back({{"t", s.t}, {"y", s.state[0]}, {"z", s.state[1]}, {"u", s.state[2]}, {"alpha", alpha}});
  return with_orbit_coordinates(std::move(out), seed);
}

// ------------------------------------------------------------- kernel

KernelDiagnostic kernel_type(const PainleveFamily& f, const FamilyCheckOptions& options) {
  const auto points = family_points(f, options);
  const auto& frame = sl2_frame();
  std::array<VectorField, 3> L;
  for (int a = 0; a < 3; ++a)
    L[static_cast<std::size_t>(a)] =
        invariant_field(frame, Expr(), {Expr(a == 0 ? 1 : 0), Expr(a == 1 ? 1 : 0), Expr(a == 2 ? 1 : 0)});
  const CompiledMetric cm(f.g);
  KernelDiagnostic out{KernelType::Nilpotent, {}, 0.0};
  bool have = false;
  for (const Point& p : points) {
    CMatrix g, w;
    Eigen::Matrix<Complex, 4, 3> basis;
    try {
      g = cm.metric_at(p);
      w = as_matrix(eval_all(f.omega, p));
      for (int a = 0; a < 3; ++a) {
        const auto v = eval_all(L[static_cast<std::size_t>(a)], p);
        for (int i = 0; i < 4; ++i) basis(i, a) = v[static_cast<std::size_t>(i)];
      }
    } catch (const SingularEvaluation&) {
      continue;
    }
    const CMatrix A = g.inverse() * w * basis;
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullV);
    const auto sv = svd.singularValues();
    if (!(sv(2) <= 1e-9 * sv(0)) || !(sv(1) > 1e-6 * sv(0)))
      throw DomainError("kernel of N meets the orbit in other than a line");
    const Eigen::Vector3cd c = svd.matrixV().col(2);
    const auto& B = sl2_numeric_basis();
    const CMat2 m = c(0) * B[0] + c(1) * B[1] + c(2) * B[2];
    const double rel = std::abs(m.determinant()) / c.squaredNorm();
    out.relative_det = std::max(out.relative_det, rel);
    if (!have) {
      out.element = {c(0), c(1), c(2)};
      have = true;
    }
  }
  if (!have) throw DomainError("kernel_type: no regular sample point");
  out.type = out.relative_det < 1e-9 ? KernelType::Nilpotent : KernelType::NonNilpotent;
  return out;
}

}  // namespace nkgeo
