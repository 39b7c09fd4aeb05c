#include "nkgeo/sl2.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "nkgeo/error.hpp"

namespace nkgeo {
namespace {

Expr tidy(const Expr& e) { return simplify(expand(simplify(e))); }

std::vector<Expr> inverse_matrix(const std::vector<Expr>& m, std::size_t d, const char* what) {
  Expr det = tidy(determinant(m, d));
  if (det.is_zero()) throw DomainError(std::string(what) + " is singular");
  std::vector<Expr> out(d * d);
  std::vector<Expr> minor((d - 1) * (d - 1));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      std::size_t k = 0;
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
          if (a != i && b != j) minor[k++] = m[a * d + b];
      Expr cof = determinant(minor, d - 1);
      if ((i + j) % 2) cof = -cof;
      out[j * d + i] = tidy(cof / det);
    }
  return out;
}

std::string describe(const Point& p) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [k, v] : p) {
    os << (first ? "" : ", ") << k << '=' << v.real();
    first = false;
  }
  os << '}';
  return os.str();
}

// Throws DomainError at the first sampled point where the d×d matrix is numerically singular.
void require_nonsingular(const std::vector<Expr>& m, std::size_t d, const Chart& chart, const ZeroTestOptions& options,
                         const char* what) {
  std::vector<std::string> vars = chart.variables();
  for (const Expr& e : m)
    for (const std::string& v : free_variables(e))
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  Tape tape(m, vars);
  ZeroTestOptions o = options;
  o.sample_variables = vars;
  for (const Point& p : sample_points(vars, o)) {
    std::vector<Complex> v;
    try {
      v = tape.run(p);
    } catch (const SingularEvaluation&) {
      continue;
    }
    Eigen::MatrixXcd a(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[i * d + j];
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues();
    if (!(sv(sv.size() - 1) > 1e-12 * sv(0)))
      throw DomainError(std::string(what) + " is degenerate at " + describe(p));
  }
}

Complex contract(const std::vector<Complex>& form, const std::vector<Complex>& field) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < form.size(); ++i) s += form[i] * field[i];
  return s;
}

std::vector<Complex> eval_all(const std::vector<Expr>& v, const Point& p) {
  Evaluator ev(p);
  std::vector<Complex> out;
  out.reserve(v.size());
  for (const Expr& e : v) out.push_back(ev(e));
  return out;
}

}  // namespace

// ------------------------------------------------------------ 2×2 matrices

Mat2 operator+(const Mat2& a, const Mat2& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }
Mat2 operator-(const Mat2& a, const Mat2& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }
Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}
Mat2 operator*(const Expr& s, const Mat2& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }
Mat2 commutator(const Mat2& a, const Mat2& b) { return simplify(a * b - b * a); }
Expr trace(const Mat2& a) { return simplify(a[0] + a[3]); }
Expr det(const Mat2& a) { return simplify(a[0] * a[3] - a[1] * a[2]); }

Mat2 inverse(const Mat2& a) {
  Expr d = det(a);
  if (d.is_zero()) throw DomainError("singular 2×2 matrix");
  return simplify(Mat2{a[3] / d, -a[1] / d, -a[2] / d, a[0] / d});
}

Mat2 identity2() { return {Expr(1), Expr(), Expr(), Expr(1)}; }

Mat2 simplify(const Mat2& a) { return {simplify(a[0]), simplify(a[1]), simplify(a[2]), simplify(a[3])}; }

Mat2 diff(const Mat2& a, const std::string& variable) {
  return {diff(a[0], variable), diff(a[1], variable), diff(a[2], variable), diff(a[3], variable)};
}

std::vector<Expr> entries(const Mat2& a) { return {a.begin(), a.end()}; }

const std::array<Mat2, 3>& sl2_basis() {
  static const std::array<Mat2, 3> basis = {
      Mat2{Expr::rational(1, 2), Expr(), Expr(), Expr::rational(-1, 2)},
      Mat2{Expr(), Expr(1), Expr(), Expr()},
      Mat2{Expr(), Expr(), Expr(1), Expr()},
  };
  return basis;
}

Mat2 from_components(const std::array<Expr, 3>& c) {
  const auto& L = sl2_basis();
  return simplify(c[0] * L[0] + c[1] * L[1] + c[2] * L[2]);
}

std::array<Expr, 3> components(const Mat2& m) {
  return {simplify(m[0] - m[3]), simplify(m[1]), simplify(m[2])};
}

// ----------------------------------------------------------------- frames

namespace {

Sl2Frame build_frame() {
  Chart chart({"p", "q", "r"});
  Expr p = Expr::var("p"), q = Expr::var("q"), r = Expr::var("r");
  Mat2 lower{Expr(1), Expr(), p, Expr(1)};
  Mat2 diagonal{exp(q / Expr(2)), Expr(), Expr(), exp(-q / Expr(2))};
  Mat2 upper{Expr(1), r, Expr(), Expr(1)};
  Mat2 G = lower * diagonal * upper;
  for (Expr& e : G) e = tidy(e);
  Sl2Frame f{chart, G, {}, {}, {}, {}};
  // det G = 1, so the inverse is the adjugate.
  Mat2 ginv{G[3], -G[1], -G[2], G[0]};
  for (auto& s : f.sigma) s.resize(3);
  for (auto& s : f.rho) s.resize(3);
  for (std::size_t mu = 0; mu < 3; ++mu) {
    Mat2 dG = diff(f.G, chart.coordinate(mu));
    auto left = components(ginv * dG);
    auto right = components(dG * ginv);
    for (std::size_t a = 0; a < 3; ++a) {
      f.sigma[a][mu] = tidy(left[a]);
      f.rho[a][mu] = tidy(right[a]);
    }
  }
  std::vector<Expr> s(9), rh(9);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t mu = 0; mu < 3; ++mu) {
      s[a * 3 + mu] = f.sigma[a][mu];
      rh[a * 3 + mu] = f.rho[a][mu];
    }
  auto sinv = inverse_matrix(s, 3, "left-invariant co-frame");
  auto rinv = inverse_matrix(rh, 3, "right-invariant co-frame");
  for (std::size_t a = 0; a < 3; ++a) {
    f.L[a].resize(3);
    f.R[a].resize(3);
    for (std::size_t mu = 0; mu < 3; ++mu) {
      f.L[a][mu] = sinv[mu * 3 + a];
      f.R[a][mu] = rinv[mu * 3 + a];
    }
  }
  return f;
}

Form one_form3(const std::vector<Expr>& c) { return Form::one_form(c); }

void append(std::vector<Expr>& out, const std::vector<Expr>& v) { out.insert(out.end(), v.begin(), v.end()); }

VectorField combine(const VectorField& a, const Expr& ca, const VectorField& b, const Expr& cb) {
  VectorField out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = simplify(ca * a[i] + cb * b[i]);
  return out;
}

}  // namespace

const Sl2Frame& sl2_frame() {
  static const Sl2Frame frame = build_frame();
  return frame;
}

std::vector<Expr> lie_derivative_one_form(const Chart& chart, const VectorField& x, const std::vector<Expr>& alpha) {
  const std::size_t d = chart.dim();
  std::vector<Expr> out(d);
  for (std::size_t a = 0; a < d; ++a) {
    Expr s;
    for (std::size_t b = 0; b < d; ++b) s += x[b] * chart.partial(alpha[a], b) + alpha[b] * chart.partial(x[b], a);
    out[a] = simplify(s);
  }
  return out;
}

Report frame_checks(const Sl2Frame& f, const ZeroTestOptions& options) {
  const Chart& c = f.chart;
  ZeroTestOptions o = options;
  for (const auto& v : c.coordinates()) o.sample_variables.push_back(v);
  Report report;
  auto check = [&](const char* name, const std::vector<Expr>& comps) {
    report.checks.push_back(to_check(name, is_zero(comps, o), o.tol));
  };

  Form s1 = one_form3(f.sigma[0]), s2 = one_form3(f.sigma[1]), s3 = one_form3(f.sigma[2]);
  std::vector<Expr> mc;
  append(mc, coefficients(exterior_derivative(c, s1) - Expr(2) * wedge(s3, s2)));
  append(mc, coefficients(exterior_derivative(c, s2) - wedge(s2, s1)));
  append(mc, coefficients(exterior_derivative(c, s3) - wedge(s1, s3)));
  for (Expr& e : mc) e = simplify(e);
  check("maurer_cartan", mc);

  std::vector<Expr> dual;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      Expr s = a == b ? Expr(-1) : Expr();
      for (std::size_t mu = 0; mu < 3; ++mu) s += f.sigma[b][mu] * f.L[a][mu];
      dual.push_back(simplify(s));
    }
  check("duality", dual);

  auto bracket_residuals = [&](const std::array<VectorField, 3>& X, int sign) {
    std::vector<Expr> out;
    const Expr k(sign);
    append(out, combine(bracket(c, X[0], X[1]), Expr(1), X[1], -k));
    append(out, combine(bracket(c, X[0], X[2]), Expr(1), X[2], k));
    append(out, combine(bracket(c, X[1], X[2]), Expr(1), X[0], Expr(-2) * k));
    return out;
  };
  check("left_brackets", bracket_residuals(f.L, 1));
  // Right-invariant fields represent the algebra with the opposite sign.
  check("right_brackets", bracket_residuals(f.R, -1));

  std::vector<Expr> lr;
  for (const auto& l : f.L)
    for (const auto& r : f.R) append(lr, bracket(c, l, r));
  check("left_right_commute", lr);

  std::vector<Expr> inv;
  for (const auto& r : f.R)
    for (const auto& s : f.sigma) append(inv, lie_derivative_one_form(c, r, s));
  check("right_invariance", inv);

  auto volume = [&](const std::array<VectorField, 3>& X) {
    std::vector<Expr> m(9);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        Expr s;
        for (std::size_t mu = 0; mu < 3; ++mu) s += f.sigma[a][mu] * X[b][mu];
        m[a * 3 + b] = s;
      }
    return tidy(determinant(m, 3) - Expr(1));
  };
  check("volume", {volume(f.L), volume(f.R)});
  return report;
}

// ---------------------------------------------------- cohomogeneity one

Chart orbit_chart(std::vector<JetRule> jets) { return Chart({"t", "p", "q", "r"}, std::move(jets)); }

std::vector<Expr> orbit_sigma(const Sl2Frame& frame, int alpha) {
  const auto& s = frame.sigma.at(static_cast<std::size_t>(alpha));
  return {Expr(), s[0], s[1], s[2]};
}

std::vector<Expr> orbit_dt() { return {Expr(1), Expr(), Expr(), Expr()}; }

VectorField invariant_field(const Sl2Frame& frame, const Expr& dt_coefficient, const std::array<Expr, 3>& c) {
  VectorField out{dt_coefficient, Expr(), Expr(), Expr()};
  for (std::size_t mu = 0; mu < 3; ++mu) {
    Expr s;
    for (std::size_t a = 0; a < 3; ++a) s += c[a] * frame.L[a][mu];
    out[mu + 1] = simplify(s);
  }
  return out;
}

VectorField orbit_right_field(const Sl2Frame& frame, int alpha) {
  const auto& r = frame.R.at(static_cast<std::size_t>(alpha));
  return {Expr(), r[0], r[1], r[2]};
}

std::vector<Expr> sigma_wedge(const Sl2Frame& frame, int alpha, int beta) {
  auto a = orbit_sigma(frame, alpha), b = orbit_sigma(frame, beta);
  std::vector<Expr> out(16);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i * 4 + j] = simplify(a[i] * b[j] - a[j] * b[i]);
  return out;
}

CohomogeneityOneMetric cohomogeneity_metric(const std::array<Expr, 9>& gamma, const std::array<Expr, 3>& n,
                                            const Sl2Frame& frame, std::vector<JetRule> jets,
                                            const ZeroTestOptions& options) {
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b)
      if (!simplify(gamma[a * 3 + b] - gamma[b * 3 + a]).is_zero()) throw DomainError("γ is not symmetric");
  std::array<std::vector<Expr>, 3> s = {orbit_sigma(frame, 0), orbit_sigma(frame, 1), orbit_sigma(frame, 2)};
  auto dt = orbit_dt();
  std::vector<Expr> g(16);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) {
      Expr e;
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b)
          if (!gamma[a * 3 + b].is_zero()) e += gamma[a * 3 + b] * s[a][i] * s[b][j];
        if (!n[a].is_zero()) e += n[a] * (s[a][i] * dt[j] + dt[i] * s[a][j]);
      }
      g[i * 4 + j] = g[j * 4 + i] = simplify(e);
    }
  Chart chart = orbit_chart(std::move(jets));
  require_nonsingular(g, 4, chart, options, "assembled metric");
  return {gamma, n, Metric(chart, std::move(g))};
}

CheckResult killing_check(const Metric& g, const Sl2Frame& frame, const ZeroTestOptions& options) {
  std::vector<Expr> comps;
  for (int a = 0; a < 3; ++a) append(comps, lie_derivative_metric(g, orbit_right_field(frame, a)));
  for (Expr& e : comps) e = simplify(e);
  ZeroTestOptions o = options;
  for (const auto& v : g.chart().variables()) o.sample_variables.push_back(v);
  return to_check("killing", is_zero(comps, o), o.tol);
}

// ------------------------------------------------------------- tetrads

Metric metric_from_coframe(const Chart& chart, const Coframe& e, const Expr& scale, const ZeroTestOptions& options) {
  const std::size_t d = chart.dim();
  std::vector<Expr> m;
  for (const auto& row : e) {
    if (row.size() != d) throw DomainError("co-frame component count does not match the chart");
    append(m, row);
  }
  require_nonsingular(m, d, chart, options, "co-frame");
  std::vector<Expr> g(d * d);
  const Expr half = scale / Expr(2);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b)
      g[a * d + b] = g[b * d + a] =
          simplify(half * (e[0][a] * e[3][b] + e[3][a] * e[0][b] - e[1][a] * e[2][b] - e[2][a] * e[1][b]));
  return Metric(chart, std::move(g));
}

std::vector<Expr> contravariant_from_frame(const Tetrad& E) {
  const std::size_t d = E[0].size();
  std::vector<Expr> g(d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      g[a * d + b] =
          simplify((E[0][a] * E[3][b] + E[3][a] * E[0][b] - E[1][a] * E[2][b] - E[2][a] * E[1][b]) / Expr(2));
  return g;
}

Coframe dual_coframe(const Tetrad& E) {
  const std::size_t d = E[0].size();
  if (d != 4) throw DomainError("tetrads live on four-dimensional charts");
  std::vector<Expr> m;
  for (const auto& v : E) append(m, v);
  auto inv = inverse_matrix(m, 4, "tetrad");
  Coframe out;
  for (std::size_t k = 0; k < 4; ++k) {
    out[k].resize(4);
    for (std::size_t a = 0; a < 4; ++a) out[k][a] = inv[a * 4 + k];
  }
  return out;
}

// -------------------------------------------------------------- quartic

Quartic quartic_from_frame(const Tetrad& E, const Expr& f1, const Expr& f2, const Point& at) {
  const Expr lambda = Expr::var("lambda");
  // T_ij = E_ij(t) is the ∂_t component.
  const Expr &T11 = E[0][0], &T12 = E[1][0], &T21 = E[2][0], &T22 = E[3][0];
  Expr q = f1 * (T21 - lambda * T22) - f2 * (T11 - lambda * T12);
  Point p = at;
  p["lambda"] = 0.0;
  Quartic out;
  double factorial = 1.0, largest = 0.0;
  for (int k = 0; k <= 4; ++k) {
    if (k > 0) factorial *= k;
    out.coefficients.push_back(eval(q, p) / factorial);
    largest = std::max(largest, std::abs(out.coefficients.back()));
    q = diff(q, "lambda");
  }
  if (!is_zero(q, [&] {
         ZeroTestOptions o;
         o.fixed = at;
         o.points = 10;
         return o;
       }()).zero())
    throw DomainError("q(λ) has degree above four; f_i must be at most cubic in λ");
  const double cutoff = 1e-12 * std::max(1.0, largest);
  for (int k = 4; k >= 0; --k)
    if (std::abs(out.coefficients[static_cast<std::size_t>(k)]) > cutoff) {
      out.degree = k;
      break;
    }
  if (out.degree > 0) {
    const auto deg = static_cast<Eigen::Index>(out.degree);
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    const Complex lead = out.coefficients[static_cast<std::size_t>(out.degree)];
    for (Eigen::Index i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < deg; ++i) companion(i, deg - 1) = -out.coefficients[static_cast<std::size_t>(i)] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion);
    for (Eigen::Index i = 0; i < deg; ++i) out.roots.push_back(solver.eigenvalues()(i));
  }
  return out;
}

Complex quartic_by_volume(const Sl2Frame& frame, const Tetrad& E, const Expr& f1, const Expr& f2, const Point& at,
                          Complex lambda) {
  Point p = at;
  p["lambda"] = lambda;
  auto field = [&](const VectorField& a, const VectorField& b, const Expr& f) {
    auto va = eval_all(a, p), vb = eval_all(b, p);
    std::vector<Complex> out(5);
    for (std::size_t i = 0; i < 4; ++i) out[i] = va[i] - lambda * vb[i];
    out[4] = eval(f, p);
    return out;
  };
  std::vector<std::vector<Complex>> vectors = {field(E[0], E[1], f1), field(E[2], E[3], f2)};
  for (int a = 0; a < 3; ++a) {
    auto r = eval_all(orbit_right_field(frame, a), p);
    r.push_back(0.0);
    vectors.push_back(std::move(r));
  }
  std::vector<std::vector<Complex>> forms = {{0.0, 0.0, 0.0, 0.0, 1.0}, {1.0, 0.0, 0.0, 0.0, 0.0}};
  for (int a = 0; a < 3; ++a) {
    auto s = eval_all(orbit_sigma(frame, a), p);
    s.push_back(0.0);
    forms.push_back(std::move(s));
  }
  Eigen::Matrix<Complex, 5, 5> m;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m(i, j) = contract(forms[static_cast<std::size_t>(i)], vectors[static_cast<std::size_t>(j)]);
  return m.determinant();
}

}  // namespace nkgeo
