#include "nkgeo/pde.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <set>

#include "nkgeo/error.hpp"

namespace nkgeo {
namespace {

std::size_t half_dim(int n) { return 2 * static_cast<std::size_t>(n); }

void require_x_only(const Expr& e, int n, const char* what) {
  auto xs = x_names(n);
  std::set<std::string> allowed(xs.begin(), xs.end());
  for (const std::string& v : free_variables(e))
    if (!allowed.count(v)) throw DomainError(std::string(what) + " depends on '" + v + "'; only x-variables allowed");
}

void require_n1(int n, const char* what) {
  if (n != 1) throw DomainError(std::string(what) + " is defined for n = 1 only");
}

// Θ_{y^i y^j}
std::vector<Expr> y_hessian(const Expr& theta, int n) {
  const std::size_t m = half_dim(n);
  auto ys = y_names(n);
  std::vector<Expr> h(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    Expr ti = diff(theta, ys[i]);
    for (std::size_t j = i; j < m; ++j) h[i * m + j] = h[j * m + i] = diff(ti, ys[j]);
  }
  return h;
}

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const Complex& z : v) m = std::max(m, std::abs(z));
  return m;
}

ZeroTestOptions cross_options(const PdeOptions& o, double tol) {
  ZeroTestOptions c = o.sampling;
  c.points = o.cross_points;
  c.tol = tol;
  return c;
}

// Geometric cross-check evaluated at sampled chart points; residual relative to max(1, |R|).
CheckResult geometric_check(const std::string& name, const NullKahlerStructure& s, const ZeroTestOptions& o,
                            const std::function<double(const CompiledMetric&, const Point&, const PointCurvature&)>& f) {
  CompiledMetric cm(s.g);
  auto r = sample_residual(s.chart.coordinates(), [&](const Point& p) {
    PointCurvature pc = cm.at(p);
    return f(cm, p, pc) / std::max(1.0, max_abs(pc.riemann_lower));
  }, o);
  return to_check(name, r, o.tol);
}

CheckResult ricci_cross(const NullKahlerStructure& s, const ZeroTestOptions& o) {
  return geometric_check("ricci_flat", s, o, [](const CompiledMetric&, const Point&, const PointCurvature& pc) {
    return max_abs(pc.ricci);
  });
}

CheckResult weyl_cross(const NullKahlerStructure& s, const ZeroTestOptions& o, bool plus) {
  return geometric_check(plus ? "weyl_plus_zero" : "weyl_minus_zero", s, o,
                         [&s, plus](const CompiledMetric& cm, const Point& p, const PointCurvature&) {
                           auto [cp, cmn] = weyl_halves(s, cm, p);
                           return plus ? cp : cmn;
                         });
}

}  // namespace

Expr ricci_potential_f(const Expr& theta, int n) {
  const std::size_t m = half_dim(n);
  auto xs = x_names(n), ys = y_names(n);
  auto wi = omega_inverse(n);
  auto h = y_hessian(theta, n);
  Expr f;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (wi[i * m + j]) f += Expr(wi[i * m + j]) * diff(diff(theta, ys[i]), xs[j]);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      if (!wi[i * m + k]) continue;
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < m; ++l)
          if (wi[j * m + l]) f += Expr::rational(wi[i * m + k] * wi[j * m + l], 2) * h[i * m + j] * h[k * m + l];
    }
  return simplify(f);
}

Expr ricci_potential_f_4d(const Expr& theta) {
  auto d = [&](const char* a, const char* b) { return diff(diff(theta, a), b); };
  return simplify(d("x1", "y2") - d("x2", "y1") + d("y1", "y1") * d("y2", "y2") - pow(d("y1", "y2"), 2));
}

// ------------------------------------------------------------- Einstein

SystemReport einstein_residual(const Expr& theta, int n, const Expr& G, const std::vector<Expr>& F,
                               const PdeOptions& options) {
  const std::size_t m = half_dim(n);
  if (F.size() != m) throw DomainError("einstein_residual needs 2n functions F_i");
  require_x_only(G, n, "G");
  for (const Expr& e : F) require_x_only(e, n, "F_i");
  NullKahlerStructure s = build_normal_form(n, theta);
  auto ys = y_names(n);
  Expr res = ricci_potential_f(theta, n) - G;
  for (std::size_t i = 0; i < m; ++i) res -= Expr::var(ys[i]) * F[i];
  SystemReport out;
  out.residual = to_check("einstein", is_zero(simplify(res), options.sampling), options.sampling.tol);
  if (out.residual.pass) out.cross_checks.push_back(ricci_cross(s, cross_options(options, options.ricci_tol)));
  return out;
}

// --------------------------------------------------------- four dimensions

int normal_form_orientation(const NullKahlerStructure& s, const Point& p) {
  CompiledMetric cm(s.g);
  CMatrix g = cm.metric_at(p);
  std::vector<Complex> alpha(16);
  for (std::size_t k = 0; k < 16; ++k) alpha[k] = eval(s.Omega[k], p);
  int o = self_dual_orientation(g, alpha);
  if (o == 0) throw DomainError("Ω is neither self-dual nor anti-self-dual");
  return o;
}

std::pair<double, double> weyl_halves(const NullKahlerStructure& s, const CompiledMetric& cm, const Point& p) {
  if (s.chart.dim() != 4) throw DomainError("Weyl halves need a four-dimensional structure");
  PointCurvature pc = cm.at(p);
  std::vector<Complex> alpha(16);
  for (std::size_t k = 0; k < 16; ++k) alpha[k] = eval(s.Omega[k], p);
  int o = self_dual_orientation(pc.g, alpha);
  if (o == 0) throw DomainError("Ω is neither self-dual nor anti-self-dual");
  WeylSplit w = weyl_split(pc, o);
  return {max_abs(w.plus), max_abs(w.minus)};
}

SystemReport asd_residual(const Expr& theta, const PdeOptions& options) {
  NullKahlerStructure s = build_normal_form(1, theta);
  Expr f = ricci_potential_f_4d(theta);
  auto d = [](const Expr& e, const char* a, const char* b) { return diff(diff(e, a), b); };
  Expr lap = d(f, "x1", "y2") - d(f, "x2", "y1") + d(theta, "y2", "y2") * d(f, "y1", "y1") +
             d(theta, "y1", "y1") * d(f, "y2", "y2") - Expr(2) * d(theta, "y1", "y2") * d(f, "y1", "y2");
  SystemReport out;
  out.residual = to_check("asd", is_zero(simplify(lap), options.sampling), options.sampling.tol);
  out.cross_checks.push_back(weyl_cross(s, cross_options(options, options.weyl_tol), true));
  return out;
}

SystemReport sd_residual(const Expr& theta, const PdeOptions& options) {
  NullKahlerStructure s = build_normal_form(1, theta);
  std::vector<Expr> fourth;
  const char* ys[] = {"y1", "y2"};
  for (int a = 0; a < 2; ++a)
    for (int b = a; b < 2; ++b)
      for (int c = b; c < 2; ++c)
        for (int e = c; e < 2; ++e) fourth.push_back(diff(diff(diff(diff(theta, ys[a]), ys[b]), ys[c]), ys[e]));
  SystemReport out;
  out.residual = to_check("sd", is_zero(fourth, options.sampling), options.sampling.tol);
  out.cross_checks.push_back(weyl_cross(s, cross_options(options, options.weyl_tol), false));
  return out;
}

SystemReport heavenly_residual(const Expr& theta, const PdeOptions& options) {
  NullKahlerStructure s = build_normal_form(1, theta);
  SystemReport out;
  out.residual = to_check("heavenly", is_zero(ricci_potential_f_4d(theta), options.sampling), options.sampling.tol);
  if (out.residual.pass) {
    out.cross_checks.push_back(ricci_cross(s, cross_options(options, options.ricci_tol)));
    out.cross_checks.push_back(weyl_cross(s, cross_options(options, options.weyl_tol), true));
  }
  return out;
}

// ------------------------------------------------------ hyper-Kähler hierarchy

std::vector<Expr> hk_hierarchy(const Expr& theta, int n) {
  const std::size_t m = half_dim(n);
  auto xs = x_names(n), ys = y_names(n);
  auto wi = omega_inverse(n);
  auto h = y_hessian(theta, n);
  std::vector<Expr> H(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Expr e = diff(diff(theta, ys[i]), xs[j]) - diff(diff(theta, ys[j]), xs[i]);
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l)
          if (wi[k * m + l]) e += Expr(wi[k * m + l]) * h[i * m + k] * h[j * m + l];
      H[i * m + j] = simplify(e);
    }
  return H;
}

HierarchyReport hk_hierarchy_residual(const Expr& theta, int n, const ZeroTestOptions& options) {
  const std::size_t m = half_dim(n);
  HierarchyReport out;
  out.H = hk_hierarchy(theta, n);
  out.residual = to_check("hk_hierarchy", is_zero(out.H, options), options.tol);
  std::vector<Expr> anti;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) anti.push_back(out.H[i * m + j] + out.H[j * m + i]);
  out.antisymmetry = to_check("hk_antisymmetry", is_zero(anti, options), options.tol);
  auto wi = omega_inverse(n);
  Expr trace = Expr(-2) * ricci_potential_f(theta, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (wi[i * m + j]) trace += Expr(wi[i * m + j]) * out.H[i * m + j];
  out.trace_identity = to_check("hk_trace_identity", is_zero(simplify(trace), options), options.tol);
  return out;
}

WeakerReport weaker_residual(const Expr& theta, int n, const ZeroTestOptions& options) {
  const std::size_t m = half_dim(n);
  auto ys = y_names(n);
  auto H = hk_hierarchy(theta, n);
  std::vector<Expr> dH;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (const std::string& y : ys) dH.push_back(diff(H[i * m + j], y));
  WeakerReport out;
  out.residual = to_check("weaker", is_zero(dH, options), options.tol);
  if (out.residual.pass) {
    // H is y-independent: read it at y = 0 so the returned C_ij are explicit functions of x.
    std::map<std::string, Expr> zero_y;
    for (const std::string& y : ys) zero_y[y] = Expr();
    for (const Expr& e : H) out.C.push_back(simplify(substitute(e, zero_y)));
  }
  return out;
}

// ---------------------------------------------------------------- Lax pair

Chart lax_chart(int n) {
  auto names = normal_chart(n).coordinates();
  names.push_back("lambda");
  return Chart(names);
}

std::vector<VectorField> lax_fields(const Expr& theta, int n) {
  const std::size_t m = half_dim(n), d = 2 * m + 1;
  auto wi = omega_inverse(n);
  auto h = y_hessian(theta, n);
  Expr lambda = Expr::var("lambda");
  std::vector<VectorField> out;
  for (std::size_t i = 0; i < m; ++i) {
    VectorField l(d);
    l[m + i] = Expr(1);
    l[i] = lambda;
    for (std::size_t k = 0; k < m; ++k) {
      Expr c;
      for (std::size_t j = 0; j < m; ++j)
        if (wi[k * m + j]) c += Expr(wi[k * m + j]) * h[i * m + j];
      l[m + k] = simplify(l[m + k] + lambda * c);
    }
    out.push_back(std::move(l));
  }
  return out;
}

CheckResult lax_distribution_check(const Expr& theta, int n, const ZeroTestOptions& options) {
  Chart chart = lax_chart(n);
  auto fields = lax_fields(theta, n);
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < fields.size(); ++i)
    for (std::size_t j = i + 1; j < fields.size(); ++j)
      for (const Expr& c : bracket(chart, fields[i], fields[j])) comps.push_back(c);
  return to_check("lax_distribution", is_zero(comps, options), options.tol);
}

// ------------------------------------------------------------------ Joyce

Report joyce_checks(const Expr& theta, int n, const ZeroTestOptions& options) {
  auto xs = x_names(n), ys = y_names(n);
  Report r;
  std::map<std::string, Expr> flip;
  for (const std::string& y : ys) flip[y] = -Expr::var(y);
  r.checks.push_back(to_check("odd", is_zero(simplify(substitute(theta, flip) + theta), options), options.tol));

  Expr euler = theta;
  for (const std::string& x : xs) euler += Expr::var(x) * diff(theta, x);
  r.checks.push_back(to_check("homothety", is_zero(simplify(euler), options), options.tol));

  // Periodicity under y^j → y^j + 2πi, evaluated at complex points; no symbolic shortcut.
  ZeroTestOptions numeric = options;
  numeric.symbolic = SymbolicMode::Off;
  std::vector<Expr> shifts;
  Expr period = Expr(2) * Expr::pi() * Expr::imag();
  for (const std::string& y : ys) shifts.push_back(substitute(theta, {{y, Expr::var(y) + period}}) - theta);
  r.checks.push_back(to_check("lattice", is_zero(shifts, numeric), options.tol));
  return r;
}

// ------------------------------------------------------- C_ij normalization

LinearShift remove_weaker_constants(const Expr& theta, int n, const ZeroTestOptions& options) {
  require_n1(n, "removal of the weaker-form constants");
  WeakerReport w = weaker_residual(theta, n, options);
  if (!w.residual.pass) throw DomainError("Θ does not satisfy the weaker conditions ∂H/∂y = 0");
  Expr c12 = w.C[1];
  auto tape = std::make_shared<Tape>(std::vector<Expr>{c12}, std::vector<std::string>{"x1", "x2"});
  LinearShift out;
  out.C12 = c12;
  out.Q1 = [tape](double x1, double x2) {
    auto integrand = [&](double t) {
      Complex v[2] = {x1, t};
      return tape->run(std::span<const Complex>(v, 2))[0].real();
    };
    return -boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, x2, 10, 1e-13);
  };
  return out;
}

}  // namespace nkgeo
