#include "nkgeo/nullkahler.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nkgeo/error.hpp"

namespace nkgeo {
namespace {

bool literal_zero(const Expr& e) { return e.kind() == Kind::Rational && e.is_zero(); }

void require_positive(int n) {
  if (n < 1) throw DomainError("n must be a positive integer");
}

Expr rational_expr(const Rational& q) { return Expr::rational(q.num(), q.den()); }

// Symmetric x-block A_ij = κ Θ_{y^i y^j}.
std::vector<Expr> hessian_block(int n, const Expr& theta) {
  const std::size_t m = 2 * static_cast<std::size_t>(n);
  auto ys = y_names(n);
  Expr kappa = rational_expr(theta_coefficient());
  std::vector<Expr> a(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    Expr ti = diff(theta, ys[i]);
    for (std::size_t j = i; j < m; ++j) a[i * m + j] = a[j * m + i] = simplify(kappa * diff(ti, ys[j]));
  }
  return a;
}

std::vector<Expr> assemble_metric(int n, const std::vector<Expr>& a) {
  const std::size_t m = 2 * static_cast<std::size_t>(n), d = 2 * m;
  auto w = omega_matrix(n);
  std::vector<Expr> g(d * d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      g[i * d + j] = a[i * m + j];
      // g(∂y^i, ∂x^j) = ½ ω_ij
      g[(m + i) * d + j] = g[j * d + m + i] = Expr::rational(w[i * m + j], 2);
    }
  return g;
}

// Block inverse of [[A, ½ω^T], [½ω, 0]]: [[0, 2ω⁻¹], [−2ω⁻¹, 4 ω⁻¹ A ω⁻¹]].
std::vector<Expr> block_inverse(int n, const std::vector<Expr>& a) {
  const std::size_t m = 2 * static_cast<std::size_t>(n), d = 2 * m;
  auto wi = omega_inverse(n);
  std::vector<Expr> out(d * d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      out[i * d + m + j] = Expr(2 * wi[i * m + j]);
      out[(m + i) * d + j] = Expr(-2 * wi[i * m + j]);
      Expr s;
      for (std::size_t k = 0; k < m; ++k) {
        if (!wi[i * m + k]) continue;
        for (std::size_t l = 0; l < m; ++l) {
          if (!wi[l * m + j] || literal_zero(a[k * m + l])) continue;
          s += Expr(4 * wi[i * m + k] * wi[l * m + j]) * a[k * m + l];
        }
      }
      out[(m + i) * d + m + j] = simplify(s);
    }
  return out;
}

NullKahlerStructure assemble(int n, const Expr& theta, const std::vector<Expr>& a) {
  const std::size_t m = 2 * static_cast<std::size_t>(n), d = 2 * m;
  Chart chart = normal_chart(n);
  Metric g(chart, assemble_metric(n, a));
  Tensor N(d, {Slot::Up, Slot::Down});
  for (std::size_t i = 0; i < m; ++i) N.at({m + i, i}) = Expr(1);
  Tensor Omega(d, {Slot::Down, Slot::Down});
  for (std::size_t a1 = 0; a1 < d; ++a1)
    for (std::size_t b = 0; b < d; ++b) {
      Expr s;
      for (std::size_t c = 0; c < d; ++c)
        if (!literal_zero(N.at({c, a1}))) s += g(c, b) * N.at({c, a1});
      Omega.at({a1, b}) = simplify(s);
    }
  return NullKahlerStructure{n, theta, chart, g, block_inverse(n, a), N, Omega, omega_matrix(n), omega_inverse(n)};
}

Form omega_form(const NullKahlerStructure& s) { return Form::two_form(s.Omega.components(), s.chart.dim()); }

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const Complex& z : v) m = std::max(m, std::abs(z));
  return m;
}

CheckResult symbolic_check(std::string name, const std::vector<Expr>& comps, const ZeroTestOptions& opt) {
  return to_check(std::move(name), is_zero(comps, opt), opt.tol);
}

}  // namespace

Rational theta_coefficient() { return Rational(1); }

std::vector<std::string> x_names(int n) {
  require_positive(n);
  std::vector<std::string> out;
  for (int i = 1; i <= 2 * n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

std::vector<std::string> y_names(int n) {
  require_positive(n);
  std::vector<std::string> out;
  for (int i = 1; i <= 2 * n; ++i) out.push_back("y" + std::to_string(i));
  return out;
}

Chart normal_chart(int n) {
  auto names = x_names(n);
  auto ys = y_names(n);
  names.insert(names.end(), ys.begin(), ys.end());
  return Chart(names);
}

std::vector<int> omega_matrix(int n) {
  require_positive(n);
  const std::size_t m = 2 * static_cast<std::size_t>(n);
  std::vector<int> w(m * m, 0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    w[i * m + n + i] = 1;
    w[(n + i) * m + i] = -1;
  }
  return w;
}

std::vector<int> omega_inverse(int n) {
  auto w = omega_matrix(n);
  for (int& e : w) e = -e;
  return w;
}

std::vector<Expr> normal_form_metric(int n, const Expr& theta) {
  return assemble_metric(n, hessian_block(n, theta));
}

NullKahlerStructure build_normal_form(int n, const Expr& theta) {
  Chart chart = normal_chart(n);
  for (const std::string& v : free_variables(theta)) {
    const auto& c = chart.coordinates();
    if (std::find(c.begin(), c.end(), v) == c.end())
      throw DomainError("Θ depends on '" + v + "', which is not a chart coordinate");
  }
  return assemble(n, theta, hessian_block(n, theta));
}

NullKahlerStructure with_x_block(int n, const Expr& theta, const std::vector<Expr>& x_block) {
  const std::size_t m = 2 * static_cast<std::size_t>(n);
  if (x_block.size() != m * m) throw DomainError("x-block must be 2n×2n");
  return assemble(n, theta, x_block);
}

// ------------------------------------------------------------------ verify

Report verify_structure(const NullKahlerStructure& s, const VerifyOptions& options) {
  const std::size_t d = s.chart.dim();
  const ZeroTestOptions& opt = options.sampling;
  Report report;

  // (a) g(NX, Y) + g(X, NY) = Ω_ab + Ω_ba.
  std::vector<Expr> compat;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) compat.push_back(s.Omega.at({a, b}) + s.Omega.at({b, a}));
  report.checks.push_back(symbolic_check("compatibility", compat, opt));

  Tensor gamma = christoffel(s.g, s.inverse);
  report.checks.push_back(
      symbolic_check("parallel_N", covariant_derivative(s.N, s.chart, gamma).components(), opt));

  Form Om = omega_form(s);
  report.checks.push_back(symbolic_check("closed_Omega", coefficients(exterior_derivative(s.chart, Om).simplified()), opt));
  report.checks.push_back(
      symbolic_check("parallel_Omega", covariant_derivative(s.Omega, s.chart, gamma).components(), opt));

  // Curvature identities at sampled points, relative to the Riemann scale there.
  CompiledMetric cm(s.g);
  std::vector<Complex> Nv(d * d);
  for (std::size_t k = 0; k < d * d; ++k) Nv[k] = literal_zero(s.N[k]) ? 0.0 : 1.0;
  auto Nm = [&](std::size_t a, std::size_t b) { return Nv[a * d + b]; };
  auto curvature_check = [&](const std::string& name, auto residual) {
    ZeroTestOptions o = opt;
    o.tol = options.curvature_tol;
    auto r = sample_residual(s.chart.coordinates(), [&](const Point& p) {
      PointCurvature pc = cm.at(p);
      return residual(pc) / std::max(1.0, max_abs(pc.riemann));
    }, o);
    report.checks.push_back(to_check(name, r, o.tol));
  };
  auto idx4 = [d](std::size_t a, std::size_t b, std::size_t c, std::size_t e) { return ((a * d + b) * d + c) * d + e; };

  // (d) R^a_bcd N^b_e − N^a_b R^b_ecd
  curvature_check("curvature_commutes", [&](const PointCurvature& pc) {
    double m = 0.0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t e = 0; e < d; ++e)
        for (std::size_t c = 0; c < d; ++c)
          for (std::size_t f = 0; f < d; ++f) {
            Complex v = 0.0;
            for (std::size_t b = 0; b < d; ++b)
              v += pc.riemann[idx4(a, b, c, f)] * Nm(b, e) - Nm(a, b) * pc.riemann[idx4(b, e, c, f)];
            m = std::max(m, std::abs(v));
          }
    return m;
  });
  // cu2 on the first pair of R_abcd: N^e_a R_ebcd + N^e_b R_aecd
  curvature_check("curvature_skew", [&](const PointCurvature& pc) {
    double m = 0.0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t c = 0; c < d; ++c)
          for (std::size_t f = 0; f < d; ++f) {
            Complex v = 0.0;
            for (std::size_t e = 0; e < d; ++e)
              v += Nm(e, a) * pc.riemann_lower[idx4(e, b, c, f)] + Nm(e, b) * pc.riemann_lower[idx4(a, e, c, f)];
            m = std::max(m, std::abs(v));
          }
    return m;
  });
  // (e) r_ab N^b_c
  curvature_check("ricci_annihilates", [&](const PointCurvature& pc) {
    double m = 0.0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t c = 0; c < d; ++c) {
        Complex v = 0.0;
        for (std::size_t b = 0; b < d; ++b) v += pc.ricci[a * d + b] * Nm(b, c);
        m = std::max(m, std::abs(v));
      }
    return m;
  });
  // (f) S
  curvature_check("scalar_zero", [](const PointCurvature& pc) { return std::abs(pc.scalar); });

  // (g) Ω^∧n ≠ 0, Ω^∧(n+1) = 0
  Form power = Om;
  for (int k = 1; k < s.n; ++k) power = wedge(power, Om).simplified();
  report.checks.push_back(to_nonzero_check("Omega_power_n", is_zero(coefficients(power.simplified()), opt), opt.tol));
  Form next = wedge(power, Om).simplified();
  report.checks.push_back(symbolic_check("Omega_power_n_plus_1", coefficients(next), opt));

  // (h) ∇_Y(N X) ∈ Ker N on coordinate fields: N^a_b Γ^b_cf N^f_e
  std::vector<Expr> walker;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t c = 0; c < d; ++c)
      for (std::size_t e = 0; e < d; ++e) {
        Expr v;
        for (std::size_t b = 0; b < d; ++b) {
          if (literal_zero(s.N.at({a, b}))) continue;
          for (std::size_t f = 0; f < d; ++f)
            if (!literal_zero(s.N.at({f, e}))) v += s.N.at({a, b}) * gamma.at({b, c, f}) * s.N.at({f, e});
        }
        walker.push_back(v);
      }
  report.checks.push_back(symbolic_check("walker", walker, opt));

  // Ker N integrability: N[NX, NY] = 0 on coordinate fields.
  std::vector<Expr> nij;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b) {
      VectorField na(d), nb(d);
      for (std::size_t c = 0; c < d; ++c) {
        na[c] = s.N.at({c, a});
        nb[c] = s.N.at({c, b});
      }
      VectorField br = bracket(s.chart, na, nb);
      for (std::size_t c = 0; c < d; ++c) {
        Expr v;
        for (std::size_t e = 0; e < d; ++e)
          if (!literal_zero(s.N.at({c, e}))) v += s.N.at({c, e}) * br[e];
        nij.push_back(v);
      }
    }
  report.checks.push_back(symbolic_check("kernel_integrable", nij, opt));
  return report;
}

// ------------------------------------------------------------------- gauge

GaugeTransform gauge_transform(const NullKahlerStructure& s, const GaugeGenerator& gen) {
  const std::size_t m = 2 * static_cast<std::size_t>(s.n);
  auto xs = x_names(s.n);
  auto ys = y_names(s.n);
  if (gen.T.size() != m || gen.Q.size() != m) throw DomainError("T and Q need 2n components");
  std::set<std::string> allowed(xs.begin(), xs.end());
  auto check = [&](const Expr& e, const char* what) {
    for (const std::string& v : free_variables(e))
      if (!allowed.count(v)) throw DomainError(std::string(what) + " depends on '" + v + "'; only x-variables allowed");
  };
  check(gen.H, "H");
  check(gen.R, "R");
  for (const Expr& e : gen.T) check(e, "T");
  for (const Expr& e : gen.Q) check(e, "Q");

  const auto& wi = s.omega_inv;
  const auto& w = s.omega;
  GaugeTransform t;
  t.Y.assign(2 * m, Expr());
  std::vector<Expr> dH(m);
  for (std::size_t j = 0; j < m; ++j) dH[j] = diff(gen.H, xs[j]);
  for (std::size_t i = 0; i < m; ++i) {
    Expr xi, yi = gen.T[i];
    for (std::size_t j = 0; j < m; ++j) {
      if (!wi[i * m + j]) continue;
      xi += Expr(wi[i * m + j]) * dH[j];
      for (std::size_t k = 0; k < m; ++k) yi += Expr(wi[i * m + j]) * Expr::var(ys[k]) * diff(dH[j], xs[k]);
    }
    t.Y[i] = simplify(xi);
    t.Y[m + i] = simplify(yi);
  }

  Expr dt;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) {
        Expr h3 = diff(diff(dH[i], xs[j]), xs[k]);
        if (!literal_zero(h3)) dt += Expr::rational(1, 6) * Expr::var(ys[i]) * Expr::var(ys[j]) * Expr::var(ys[k]) * h3;
        if (w[i * m + j])
          dt -= Expr::rational(w[i * m + j], 2) * Expr::var(ys[j]) * Expr::var(ys[k]) * diff(gen.T[i], xs[k]);
      }
  for (std::size_t i = 0; i < m; ++i) dt += Expr::var(ys[i]) * gen.Q[i];
  dt += gen.R;
  t.delta_theta = simplify(dt);
  return t;
}

double gauge_defect(const NullKahlerStructure& s, const GaugeTransform& t, const Point& p, double epsilon) {
  const std::size_t d = s.chart.dim();
  const auto& coords = s.chart.coordinates();
  Expr eps = Expr::decimal(epsilon);
  // Θ̃ as a function of the new coordinates, to first order: Θ̃(z) = Θ(z) + ε(δΘ − Y(Θ))(z).
  Expr theta_new = s.theta + eps * (t.delta_theta - apply(s.chart, t.Y, s.theta));
  std::vector<Expr> g_new = normal_form_metric(s.n, theta_new);

  Point q = p;
  std::vector<std::vector<Complex>> jac(d, std::vector<Complex>(d));
  for (std::size_t c = 0; c < d; ++c) {
    q[coords[c]] = p.at(coords[c]) + epsilon * eval(t.Y[c], p);
    for (std::size_t a = 0; a < d; ++a)
      jac[c][a] = (c == a ? 1.0 : 0.0) + epsilon * eval(diff(t.Y[c], coords[a]), p);
  }
  double defect = 0.0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      Complex pulled = 0.0;
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t e = 0; e < d; ++e) {
          if (jac[c][a] == Complex(0.0) || jac[e][b] == Complex(0.0)) continue;
          pulled += jac[c][a] * jac[e][b] * eval(g_new[c * d + e], q);
        }
      defect = std::max(defect, std::abs(pulled - eval(s.g(a, b), p)));
    }
  return defect;
}

// --------------------------------------------------------------- conformal

ConformalRescale restricted_conformal_rescale(const NullKahlerStructure& s, const Expr& F, const ZeroTestOptions& options) {
  if (s.n != 1) throw DomainError("restricted conformal rescaling is implemented for n = 1");
  const std::size_t d = s.chart.dim();
  Expr F2 = pow(F, 2), F3 = pow(F, 3);
  std::vector<Expr> gh(d * d);
  for (std::size_t k = 0; k < d * d; ++k) gh[k] = simplify(F2 * s.g.components()[k]);
  Metric g_hat(s.chart, gh);
  Tensor Omega_hat(d, {Slot::Down, Slot::Down});
  for (std::size_t k = 0; k < d * d; ++k) Omega_hat[k] = simplify(F3 * s.Omega[k]);
  Tensor gamma = christoffel(g_hat);
  ZeroTestOptions o = options;
  auto prev = o.regular;
  // Sample only where F ≠ 0.
  o.regular = [prev, F](const Point& p) { return (!prev || prev(p)) && std::abs(eval(F, p)) > 1e-6; };
  for (const std::string& c : s.chart.coordinates()) o.sample_variables.push_back(c);
  CheckResult parallel = to_check("parallel_Omega_hat", is_zero(covariant_derivative(Omega_hat, s.chart, gamma).components(), o), o.tol);
  return {g_hat, Omega_hat, parallel};
}

// ---------------------------------------------------- pseudo-quaternionic

namespace {

Rational checked_add(const Rational& a, const Rational& b) {
  auto r = Rational::add(a, b);
  if (!r) throw DomainError("rational overflow in matrix arithmetic");
  return *r;
}

Rational checked_mul(const Rational& a, const Rational& b) {
  auto r = Rational::mul(a, b);
  if (!r) throw DomainError("rational overflow in matrix arithmetic");
  return *r;
}

void same_size(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.size() != b.size()) throw DomainError("matrix size mismatch");
}

}  // namespace

RationalMatrix::RationalMatrix(std::size_t n, const std::vector<std::int64_t>& entries) : RationalMatrix(n) {
  if (entries.size() != n * n) throw DomainError("matrix needs n*n entries");
  for (std::size_t k = 0; k < n * n; ++k) a_[k] = Rational(entries[k]);
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
  return m;
}

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
  same_size(a, b);
  RationalMatrix out(a.n_);
  for (std::size_t k = 0; k < a.a_.size(); ++k) out.a_[k] = checked_add(a.a_[k], b.a_[k]);
  return out;
}

RationalMatrix RationalMatrix::operator-() const {
  RationalMatrix out(n_);
  for (std::size_t k = 0; k < a_.size(); ++k) out.a_[k] = a_[k].negated();
  return out;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) { return a + (-b); }

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  same_size(a, b);
  const std::size_t n = a.n_;
  RationalMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!b(k, j).is_zero()) out(i, j) = checked_add(out(i, j), checked_mul(a(i, k), b(k, j)));
    }
  return out;
}

QuaternionicTriple pseudo_quaternionic_triple(const RationalMatrix& N1, const RationalMatrix& N2) {
  same_size(N1, N2);
  const std::size_t n = N1.size();
  const RationalMatrix zero(n), id = RationalMatrix::identity(n);
  if (!(N1 * N1 == zero)) throw DomainError("N1 is not nilpotent of order 2");
  if (!(N2 * N2 == zero)) throw DomainError("N2 is not nilpotent of order 2");
  if (!(N1 * N2 + N2 * N1 == -id)) throw DomainError("N1 N2 + N2 N1 differs from −Id");
  QuaternionicTriple q{N1 + N2, N1 - N2, N1 * N2 - N2 * N1, {}};
  const auto &I = q.I, &S = q.S, &T = q.T;
  auto add = [&](const char* name, bool ok) { q.algebra.checks.push_back(exact_check(name, ok)); };
  add("I^2 = -Id", I * I == -id);
  add("S^2 = Id", S * S == id);
  add("T^2 = Id", T * T == id);
  add("IS = -T = -SI", I * S == -T && S * I == T);
  add("IT = S = -TI", I * T == S && T * I == -S);
  add("ST = I = -TS", S * T == I && T * S == -I);
  return q;
}

}  // namespace nkgeo
