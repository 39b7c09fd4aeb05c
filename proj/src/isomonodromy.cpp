#include "nkgeo/isomonodromy.hpp"

#include <algorithm>
#include <cmath>

#include "nkgeo/error.hpp"

namespace nkgeo {
namespace {

Expr tidy(const Expr& e) { return simplify(expand(simplify(e))); }

Mat2 tidy(const Mat2& m) { return {tidy(m[0]), tidy(m[1]), tidy(m[2]), tidy(m[3])}; }

Mat2 partial(const Chart& chart, const Mat2& m, const std::string& coordinate) {
  return {chart.partial(m[0], coordinate), chart.partial(m[1], coordinate), chart.partial(m[2], coordinate),
          chart.partial(m[3], coordinate)};
}

CMat2 bracket(const CMat2& a, const CMat2& b) { return a * b - b * a; }

constexpr std::size_t kMatDoubles = 8;

void pack(const CMat2& m, OdeState& x, std::size_t offset) {
  for (int i = 0; i < 4; ++i) {
    x[offset + 2 * i] = m(i / 2, i % 2).real();
    x[offset + 2 * i + 1] = m(i / 2, i % 2).imag();
  }
}

CMat2 unpack(const OdeState& x, std::size_t offset) {
  CMat2 m;
  for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = Complex(x[offset + 2 * i], x[offset + 2 * i + 1]);
  return m;
}

Complex lambda_at(double l) { return Complex(l, 0.0); }

/// Ψ along λ at fixed t and state.
CMat2 lambda_edge(const NumericLax& lax, double t, const OdeState& s, const CMat2& psi0, double l0, double l1,
                  const OdeOptions& options) {
  OdeState x(kMatDoubles);
  pack(psi0, x, 0);
  auto rhs = [&](const OdeState& v, OdeState& dv, double l) {
    pack(lax.A(t, s, lambda_at(l)) * unpack(v, 0), dv, 0);
  };
  return unpack(integrate_to(rhs, x, l0, l1, options), 0);
}

/// Ψ and the auxiliary state along t at fixed λ.
std::pair<CMat2, OdeState> t_edge(const NumericLax& lax, double lambda, const OdeState& s0, const CMat2& psi0,
                                  double t0, double t1, const OdeOptions& options) {
  const std::size_t n = s0.size();
  OdeState x(n + kMatDoubles);
  std::copy(s0.begin(), s0.end(), x.begin());
  pack(psi0, x, n);
  auto rhs = [&](const OdeState& v, OdeState& dv, double t) {
    OdeState s(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
    if (n > 0) {
      OdeState ds(n);
      lax.state_rhs(s, ds, t);
      std::copy(ds.begin(), ds.end(), dv.begin());
    }
    pack(lax.B(t, s, lambda_at(lambda)) * unpack(v, n), dv, n);
  };
  OdeState end = integrate_to(rhs, x, t0, t1, options);
  return {unpack(end, n), OdeState(end.begin(), end.begin() + static_cast<std::ptrdiff_t>(n))};
}

double max_abs(const CMat2& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

const std::array<CMat2, 3>& sl2_numeric_basis() {
  static const std::array<CMat2, 3> basis = [] {
    std::array<CMat2, 3> b;
    b[0] << 0.5, 0.0, 0.0, -0.5;
    b[1] << 0.0, 1.0, 0.0, 0.0;
    b[2] << 0.0, 0.0, 1.0, 0.0;
    return b;
  }();
  return basis;
}

CMat2 to_numeric(const Mat2& m, const Point& p) {
  Evaluator ev(p);
  CMat2 out;
  out << ev(m[0]), ev(m[1]), ev(m[2]), ev(m[3]);
  return out;
}

// ------------------------------------------------------------------ flow

FlowRhs flow_rhs(const CMat2& P, const CMat2& Q, const CMat2& R) {
  return {CMat2::Zero(), 0.5 * bracket(R, Q) + 0.5 * P, 0.5 * bracket(P, Q)};
}

std::array<Mat2, 3> flow_rhs(const Mat2& P, const Mat2& Q, const Mat2& R) {
  const Expr half = Expr::rational(1, 2);
  const Mat2 zero{Expr(), Expr(), Expr(), Expr()};
  return {zero, tidy(half * commutator(R, Q) + half * P), tidy(half * commutator(P, Q))};
}

FlowRhs alt_flow_rhs(const CMat2& P, const CMat2& Q, const CMat2& R) {
  return {0.25 * bracket(P, R), 0.25 * bracket(R, Q) + 0.5 * P, 0.5 * bracket(P, Q)};
}

std::vector<Expr> flow_residual(const Mat2& P, const Mat2& Q, const Mat2& R, const Chart& chart) {
  const auto rhs = flow_rhs(P, Q, R);
  const std::array<Mat2, 3> lhs{partial(chart, P, "t"), partial(chart, Q, "t"), partial(chart, R, "t")};
  std::vector<Expr> out;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 4; ++i) out.push_back(tidy(lhs[k][i] - rhs[k][i]));
  return out;
}

// ------------------------------------------------------------- Lax pair

LaxPair default_lax_pair(const Mat2& P, const Mat2& Q, const Mat2& R) {
  const Expr l = Expr::var("lambda");
  const Expr half = Expr::rational(1, 2);
  return {Q + l * R + (l * l) * P, half * R + (half * l) * P};
}

Mat2 compatibility_residual(const LaxPair& lax, const Chart& chart) {
  return tidy(partial(chart, lax.A, "t") - partial(chart, lax.B, "lambda") + commutator(lax.A, lax.B));
}

std::vector<Mat2> lambda_coefficients(const Mat2& m, int max_degree) {
  std::vector<Mat2> out;
  Mat2 d = m;
  double factorial = 1.0;
  const std::map<std::string, Expr> at_zero{{"lambda", Expr()}};
  for (int k = 0; k <= max_degree; ++k) {
    if (k > 0) {
      d = diff(d, "lambda");
      factorial *= k;
    }
    Mat2 c;
    for (int i = 0; i < 4; ++i)
      c[i] = tidy(substitute(d[i], at_zero) / Expr::rational(static_cast<std::int64_t>(factorial)));
    out.push_back(c);
  }
  return out;
}

LaxPair gauge_transform(const LaxPair& lax, const Mat2& gamma, const Chart& chart) {
  const Mat2 inv = inverse(gamma);
  return {tidy(gamma * lax.A * inv + partial(chart, gamma, "lambda") * inv),
          tidy(gamma * lax.B * inv + partial(chart, gamma, "t") * inv)};
}

// -------------------------------------------------------- classification

const char* to_string(GaugeClass c) {
  switch (c) {
    case GaugeClass::PII: return "PII";
    case GaugeClass::PI: return "PI";
    case GaugeClass::Solvable: return "solvable";
  }
  return "?";
}

GaugeClass classify_gauge(const CMat2& P, const CMat2& R) {
  constexpr double distinct = 1e-10;
  constexpr double vanishing = 1e-14;
  const double np = P.norm();
  if (np < 1e-300) throw DomainError("classify_gauge: P = 0");
  const Complex tr = P.trace();
  const double disc = std::abs(tr * tr - 4.0 * P.determinant()) / (np * np);
  if (disc >= distinct) return GaugeClass::PII;
  if (disc > vanishing)
    throw DomainError("classify_gauge: discriminant of P is borderline (" + std::to_string(disc) + ")");
  const double nr = R.norm();
  if (nr < 1e-300) return GaugeClass::Solvable;
  const double tpr = std::abs((P * R).trace()) / (np * nr);
  if (tpr >= distinct) return GaugeClass::PI;
  if (tpr > vanishing) throw DomainError("classify_gauge: Tr(PR) is borderline (" + std::to_string(tpr) + ")");
  return GaugeClass::Solvable;
}

// ------------------------------------------------------ parametrizations

SymbolicState pii_state(const Expr& alpha, std::optional<Expr> alpha_ode, const Expr& q3_shift) {
  const Expr t = Expr::var("t"), u = Expr::var("u"), y = Expr::var("y"), z = Expr::var("z");
  const Expr half = Expr::rational(1, 2);
  const Expr a_ode = alpha_ode.value_or(alpha);
  const auto& L = sl2_basis();
  SymbolicState s{
      Expr(2) * L[0],
      (Expr(2) * z + t) * L[0] - (u * y) * L[1] - (q3_shift + (Expr(2) * y * z + 1 - Expr(2) * alpha) / u) * L[2],
      u * L[1] - (Expr(2) * z / u) * L[2],
      Chart({"t", "lambda"}, {{"u", "t", -y * u},
                              {"z", "t", Expr(-2) * y * z + a_ode - half},
                              {"y", "t", z + y * y + half * t}}),
  };
  s.P = tidy(s.P);
  s.Q = tidy(s.Q);
  s.R = tidy(s.R);
  return s;
}

std::array<CMat2, 3> pii_matrices(double u, double y, double z, double t, double alpha) {
  if (u == 0.0) throw DomainError("PII parametrization needs u != 0");
  const auto& L = sl2_numeric_basis();
  return {2.0 * L[0], (2 * z + t) * L[0] - (u * y) * L[1] - ((2 * y * z + 1 - 2 * alpha) / u) * L[2],
          u * L[1] - (2 * z / u) * L[2]};
}

OdeRhs pii_rhs(double alpha) {
  return [alpha](const OdeState& s, OdeState& ds, double t) {
    const double y = s[0], z = s[1], u = s[2];
    ds[0] = z + y * y + 0.5 * t;
    ds[1] = -2 * y * z + alpha - 0.5;
    ds[2] = -y * u;
  };
}

SymbolicState pi_state(const Expr& shift) {
  const Expr t = Expr::var("t"), y = Expr::var("y"), z = Expr::var("z");
  const auto& L = sl2_basis();
  SymbolicState s{
      L[1],
      tidy(Expr(-2) * z * L[0] + (y * y + Expr::rational(1, 2) * t) * L[1] - (Expr(4) * y) * L[2]),
      tidy(y * L[1] + Expr(4) * L[2]),
      Chart({"t", "lambda"}, {{"y", "t", z}, {"z", "t", Expr(6) * y * y + t + shift}}),
  };
  return s;
}

LaxPair pi_lax_pair(const SymbolicState& s) {
  const Expr l = Expr::var("lambda"), y = Expr::var("y");
  const Expr half = Expr::rational(1, 2);
  return {tidy(s.Q + l * s.R + (l * l) * s.P), tidy(half * (s.R + y * sl2_basis()[1]) + (half * l) * s.P)};
}

std::array<CMat2, 3> pi_matrices(double y, double z, double t) {
  const auto& L = sl2_numeric_basis();
  return {L[1], -2 * z * L[0] + (y * y + 0.5 * t) * L[1] - 4 * y * L[2], y * L[1] + 4.0 * L[2]};
}

CMat2 pi_B(double y, double z, double t, Complex lambda) {
  const auto m = pi_matrices(y, z, t);
  return 0.5 * (m[2] + y * sl2_numeric_basis()[1]) + 0.5 * lambda * m[0];
}

OdeRhs pi_rhs() {
  return [](const OdeState& s, OdeState& ds, double t) {
    ds[0] = s[1];
    ds[1] = 6 * s[0] * s[0] + t;
  };
}

SolvableState solvable_state(const Expr& a, const Expr& b, const Expr& c) {
  const Expr t = Expr::var("t");
  const Expr ab = a + b * t;
  const Expr r1 = Expr(4) * tanh(t);
  const Expr r2 = ab * r1 - Expr(4) * b;
  const Expr q2 = Expr::rational(1, 4) * sinh(Expr(2) * t) - diff(ab * r2, "t") + c * pow(cosh(t), 2);
  return solvable_state_from(r1, r2, q2);
}

SolvableState solvable_state_from(const Expr& r1, const Expr& r2, const Expr& q2) {
  if (is_symbolically_zero(diff(r1, "t")))
    throw DomainError("solvable case: r1 = const is the singular branch (degenerate tetrad)");
  const auto& L = sl2_basis();
  SolvableState s{tidy(r1), tidy(r2), tidy(Expr(-2) * diff(r2, "t")), tidy(q2), tidy(diff(r1, "t")),
                  L[1],     {},       {},                            Chart({"t", "lambda"})};
  s.Q = tidy(s.q1 * L[0] + s.q2 * L[1] + s.q3 * L[2]);
  s.R = tidy(s.r1 * L[0] + s.r2 * L[1]);
  return s;
}

std::array<Expr, 3> solvable_residuals(const SolvableState& s) {
  const Expr r1d = diff(s.r1, "t"), r2d = diff(s.r2, "t");
  return {tidy(Expr(2) * diff(r1d, "t") + r1d * s.r1), tidy(Expr(2) * diff(r2d, "t") + r1d * s.r2),
          tidy(Expr(2) * diff(s.q2, "t") - Expr(2) * s.r2 * r2d - s.q2 * s.r1 - 1)};
}

// ------------------------------------------------------------- flatness

NumericLax pii_numeric_lax(double alpha, const OdeState& yzu0, double t0) {
  NumericLax lax;
  lax.state_rhs = pii_rhs(alpha);
  lax.state0 = yzu0;
  lax.t0 = t0;
  lax.A = [alpha](double t, const OdeState& s, Complex l) {
    const auto m = pii_matrices(s[2], s[0], s[1], t, alpha);
    return CMat2(m[1] + l * m[2] + l * l * m[0]);
  };
  lax.B = [alpha](double t, const OdeState& s, Complex l) {
    const auto m = pii_matrices(s[2], s[0], s[1], t, alpha);
    return CMat2(0.5 * m[2] + 0.5 * l * m[0]);
  };
  return lax;
}

NumericLax pi_numeric_lax(const OdeState& yz0, double t0) {
  NumericLax lax;
  lax.state_rhs = pi_rhs();
  lax.state0 = yz0;
  lax.t0 = t0;
  lax.A = [](double t, const OdeState& s, Complex l) {
    const auto m = pi_matrices(s[0], s[1], t);
    return CMat2(m[1] + l * m[2] + l * l * m[0]);
  };
  lax.B = [](double t, const OdeState& s, Complex l) { return pi_B(s[0], s[1], t, l); };
  return lax;
}

NumericLax solvable_numeric_lax(const Expr& a, const Expr& b, const Expr& c) {
  const SolvableState st = solvable_state(a, b, c);
  NumericLax lax;
  lax.A = [P = st.P, Q = st.Q, R = st.R](double t, const OdeState&, Complex l) {
    const Point p{{"t", t}};
    return CMat2(to_numeric(Q, p) + l * to_numeric(R, p) + l * l * to_numeric(P, p));
  };
  lax.B = [P = st.P, R = st.R](double t, const OdeState&, Complex l) {
    const Point p{{"t", t}};
    return CMat2(0.5 * to_numeric(R, p) + 0.5 * l * to_numeric(P, p));
  };
  return lax;
}

FlatnessResult flatness_check(const NumericLax& lax, double lambda0, double lambda1, double t0, double t1,
                              const OdeOptions& options) {
  if (!lax.A || !lax.B) throw DomainError("flatness_check: A and B are required");
  if (!lax.state0.empty() && !lax.state_rhs) throw DomainError("flatness_check: state without a right-hand side");
  OdeState s0 = lax.state0;
  if (!s0.empty() && t0 != lax.t0) s0 = integrate_to(lax.state_rhs, s0, lax.t0, t0, options);
  const CMat2 id = CMat2::Identity();

  const CMat2 a1 = lambda_edge(lax, t0, s0, id, lambda0, lambda1, options);
  const CMat2 path1 = t_edge(lax, lambda1, s0, a1, t0, t1, options).first;

  const auto [b1, s1] = t_edge(lax, lambda0, s0, id, t0, t1, options);
  const CMat2 path2 = lambda_edge(lax, t1, s1, b1, lambda0, lambda1, options);

  return {(path1 - path2).norm(), path1, path2};
}

// --------------------------------------------------- alternative frame

AltFrameResult alt_frame_check(const CMat2& P0, const CMat2& Q0, const CMat2& R0, double t0, double t1, int samples,
                               const OdeOptions& options) {
  if (samples < 1) throw DomainError("alt_frame_check: samples must be positive");
  auto alt = [](const OdeState& x, OdeState& dx, double) {
    const CMat2 P = unpack(x, 0), Q = unpack(x, 8), R = unpack(x, 16), G = unpack(x, 24);
    const FlowRhs f = alt_flow_rhs(P, Q, R);
    pack(f.dP, dx, 0);
    pack(f.dQ, dx, 8);
    pack(f.dR, dx, 16);
    pack(0.25 * G * R, dx, 24);
  };
  auto flow = [](const OdeState& x, OdeState& dx, double) {
    const FlowRhs f = flow_rhs(unpack(x, 0), unpack(x, 8), unpack(x, 16));
    pack(f.dP, dx, 0);
    pack(f.dQ, dx, 8);
    pack(f.dR, dx, 16);
  };
  OdeState xa(32), xf(24);
  for (OdeState* x : {&xa, &xf}) {
    pack(P0, *x, 0);
    pack(Q0, *x, 8);
    pack(R0, *x, 16);
  }
  pack(CMat2::Identity(), xa, 24);

  std::vector<double> times;
  for (int i = 1; i <= samples; ++i) times.push_back(t0 + (t1 - t0) * i / samples);
  const auto ya = integrate_at(alt, xa, t0, times, options);
  const auto yf = integrate_at(flow, xf, t0, times, options);

  AltFrameResult out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const CMat2 P = unpack(ya[i], 0), Q = unpack(ya[i], 8), R = unpack(ya[i], 16), G = unpack(ya[i], 24);
    const CMat2 Gi = G.inverse();
    const std::array<CMat2, 3> X{P, Q, R};
    std::array<CMat2, 3> Xt;
    for (int k = 0; k < 3; ++k) Xt[k] = G * X[k] * Gi;
    out.max_p_drift = std::max(out.max_p_drift, max_abs(Xt[0] - P0));
    for (int k = 0; k < 3; ++k)
      out.max_flow_mismatch = std::max(out.max_flow_mismatch, max_abs(Xt[k] - unpack(yf[i], 8 * k)));
    // d/dt(γXγ⁻¹) = γ(Ẋ + ¼[R, X])γ⁻¹ with Ẋ from the alternative system.
    const FlowRhs a = alt_flow_rhs(P, Q, R);
    const std::array<CMat2, 3> dX{a.dP, a.dQ, a.dR};
    const FlowRhs target = flow_rhs(Xt[0], Xt[1], Xt[2]);
    const std::array<CMat2, 3> dT{target.dP, target.dQ, target.dR};
    for (int k = 0; k < 3; ++k) {
      const CMat2 chain = G * (dX[k] + 0.25 * bracket(R, X[k])) * Gi;
      out.max_identity_residual = std::max(out.max_identity_residual, max_abs(chain - dT[k]));
    }
  }
  return out;
}

// ---------------------------------------------------------- trajectories

FlowRhs pi_flow_rhs(const CMat2& P, const CMat2& Q, const CMat2& R) {
  const Complex y = (R * R).trace() / 8.0;
  return {CMat2::Zero(), 0.5 * bracket(R, Q) + 0.5 * P + 0.5 * y * bracket(P, Q),
          0.5 * bracket(P, Q) + 0.5 * y * bracket(P, R)};
}

namespace {

using MatrixFlow = FlowRhs (*)(const CMat2&, const CMat2&, const CMat2&);

std::vector<std::array<CMat2, 3>> integrate_matrices(MatrixFlow f, const std::array<CMat2, 3>& x0, double t0,
                                                     const std::vector<double>& times, const OdeOptions& options) {
  OdeState x(24);
  for (int k = 0; k < 3; ++k) pack(x0[k], x, 8 * k);
  auto rhs = [f](const OdeState& v, OdeState& dv, double) {
    const FlowRhs r = f(unpack(v, 0), unpack(v, 8), unpack(v, 16));
    pack(r.dP, dv, 0);
    pack(r.dQ, dv, 8);
    pack(r.dR, dv, 16);
  };
  std::vector<std::array<CMat2, 3>> out;
  for (const auto& v : integrate_at(rhs, x, t0, times, options)) out.push_back({unpack(v, 0), unpack(v, 8), unpack(v, 16)});
  return out;
}

double mismatch(const std::array<CMat2, 3>& a, const std::array<CMat2, 3>& b) {
  double m = 0.0;
  for (int k = 0; k < 3; ++k) m = std::max(m, max_abs(a[k] - b[k]));
  return m;
}

}  // namespace

std::vector<TrajectorySample> pii_trajectory(double alpha, const OdeState& yzu0, double t0,
                                             const std::vector<double>& times, const OdeOptions& options) {
  if (yzu0.size() != 3) throw DomainError("PII trajectory needs (y, z, u)");
  const auto states = integrate_at(pii_rhs(alpha), yzu0, t0, times, options);
  const auto direct =
      integrate_matrices(flow_rhs, pii_matrices(yzu0[2], yzu0[0], yzu0[1], t0, alpha), t0, times, options);
  std::vector<TrajectorySample> out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& s = states[i];
    const auto m = pii_matrices(s[2], s[0], s[1], times[i], alpha);
    out.push_back({times[i], s, m[0], m[1], m[2], mismatch(m, direct[i])});
  }
  return out;
}

std::vector<TrajectorySample> pi_trajectory(const OdeState& yz0, double t0, const std::vector<double>& times,
                                            const OdeOptions& options) {
  if (yz0.size() != 2) throw DomainError("PI trajectory needs (y, z)");
  const auto states = integrate_at(pi_rhs(), yz0, t0, times, options);
  const auto direct = integrate_matrices(pi_flow_rhs, pi_matrices(yz0[0], yz0[1], t0), t0, times, options);
  std::vector<TrajectorySample> out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& s = states[i];
    const auto m = pi_matrices(s[0], s[1], times[i]);
    out.push_back({times[i], s, m[0], m[1], m[2], mismatch(m, direct[i])});
  }
  return out;
}

}  // namespace nkgeo
