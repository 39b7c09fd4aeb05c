#include <cmath>
#include <set>

#include "nkgeo/curvature.hpp"
#include "nkgeo/error.hpp"

namespace nkgeo {
namespace {

std::vector<std::string> tape_variables(const std::vector<Expr>& outputs, const Chart& chart) {
  std::set<std::string> names;
  for (const Expr& e : outputs) {
    auto fv = free_variables(e);
    names.insert(fv.begin(), fv.end());
  }
  for (const std::string& c : chart.coordinates()) names.insert(c);
  return {names.begin(), names.end()};
}

std::vector<Complex> bind_values(const std::vector<std::string>& vars, const Point& p) {
  std::vector<Complex> out;
  out.reserve(vars.size());
  for (const std::string& v : vars) {
    auto it = p.find(v);
    if (it == p.end()) throw UnboundVariable(v);
    out.push_back(it->second);
  }
  return out;
}

std::vector<Expr> compiled_outputs(const Metric& g) {
  const std::size_t d = g.dim();
  const Chart& ch = g.chart();
  std::vector<Expr> out;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) out.push_back(g(a, b));
  const std::size_t pairs = out.size();
  std::vector<std::vector<Expr>> dg(d);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t k = 0; k < pairs; ++k) {
      dg[c].push_back(ch.partial(out[k], c));
    }
  }
  for (std::size_t c = 0; c < d; ++c) out.insert(out.end(), dg[c].begin(), dg[c].end());
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t e = c; e < d; ++e)
      for (std::size_t k = 0; k < pairs; ++k) out.push_back(ch.partial(dg[c][k], e));
  return out;
}

CMatrix checked_inverse(const CMatrix& g) {
  Eigen::FullPivLU<CMatrix> lu(g);
  double scale = g.cwiseAbs().maxCoeff();
  if (scale == 0.0 || !lu.isInvertible()) throw SingularEvaluation("degenerate metric", "g");
  return lu.inverse();
}

int permutation_sign(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  std::size_t p[4] = {a, b, c, d};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[i] == p[j]) return 0;
  int inversions = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 ? -1 : 1;
}

}  // namespace

CompiledMetric::CompiledMetric(const Metric& g) : CompiledMetric(g, compiled_outputs(g)) {}

CompiledMetric::CompiledMetric(const Metric& g, const std::vector<Expr>& outputs)
    : g_(g), vars_(tape_variables(outputs, g.chart())), tape_(outputs, vars_) {}

CMatrix CompiledMetric::metric_at(const Point& p) const {
  const std::size_t d = g_.dim();
  std::vector<Complex> all = tape_.run(bind_values(vars_, p));
  CMatrix g(d, d);
  std::size_t k = 0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b, ++k) g(a, b) = g(b, a) = all[k];
  return g;
}

PointCurvature CompiledMetric::at(const Point& p) const {
  const std::size_t d = g_.dim();
  const std::size_t pairs = d * (d + 1) / 2;
  std::vector<Complex> all = tape_.run(bind_values(vars_, p));
  std::vector<std::size_t> pair_index(d * d);
  {
    std::size_t k = 0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b, ++k) pair_index[a * d + b] = pair_index[b * d + a] = k;
  }
  std::vector<std::size_t> second_offset(d * d);
  {
    std::size_t k = 0;
    for (std::size_t c = 0; c < d; ++c)
      for (std::size_t e = c; e < d; ++e, ++k) second_offset[c * d + e] = second_offset[e * d + c] = k;
  }
  const std::size_t first_base = pairs;
  const std::size_t second_base = pairs + d * pairs;

  PointCurvature pc;
  pc.dim = d;
  pc.g.resize(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) pc.g(a, b) = all[pair_index[a * d + b]];
  pc.ginv = checked_inverse(pc.g);

  auto dg = [&](std::size_t c, std::size_t a, std::size_t b) {
    return all[first_base + c * pairs + pair_index[a * d + b]];
  };
  auto ddg = [&](std::size_t c, std::size_t e, std::size_t a, std::size_t b) {
    return all[second_base + second_offset[c * d + e] * pairs + pair_index[a * d + b]];
  };

  pc.dg.resize(d * d * d);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) pc.dg[(c * d + a) * d + b] = dg(c, a, b);

  const std::size_t d3 = d * d * d;
  std::vector<Complex> low(d3);  // Γ_ebc
  for (std::size_t e = 0; e < d; ++e)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c) low[(e * d + b) * d + c] = 0.5 * (dg(b, e, c) + dg(c, e, b) - dg(e, b, c));

  pc.gamma.assign(d3, 0.0);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c) {
        Complex s = 0.0;
        for (std::size_t e = 0; e < d; ++e) s += pc.ginv(a, e) * low[(e * d + b) * d + c];
        pc.gamma[(a * d + b) * d + c] = s;
      }

  // ∂_k Γ^a_bc = (∂_k g^af) Γ_fbc + g^af ∂_k Γ_fbc with ∂_k g^-1 = −g^-1 (∂_k g) g^-1.
  std::vector<Complex> dgamma(d * d3, 0.0);
  CMatrix dgk(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) dgk(a, b) = dg(k, a, b);
    CMatrix dginv = -pc.ginv * dgk * pc.ginv;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t c = 0; c < d; ++c) {
          Complex s = 0.0;
          for (std::size_t f = 0; f < d; ++f) {
            Complex dlow = 0.5 * (ddg(k, b, f, c) + ddg(k, c, f, b) - ddg(k, f, b, c));
            s += dginv(a, f) * low[(f * d + b) * d + c] + pc.ginv(a, f) * dlow;
          }
          dgamma[((k * d + a) * d + b) * d + c] = s;
        }
  }

  auto G = [&](std::size_t a, std::size_t b, std::size_t c) { return pc.gamma[(a * d + b) * d + c]; };
  auto dG = [&](std::size_t k, std::size_t a, std::size_t b, std::size_t c) {
    return dgamma[((k * d + a) * d + b) * d + c];
  };
  const std::size_t d4 = d3 * d;
  pc.riemann.assign(d4, 0.0);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t e = c + 1; e < d; ++e) {
          Complex s = dG(c, a, e, b) - dG(e, a, c, b);
          for (std::size_t f = 0; f < d; ++f) s += G(a, c, f) * G(f, e, b) - G(a, e, f) * G(f, c, b);
          pc.riemann[((a * d + b) * d + c) * d + e] = s;
          pc.riemann[((a * d + b) * d + e) * d + c] = -s;
        }

  pc.riemann_lower.assign(d4, 0.0);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t rest = 0; rest < d3; ++rest) {
      Complex s = 0.0;
      for (std::size_t e = 0; e < d; ++e) s += pc.g(a, e) * pc.riemann[e * d3 + rest];
      pc.riemann_lower[a * d3 + rest] = s;
    }

  pc.ricci.assign(d * d, 0.0);
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t e = 0; e < d; ++e) {
      Complex s = 0.0;
      for (std::size_t a = 0; a < d; ++a) s += pc.riemann[((a * d + b) * d + a) * d + e];
      pc.ricci[b * d + e] = s;
    }
  pc.scalar = 0.0;
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t e = 0; e < d; ++e) pc.scalar += pc.ginv(b, e) * pc.ricci[b * d + e];
  return pc;
}

// ------------------------------------------------------------ FD oracle

std::vector<Complex> fd_riemann(const Metric& metric, const Point& p, double h) {
  if (metric.chart().has_jets()) throw DomainError("finite-difference oracle needs a chart without jets");
  const std::size_t d = metric.dim();
  const auto& coords = metric.chart().coordinates();
  std::vector<std::string> vars = tape_variables(metric.components(), metric.chart());
  Tape tape(metric.components(), vars);

  auto g_at = [&](const std::vector<std::pair<std::size_t, double>>& shifts) {
    Point q = p;
    for (auto [i, s] : shifts) q[coords[i]] += s;
    return tape.run(bind_values(vars, q));
  };
  const std::size_t n = d * d;
  const std::vector<Complex> g0 = g_at({});

  // First derivatives dg[c][ab], second derivatives ddg[c][e][ab], each Richardson-extrapolated.
  auto first = [&](std::size_t c, double step) {
    auto plus = g_at({{c, step}});
    auto minus = g_at({{c, -step}});
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = (plus[k] - minus[k]) / (2 * step);
    return out;
  };
  auto second = [&](std::size_t c, std::size_t e, double step) {
    std::vector<Complex> out(n);
    if (c == e) {
      auto plus = g_at({{c, step}});
      auto minus = g_at({{c, -step}});
      for (std::size_t k = 0; k < n; ++k) out[k] = (plus[k] - 2.0 * g0[k] + minus[k]) / (step * step);
    } else {
      auto pp = g_at({{c, step}, {e, step}});
      auto pm = g_at({{c, step}, {e, -step}});
      auto mp = g_at({{c, -step}, {e, step}});
      auto mm = g_at({{c, -step}, {e, -step}});
      for (std::size_t k = 0; k < n; ++k) out[k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4 * step * step);
    }
    return out;
  };
  auto richardson = [&](const std::vector<Complex>& coarse, const std::vector<Complex>& fine) {
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = fine[k] + (fine[k] - coarse[k]) / 3.0;
    return out;
  };

  std::vector<std::vector<Complex>> dg(d);
  for (std::size_t c = 0; c < d; ++c) dg[c] = richardson(first(c, h), first(c, h / 2));
  std::vector<std::vector<Complex>> ddg(d * d);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t e = c; e < d; ++e)
      ddg[c * d + e] = ddg[e * d + c] = richardson(second(c, e, h), second(c, e, h / 2));

  CMatrix g(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) g(a, b) = g0[a * d + b];
  CMatrix ginv = checked_inverse(g);

  // Γ^e_bc from the lowered symbols.
  auto d1 = [&](std::size_t c, std::size_t a, std::size_t b) { return dg[c][a * d + b]; };
  auto d2 = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t e) { return ddg[c * d + e][a * d + b]; };
  std::vector<Complex> up(d * d * d, 0.0);
  for (std::size_t e = 0; e < d; ++e)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c) {
        Complex s = 0.0;
        for (std::size_t f = 0; f < d; ++f) s += ginv(e, f) * 0.5 * (d1(b, f, c) + d1(c, f, b) - d1(f, b, c));
        up[(e * d + b) * d + c] = s;
      }
  auto U = [&](std::size_t e, std::size_t b, std::size_t c) { return up[(e * d + b) * d + c]; };

  // R_abcd = ½(g_ad,bc + g_bc,ad − g_ac,bd − g_bd,ac) + g_ef(Γ^e_bc Γ^f_ad − Γ^e_bd Γ^f_ac)
  std::vector<Complex> lower(d * d * d * d, 0.0);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t e = 0; e < d; ++e) {
          Complex s = 0.5 * (d2(a, e, b, c) + d2(b, c, a, e) - d2(a, c, b, e) - d2(b, e, a, c));
          for (std::size_t x = 0; x < d; ++x)
            for (std::size_t y = 0; y < d; ++y) s += g(x, y) * (U(x, b, c) * U(y, a, e) - U(x, b, e) * U(y, a, c));
          lower[((a * d + b) * d + c) * d + e] = s;
        }
  std::vector<Complex> out(lower.size(), 0.0);
  const std::size_t d3 = d * d * d;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t rest = 0; rest < d3; ++rest) {
      Complex s = 0.0;
      for (std::size_t x = 0; x < d; ++x) s += ginv(a, x) * lower[x * d3 + rest];
      out[a * d3 + rest] = s;
    }
  return out;
}

// --------------------------------------------------------- compiled tensor

namespace {

std::vector<Expr> tensor_outputs(const Tensor& t, const Chart& chart) {
  if (chart.dim() != t.dim()) throw DomainError("tensor and chart dimension differ");
  std::vector<Expr> outputs = t.components();
  for (std::size_t c = 0; c < chart.dim(); ++c)
    for (const Expr& comp : t.components()) outputs.push_back(chart.partial(comp, c));
  return outputs;
}

}  // namespace

CompiledTensor::CompiledTensor(const Tensor& t, const Chart& chart) : CompiledTensor(t, chart, tensor_outputs(t, chart)) {}

CompiledTensor::CompiledTensor(const Tensor& t, const Chart& chart, const std::vector<Expr>& outputs)
    : t_(t), vars_(tape_variables(outputs, chart)), tape_(outputs, vars_) {}

std::vector<Complex> CompiledTensor::values(const Point& p) const {
  auto all = tape_.run(bind_values(vars_, p));
  all.resize(t_.size());
  return all;
}

std::vector<Complex> CompiledTensor::covariant_derivative(const Point& p, const PointCurvature& pc) const {
  const std::size_t d = t_.dim();
  if (pc.dim != d) throw DomainError("curvature data dimension differs");
  auto all = tape_.run(bind_values(vars_, p));
  const std::size_t n = t_.size();
  std::vector<Complex> out(n * d);
  for (std::size_t flat = 0; flat < n; ++flat) {
    auto idx = t_.unflatten(flat);
    for (std::size_t c = 0; c < d; ++c) {
      Complex s = all[n + c * n + flat];
      for (std::size_t k = 0; k < t_.rank(); ++k) {
        // Stride of slot k in the flat layout.
        std::size_t stride = 1;
        for (std::size_t j = k + 1; j < t_.rank(); ++j) stride *= d;
        std::size_t base = flat - idx[k] * stride;
        for (std::size_t e = 0; e < d; ++e) {
          Complex tv = all[base + e * stride];
          if (tv == Complex(0.0)) continue;
          if (t_.slots()[k] == Slot::Up)
            s += pc.gamma[(idx[k] * d + c) * d + e] * tv;
          else
            s -= pc.gamma[(e * d + c) * d + idx[k]] * tv;
        }
      }
      out[flat * d + c] = s;
    }
  }
  return out;
}

// ------------------------------------------------------------ 4D Hodge / Weyl

std::vector<Complex> volume_form(const CMatrix& g, int orientation) {
  if (g.rows() != 4) throw DomainError("volume form implemented for d = 4");
  Complex root = std::sqrt(g.determinant());
  std::vector<Complex> eps(256, 0.0);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t e = 0; e < 4; ++e)
          if (int s = permutation_sign(a, b, c, e))
            eps[((a * 4 + b) * 4 + c) * 4 + e] = double(orientation * s) * root;
  return eps;
}

namespace {

// ε_ab^cd with the last pair raised.
std::vector<Complex> raised_volume(const CMatrix& g, const CMatrix& ginv, int orientation) {
  auto eps = volume_form(g, orientation);
  std::vector<Complex> out(256, 0.0);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t e = 0; e < 4; ++e) {
          Complex s = 0.0;
          for (std::size_t x = 0; x < 4; ++x)
            for (std::size_t y = 0; y < 4; ++y) s += ginv(c, x) * ginv(e, y) * eps[((a * 4 + b) * 4 + x) * 4 + y];
          out[((a * 4 + b) * 4 + c) * 4 + e] = s;
        }
  return out;
}

}  // namespace

std::vector<Complex> hodge_star(const CMatrix& g, const CMatrix& ginv, int orientation,
                                const std::vector<Complex>& alpha) {
  if (alpha.size() != 16) throw DomainError("hodge_star expects a 4x4 array");
  auto er = raised_volume(g, ginv, orientation);
  std::vector<Complex> out(16, 0.0);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      Complex s = 0.0;
      for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t e = 0; e < 4; ++e) s += er[((a * 4 + b) * 4 + c) * 4 + e] * alpha[c * 4 + e];
      out[a * 4 + b] = 0.5 * s;
    }
  return out;
}

WeylSplit weyl_split(const PointCurvature& pc, int orientation) {
  if (pc.dim != 4) throw DomainError("Weyl split implemented for d = 4");
  const auto& g = pc.g;
  auto R = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t e) {
    return pc.riemann_lower[((a * 4 + b) * 4 + c) * 4 + e];
  };
  auto r = [&](std::size_t a, std::size_t b) { return pc.ricci[a * 4 + b]; };
  WeylSplit w;
  w.weyl.assign(256, 0.0);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t e = 0; e < 4; ++e) {
          Complex v = R(a, b, c, e) -
                      0.5 * (g(a, c) * r(b, e) - g(a, e) * r(b, c) - g(b, c) * r(a, e) + g(b, e) * r(a, c)) +
                      pc.scalar / 6.0 * (g(a, c) * g(b, e) - g(a, e) * g(b, c));
          w.weyl[((a * 4 + b) * 4 + c) * 4 + e] = v;
        }
  auto er = raised_volume(pc.g, pc.ginv, orientation);
  w.plus.assign(256, 0.0);
  w.minus.assign(256, 0.0);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t e = 0; e < 4; ++e) {
          Complex star = 0.0;
          for (std::size_t x = 0; x < 4; ++x)
            for (std::size_t y = 0; y < 4; ++y)
              star += er[((c * 4 + e) * 4 + x) * 4 + y] * w.weyl[((a * 4 + b) * 4 + x) * 4 + y];
          star *= 0.5;
          std::size_t k = ((a * 4 + b) * 4 + c) * 4 + e;
          w.plus[k] = 0.5 * (w.weyl[k] + star);
          w.minus[k] = 0.5 * (w.weyl[k] - star);
        }
  return w;
}

int self_dual_orientation(const CMatrix& g, const std::vector<Complex>& alpha, double tol) {
  CMatrix ginv = checked_inverse(g);
  auto star = hodge_star(g, ginv, 1, alpha);
  double scale = 0.0, plus = 0.0, minus = 0.0;
  for (std::size_t k = 0; k < 16; ++k) {
    scale = std::max(scale, std::abs(alpha[k]));
    plus = std::max(plus, std::abs(star[k] - alpha[k]));
    minus = std::max(minus, std::abs(star[k] + alpha[k]));
  }
  if (scale == 0.0) return 0;
  if (plus <= tol * scale) return 1;
  if (minus <= tol * scale) return -1;
  return 0;
}

}  // namespace nkgeo
