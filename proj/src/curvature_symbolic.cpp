#include "nkgeo/curvature.hpp"

#include "nkgeo/error.hpp"

namespace nkgeo {
namespace {

bool literal_zero(const Expr& e) { return e.kind() == Kind::Rational && e.is_zero(); }

// dg[c][a][b] = ∂_c g_ab
std::vector<Expr> metric_partials(const Metric& g) {
  const std::size_t d = g.dim();
  std::vector<Expr> dg(d * d * d);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b)
        dg[(c * d + a) * d + b] = dg[(c * d + b) * d + a] = g.chart().partial(g(a, b), c);
  return dg;
}

}  // namespace

Tensor christoffel(const Metric& g, const std::vector<Expr>& inverse) {
  const std::size_t d = g.dim();
  auto dg = metric_partials(g);
  auto at = [&](std::size_t c, std::size_t a, std::size_t b) -> const Expr& { return dg[(c * d + a) * d + b]; };
  std::vector<Expr> lower(d * d * d);
  for (std::size_t e = 0; e < d; ++e)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = b; c < d; ++c)
        lower[(e * d + b) * d + c] = lower[(e * d + c) * d + b] =
            simplify(Expr::rational(1, 2) * (at(b, e, c) + at(c, e, b) - at(e, b, c)));
  Tensor gamma(d, {Slot::Up, Slot::Down, Slot::Down});
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      for (std::size_t c = b; c < d; ++c) {
        Expr s;
        for (std::size_t e = 0; e < d; ++e) {
          const Expr& l = lower[(e * d + b) * d + c];
          if (literal_zero(l) || literal_zero(inverse[a * d + e])) continue;
          s += inverse[a * d + e] * l;
        }
        gamma.at({a, b, c}) = gamma.at({a, c, b}) = simplify(s);
      }
    }
  }
  return gamma;
}

Tensor christoffel(const Metric& g) { return christoffel(g, inverse_metric(g)); }

Tensor riemann(const Metric& g, const Tensor& gamma) {
  const std::size_t d = g.dim();
  const Chart& ch = g.chart();
  // dgamma[k][a][b][c] = ∂_k Γ^a_bc, filled for b ≤ c.
  std::vector<Expr> dgamma(d * d * d * d);
  auto dgi = [&](std::size_t k, std::size_t a, std::size_t b, std::size_t c) -> Expr& {
    if (b > c) std::swap(b, c);
    return dgamma[((k * d + a) * d + b) * d + c];
  };
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t c = b; c < d; ++c) dgi(k, a, b, c) = ch.partial(gamma.at({a, b, c}), k);

  Tensor r(d, {Slot::Up, Slot::Down, Slot::Down, Slot::Down});
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t e = c + 1; e < d; ++e) {
          // Here the last index is called e to keep d for the dimension.
          Expr s = dgi(c, a, e, b) - dgi(e, a, c, b);
          for (std::size_t f = 0; f < d; ++f) {
            const Expr& g1 = gamma.at({a, c, f});
            const Expr& g2 = gamma.at({f, e, b});
            const Expr& g3 = gamma.at({a, e, f});
            const Expr& g4 = gamma.at({f, c, b});
            if (!literal_zero(g1) && !literal_zero(g2)) s += g1 * g2;
            if (!literal_zero(g3) && !literal_zero(g4)) s -= g3 * g4;
          }
          Expr v = simplify(s);
          r.at({a, b, c, e}) = v;
          r.at({a, b, e, c}) = simplify(-v);
        }
      }
    }
  }
  return r;
}

Tensor ricci(const Tensor& riem) {
  const std::size_t d = riem.dim();
  Tensor out(d, {Slot::Down, Slot::Down});
  for (std::size_t b = 0; b < d; ++b) {
    for (std::size_t e = 0; e < d; ++e) {
      Expr s;
      for (std::size_t a = 0; a < d; ++a) s += riem.at({a, b, a, e});
      out.at({b, e}) = simplify(s);
    }
  }
  return out;
}

Expr scalar_curvature(const std::vector<Expr>& inverse, const Tensor& ric) {
  const std::size_t d = ric.dim();
  Expr s;
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t e = 0; e < d; ++e)
      if (!literal_zero(inverse[b * d + e])) s += inverse[b * d + e] * ric.at({b, e});
  return simplify(s);
}

Curvature curvature(const Metric& g) {
  Curvature c{inverse_metric(g), Tensor(g.dim(), {}), Tensor(g.dim(), {}), Tensor(g.dim(), {}), Expr()};
  c.gamma = christoffel(g, c.inverse);
  c.riemann = riemann(g, c.gamma);
  c.ricci = ricci(c.riemann);
  c.scalar = scalar_curvature(c.inverse, c.ricci);
  return c;
}

Tensor lower_first(const Metric& g, const Tensor& riem) {
  const std::size_t d = g.dim();
  Tensor out(d, {Slot::Down, Slot::Down, Slot::Down, Slot::Down});
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    auto idx = out.unflatten(flat);
    Expr s;
    for (std::size_t e = 0; e < d; ++e) {
      const Expr& ge = g(idx[0], e);
      if (literal_zero(ge)) continue;
      s += ge * riem.at({e, idx[1], idx[2], idx[3]});
    }
    out[flat] = simplify(s);
  }
  return out;
}

Tensor covariant_derivative(const Tensor& t, const Chart& chart, const Tensor& gamma) {
  const std::size_t d = t.dim();
  if (chart.dim() != d || gamma.dim() != d) throw DomainError("covariant derivative: dimension mismatch");
  if (t.rank() > 3) throw DomainError("covariant derivative limited to rank <= 3");
  std::vector<Slot> slots = t.slots();
  slots.push_back(Slot::Down);
  Tensor out(d, slots);
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    auto idx = t.unflatten(flat);
    for (std::size_t c = 0; c < d; ++c) {
      Expr s = chart.partial(t[flat], c);
      for (std::size_t k = 0; k < t.rank(); ++k) {
        for (std::size_t e = 0; e < d; ++e) {
          auto moved = idx;
          moved[k] = e;
          std::size_t mf = 0;
          for (std::size_t i : moved) mf = mf * d + i;
          const Expr& tv = t[mf];
          if (literal_zero(tv)) continue;
          if (t.slots()[k] == Slot::Up) {
            const Expr& gm = gamma.at({idx[k], c, e});
            if (!literal_zero(gm)) s += gm * tv;
          } else {
            const Expr& gm = gamma.at({e, c, idx[k]});
            if (!literal_zero(gm)) s -= gm * tv;
          }
        }
      }
      out[flat * d + c] = simplify(s);
    }
  }
  return out;
}

}  // namespace nkgeo
