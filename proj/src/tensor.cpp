#include "nkgeo/tensor.hpp"

#include "nkgeo/error.hpp"
#include "nkgeo/zero_test.hpp"

namespace nkgeo {

Tensor::Tensor(std::size_t dim, std::vector<Slot> slots) : dim_(dim), slots_(std::move(slots)) {
  std::size_t n = 1;
  for (std::size_t k = 0; k < slots_.size(); ++k) n *= dim_;
  comps_.assign(n, Expr());
}

std::size_t Tensor::flat(std::initializer_list<std::size_t> idx) const {
  if (idx.size() != slots_.size()) throw DomainError("tensor index arity mismatch");
  std::size_t f = 0;
  for (std::size_t i : idx) f = f * dim_ + i;
  return f;
}

std::vector<std::size_t> Tensor::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(slots_.size());
  for (std::size_t k = slots_.size(); k-- > 0;) {
    idx[k] = flat % dim_;
    flat /= dim_;
  }
  return idx;
}

Tensor Tensor::simplified() const {
  Tensor t = *this;
  for (Expr& c : t.comps_) c = simplify(c);
  return t;
}

Metric::Metric(Chart chart, std::vector<Expr> components) : chart_(std::move(chart)), g_(std::move(components)) {
  const std::size_t d = chart_.dim();
  if (g_.size() != d * d) throw DomainError("metric needs d*d components");
  for (Expr& c : g_) c = simplify(c);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b)
      if (!(g_[a * d + b] == g_[b * d + a]) && !is_symbolically_zero(g_[a * d + b] - g_[b * d + a]))
        throw DomainError("metric is not symmetric");
}

Tensor Metric::as_tensor() const {
  Tensor t(dim(), {Slot::Down, Slot::Down});
  for (std::size_t k = 0; k < g_.size(); ++k) t[k] = g_[k];
  return t;
}

namespace {

Expr det_rec(const std::vector<Expr>& m, std::size_t d, std::size_t col, std::uint32_t used) {
  if (col == d) return Expr(1);
  Expr sum;
  int sign = 1;
  for (std::size_t r = 0; r < d; ++r) {
    if (used & (1u << r)) continue;
    const Expr& entry = m[r * d + col];
    if (!(entry.is_zero() && entry.kind() == Kind::Rational)) {
      Expr minor = det_rec(m, d, col + 1, used | (1u << r));
      Expr term = entry * minor;
      sum = sign > 0 ? sum + term : sum - term;
    }
    sign = -sign;
  }
  return sum;
}

}  // namespace

Expr determinant(const std::vector<Expr>& m, std::size_t d) {
  if (d > 6) throw DomainError("symbolic determinant limited to d <= 6");
  return simplify(det_rec(m, d, 0, 0));
}

std::vector<Expr> inverse_metric(const Metric& g) {
  const std::size_t d = g.dim();
  if (d > 6) throw DomainError("symbolic inverse limited to d <= 6");
  const auto& m = g.components();
  Expr det = determinant(m, d);
  if (det.is_zero()) throw DomainError("metric determinant is identically zero");
  Expr inv_det = simplify(pow(det, -1));
  std::vector<Expr> inv(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      // inverse_ij = (-1)^{i+j} minor_ji / det; symmetric g gives minor_ji = minor_ij.
      std::vector<Expr> sub;
      sub.reserve((d - 1) * (d - 1));
      for (std::size_t r = 0; r < d; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0; c < d; ++c)
          if (c != i) sub.push_back(m[r * d + c]);
      }
      Expr cof = determinant(sub, d - 1);
      if ((i + j) % 2) cof = -cof;
      inv[i * d + j] = inv[j * d + i] = simplify(cof * inv_det);
    }
  }
  return inv;
}

std::vector<Expr> lie_derivative_metric(const Metric& g, const VectorField& x) {
  const std::size_t d = g.dim();
  const Chart& ch = g.chart();
  std::vector<std::vector<Expr>> dx(d, std::vector<Expr>(d));
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t a = 0; a < d; ++a) dx[a][c] = ch.partial(x[c], a);
  std::vector<Expr> out(d * d);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      Expr s;
      for (std::size_t c = 0; c < d; ++c) {
        s += x[c] * ch.partial(g(a, b), c);
        s += g(c, b) * dx[a][c] + g(a, c) * dx[b][c];
      }
      out[a * d + b] = out[b * d + a] = simplify(s);
    }
  }
  return out;
}

Expr apply(const Chart& chart, const VectorField& x, const Expr& f) {
  Expr s;
  for (std::size_t a = 0; a < chart.dim(); ++a)
    if (!(x[a].is_zero() && x[a].kind() == Kind::Rational)) s += x[a] * chart.partial(f, a);
  return simplify(s);
}

VectorField bracket(const Chart& chart, const VectorField& x, const VectorField& y) {
  VectorField out(chart.dim());
  for (std::size_t a = 0; a < chart.dim(); ++a) out[a] = simplify(apply(chart, x, y[a]) - apply(chart, y, x[a]));
  return out;
}

}  // namespace nkgeo
