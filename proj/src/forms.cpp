#include "nkgeo/forms.hpp"

#include <algorithm>
#include <bit>

#include "nkgeo/error.hpp"

namespace nkgeo {
namespace {

// Number of set bits of `mask` strictly below bit i.
int bits_below(std::uint32_t mask, std::size_t i) { return std::popcount(mask & ((1u << i) - 1u)); }

bool literal_zero(const Expr& e) { return e.kind() == Kind::Rational && e.is_zero(); }

}  // namespace

Form Form::one_form(const std::vector<Expr>& components) {
  Form f(components.size(), 1);
  for (std::size_t i = 0; i < components.size(); ++i)
    if (!literal_zero(components[i])) f.terms_[1u << i] = components[i];
  return f;
}

Form Form::two_form(const std::vector<Expr>& components, std::size_t dim) {
  if (components.size() != dim * dim) throw DomainError("two_form needs d*d components");
  Form f(dim, 2);
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = a + 1; b < dim; ++b)
      if (!literal_zero(components[a * dim + b])) f.terms_[(1u << a) | (1u << b)] = components[a * dim + b];
  return f;
}

Expr Form::coefficient(std::uint32_t mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? Expr() : it->second;
}

void Form::add(const std::vector<std::size_t>& indices, const Expr& c) {
  if (static_cast<int>(indices.size()) != degree_) throw DomainError("form degree mismatch");
  std::uint32_t mask = 0;
  int sign = 1;
  for (std::size_t i : indices) {
    if (i >= dim_) throw DomainError("form index out of range");
    if (mask & (1u << i)) return;
    // Moving dx^i past the higher-indexed factors already present.
    if (std::popcount(mask >> i) % 2) sign = -sign;
    mask |= 1u << i;
  }
  Expr term = sign > 0 ? c : -c;
  auto [it, inserted] = terms_.try_emplace(mask, term);
  if (!inserted) it->second = it->second + term;
}

Expr Form::component(std::size_t a, std::size_t b) const {
  if (degree_ != 2) throw DomainError("component(a, b) needs a 2-form");
  if (a == b) return Expr();
  Expr c = coefficient((1u << a) | (1u << b));
  return a < b ? c : simplify(-c);
}

Form Form::simplified() const {
  Form out(dim_, degree_);
  for (const auto& [mask, c] : terms_) {
    Expr s = simplify(c);
    if (!literal_zero(s)) out.terms_[mask] = s;
  }
  return out;
}

bool Form::empty_after_simplify() const { return simplified().terms_.empty(); }

Form operator+(const Form& a, const Form& b) {
  if (a.dim_ != b.dim_ || a.degree_ != b.degree_) throw DomainError("adding incompatible forms");
  Form out = a;
  for (const auto& [mask, c] : b.terms_) {
    auto [it, inserted] = out.terms_.try_emplace(mask, c);
    if (!inserted) it->second = it->second + c;
  }
  return out;
}

Form operator-(const Form& a, const Form& b) { return a + Expr(-1) * b; }

Form operator*(const Expr& f, const Form& a) {
  Form out(a.dim_, a.degree_);
  for (const auto& [mask, c] : a.terms_) out.terms_[mask] = f * c;
  return out;
}

Form wedge(const Form& a, const Form& b) {
  if (a.dim() != b.dim()) throw DomainError("wedge of forms on different charts");
  Form out(a.dim(), a.degree() + b.degree());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      // Sign of sorting the concatenated index list: count inversions between the blocks.
      int inversions = 0;
      for (std::uint32_t rest = mb; rest; rest &= rest - 1) {
        std::size_t j = static_cast<std::size_t>(std::countr_zero(rest));
        inversions += std::popcount(ma >> j >> 1);
      }
      std::vector<std::size_t> idx;
      for (std::uint32_t m = ma | mb; m; m &= m - 1) idx.push_back(static_cast<std::size_t>(std::countr_zero(m)));
      Expr c = ca * cb;
      out.add(idx, inversions % 2 ? -c : c);
    }
  }
  return out;
}

Form exterior_derivative(const Chart& chart, const Form& a) {
  if (chart.dim() != a.dim()) throw DomainError("form and chart dimension differ");
  Form out(a.dim(), a.degree() + 1);
  for (const auto& [mask, c] : a.terms()) {
    for (std::size_t i = 0; i < a.dim(); ++i) {
      if (mask & (1u << i)) continue;
      Expr dc = chart.partial(c, i);
      if (literal_zero(dc)) continue;
      std::vector<std::size_t> idx;
      for (std::uint32_t m = mask | (1u << i); m; m &= m - 1)
        idx.push_back(static_cast<std::size_t>(std::countr_zero(m)));
      // dx^i ∧ dx^{mask}: moving dx^i into place passes the indices below it.
      out.add(idx, bits_below(mask, i) % 2 ? -dc : dc);
    }
  }
  return out;
}

std::vector<Expr> coefficients(const Form& a) {
  std::vector<Expr> out;
  out.reserve(a.terms().size());
  for (const auto& [mask, c] : a.terms()) out.push_back(c);
  return out;
}

}  // namespace nkgeo
