#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "nkgeo/chart.hpp"
#include "nkgeo/expr.hpp"

namespace nkgeo {

/// Differential form on a chart of dimension ≤ 32, stored as coefficients of
/// dx^{i1}∧...∧dx^{ik} (i1 < ... < ik) keyed by the bitmask of indices.
class Form {
public:
  Form(std::size_t dim, int degree) : dim_(dim), degree_(degree) {}

  static Form one_form(const std::vector<Expr>& components);
  /// From an antisymmetric d×d component matrix: α = Σ_{a<b} α_ab dx^a∧dx^b.
  static Form two_form(const std::vector<Expr>& components, std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  int degree() const noexcept { return degree_; }
  const std::map<std::uint32_t, Expr>& terms() const noexcept { return terms_; }

  Expr coefficient(std::uint32_t mask) const;
  /// Adds c to the coefficient of the basis element with the given (possibly unsorted)
  /// indices, applying the permutation sign.
  void add(const std::vector<std::size_t>& indices, const Expr& c);
  /// Antisymmetric component α_ab (2-forms only).
  Expr component(std::size_t a, std::size_t b) const;

  Form simplified() const;
  bool empty_after_simplify() const;

  friend Form operator+(const Form& a, const Form& b);
  friend Form operator-(const Form& a, const Form& b);
  friend Form operator*(const Expr& f, const Form& a);

private:
  std::size_t dim_;
  int degree_;
  std::map<std::uint32_t, Expr> terms_;
};

Form wedge(const Form& a, const Form& b);
Form exterior_derivative(const Chart& chart, const Form& a);

/// All coefficients of the form, for zero testing.
std::vector<Expr> coefficients(const Form& a);

}  // namespace nkgeo
