#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "nkgeo/chart.hpp"
#include "nkgeo/expr.hpp"

namespace nkgeo {

enum class Slot : std::uint8_t { Up, Down };

/// Dense coordinate components with a variance signature. Components are stored
/// row-major: index (i0, i1, ..., ik) lives at ((i0*d + i1)*d + ...)*d + ik.
class Tensor {
public:
  Tensor(std::size_t dim, std::vector<Slot> slots);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return slots_.size(); }
  const std::vector<Slot>& slots() const noexcept { return slots_; }
  std::size_t size() const noexcept { return comps_.size(); }

  Expr& operator[](std::size_t flat) { return comps_[flat]; }
  const Expr& operator[](std::size_t flat) const { return comps_[flat]; }
  Expr& at(std::initializer_list<std::size_t> idx) { return comps_[flat(idx)]; }
  const Expr& at(std::initializer_list<std::size_t> idx) const { return comps_[flat(idx)]; }
  std::size_t flat(std::initializer_list<std::size_t> idx) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;

  const std::vector<Expr>& components() const noexcept { return comps_; }
  Tensor simplified() const;

private:
  std::size_t dim_;
  std::vector<Slot> slots_;
  std::vector<Expr> comps_;
};

/// Vector field components in the chart's coordinate basis.
using VectorField = std::vector<Expr>;

/// Symmetric metric g_ab on a chart.
class Metric {
public:
  /// `components` is d×d row-major; throws DomainError unless symmetric after simplify.
  Metric(Chart chart, std::vector<Expr> components);

  const Chart& chart() const noexcept { return chart_; }
  std::size_t dim() const noexcept { return chart_.dim(); }
  const Expr& operator()(std::size_t a, std::size_t b) const { return g_[a * dim() + b]; }
  const std::vector<Expr>& components() const noexcept { return g_; }
  Tensor as_tensor() const;

private:
  Chart chart_;
  std::vector<Expr> g_;
};

/// Symbolic determinant by cofactor expansion (d ≤ 6).
Expr determinant(const std::vector<Expr>& m, std::size_t d);

/// Symbolic inverse g^ab via adjugate over determinant. Requires d ≤ 6; throws DomainError
/// if the determinant simplifies to 0.
std::vector<Expr> inverse_metric(const Metric& g);

/// Lie derivative of a metric: (L_X g)_ab = X^c ∂_c g_ab + g_cb ∂_a X^c + g_ac ∂_b X^c.
std::vector<Expr> lie_derivative_metric(const Metric& g, const VectorField& x);

/// Lie bracket [X, Y]^a = X^b ∂_b Y^a − Y^b ∂_b X^a.
VectorField bracket(const Chart& chart, const VectorField& x, const VectorField& y);

/// X(f) = X^a ∂_a f.
Expr apply(const Chart& chart, const VectorField& x, const Expr& f);

}  // namespace nkgeo
