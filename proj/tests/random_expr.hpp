#pragma once

// Random expression trees and an independent reference interpreter for property tests.

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "nkgeo/expr.hpp"
#include "nkgeo/rng.hpp"

namespace testing_support {

using nkgeo::Complex;
using nkgeo::Expr;
using nkgeo::Func;
using nkgeo::Kind;

/// `polytrig` restricts to sums, products, positive integer powers, negation, sin and cos.
inline Expr random_tree(nkgeo::Rng& rng, int depth, const std::vector<std::string>& vars,
                        bool polytrig = false) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng.next() % n); };
  if (depth <= 0 || pick(4) == 0) {
    switch (pick(10)) {
      case 0:
      case 1:
        return Expr(static_cast<std::int64_t>(pick(5)) + 1);
      case 2:
        return Expr::decimal(std::round(rng.uniform(-3, 3) * 100) / 100);
      default:
        return Expr::var(vars[pick(vars.size())]);
    }
  }
  auto sub = [&] { return random_tree(rng, depth - 1, vars, polytrig); };
  if (polytrig) {
    switch (pick(6)) {
      case 0: return Expr::sum({sub(), sub()});
      case 1: return Expr::product({sub(), sub()});
      case 2: return Expr::power(sub(), Expr(static_cast<std::int64_t>(pick(2)) + 2));
      case 3: return Expr::negate(sub());
      case 4: return Expr::function(Func::Sin, sub());
      default: return Expr::function(Func::Cos, sub());
    }
  }
  switch (pick(8)) {
    case 0:
      return Expr::sum({sub(), sub()});
    case 1:
      return Expr::sum({sub(), sub(), sub()});
    case 2:
      return Expr::product({sub(), sub()});
    case 3: {
      static const std::int64_t exps[][2] = {{2, 1}, {3, 1}, {-1, 1}, {-2, 1}, {1, 2}, {-1, 3}};
      const auto& q = exps[pick(6)];
      Expr e = q[1] == 1 ? Expr(q[0]) : Expr::quotient(Expr(q[0]), Expr(q[1]));
      return Expr::power(sub(), e);
    }
    case 4:
      return Expr::negate(sub());
    case 5:
      return Expr::quotient(sub(), sub());
    default: {
      static const Func fs[] = {Func::Sin, Func::Cos, Func::Sinh, Func::Cosh, Func::Tanh, Func::Exp, Func::Ln};
      return Expr::function(fs[pick(7)], sub());
    }
  }
}

/// Straightforward recursive interpreter, written without the library's evaluator.
/// Returns nullopt where the value is undefined (pole, log of zero, overflow).
inline std::optional<Complex> reference_eval(const Expr& e, const nkgeo::Point& p) {
  auto finite = [](Complex z) -> std::optional<Complex> {
    if (std::isfinite(z.real()) && std::isfinite(z.imag())) return z;
    return std::nullopt;
  };
  switch (e.kind()) {
    case Kind::Rational:
      return Complex(double(e.rational_value().num()) / double(e.rational_value().den()));
    case Kind::Decimal:
      return Complex(e.decimal_value());
    case Kind::ImagUnit:
      return Complex(0, 1);
    case Kind::Pi:
      return Complex(M_PI);
    case Kind::Variable:
      return p.at(e.name());
    case Kind::Sum: {
      Complex s = 0;
      for (const Expr& a : e.args()) {
        auto v = reference_eval(a, p);
        if (!v) return v;
        s += *v;
      }
      return finite(s);
    }
    case Kind::Product: {
      Complex s = 1;
      for (const Expr& a : e.args()) {
        auto v = reference_eval(a, p);
        if (!v) return v;
        s *= *v;
      }
      return finite(s);
    }
    case Kind::Negate: {
      auto v = reference_eval(e.arg(0), p);
      if (!v) return v;
      return -*v;
    }
    case Kind::Quotient: {
      auto a = reference_eval(e.arg(0), p);
      auto b = reference_eval(e.arg(1), p);
      if (!a || !b || *b == Complex(0)) return std::nullopt;
      return finite(*a / *b);
    }
    case Kind::Power: {
      auto b = reference_eval(e.arg(0), p);
      auto x = reference_eval(e.arg(1), p);
      if (!b || !x) return std::nullopt;
      if (*b == Complex(0)) {
        if (x->imag() == 0 && x->real() > 0) return Complex(0);
        if (*x == Complex(0)) return Complex(1);
        return std::nullopt;
      }
      if (x->imag() == 0 && x->real() == std::round(x->real())) {
        Complex r = 1;
        long k = std::lround(std::abs(x->real()));
        for (long j = 0; j < k; ++j) r *= *b;
        return finite(x->real() < 0 ? Complex(1) / r : r);
      }
      Complex base = b->imag() == 0 ? Complex(b->real(), 0.0) : *b;
      return finite(std::exp(*x * std::log(base)));
    }
    case Kind::Function: {
      auto a = reference_eval(e.arg(0), p);
      if (!a) return a;
      switch (e.func()) {
        case Func::Sin: return finite(std::sin(*a));
        case Func::Cos: return finite(std::cos(*a));
        case Func::Sinh: return finite(std::sinh(*a));
        case Func::Cosh: return finite(std::cosh(*a));
        case Func::Tanh: return finite(std::tanh(*a));
        case Func::Exp: return finite(std::exp(*a));
        case Func::Ln:
          if (*a == Complex(0)) return std::nullopt;
          return finite(std::log(a->imag() == 0 ? Complex(a->real(), 0.0) : *a));
      }
    }
  }
  return std::nullopt;
}

}  // namespace testing_support
