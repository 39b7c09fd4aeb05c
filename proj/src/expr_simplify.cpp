#include <cmath>
#include <map>

#include "expr_node.hpp"
#include "nkgeo/error.hpp"

namespace nkgeo {
namespace {

Expr mark(Expr e) {
  e.id()->normal.store(true, std::memory_order_relaxed);
  return e;
}

Expr exact_one() {
  static const Expr one(1);
  return one;
}

struct Split {
  Number coef;
  Expr rest;
};

Split split_coefficient(const Expr& t) {
  if (t.is_number()) return {t.number_value(), exact_one()};
  if (t.kind() == Kind::Product && t.arg(0).is_number()) {
    auto a = t.args();
    if (a.size() == 2) return {a[0].number_value(), a[1]};
    return {a[0].number_value(), mark(Expr::product(std::vector<Expr>(a.begin() + 1, a.end())))};
  }
  return {Number(1), t};
}

bool is_exact_one(const Number& n) { return n.exact() && n.is_one(); }

Expr with_coefficient(const Number& c, const Expr& rest) {
  if (c.is_zero()) return Expr();
  if (rest.kind() == Kind::Rational && rest.is_one()) return Expr::number(c);
  if (is_exact_one(c)) return rest;
  std::vector<Expr> factors{Expr::number(c)};
  if (rest.kind() == Kind::Product) {
    factors.insert(factors.end(), rest.args().begin(), rest.args().end());
  } else {
    factors.push_back(rest);
  }
  return mark(Expr::product(std::move(factors)));
}

bool negative_leading(const Expr& a) {
  switch (a.kind()) {
    case Kind::Rational:
    case Kind::Decimal:
      return a.number_value().is_negative();
    case Kind::Product:
      return a.arg(0).is_number() && a.arg(0).number_value().is_negative();
    case Kind::Sum:
      return negative_leading(a.arg(0));
    default:
      return false;
  }
}

std::optional<double> real_function_value(Func f, double x) {
  double r = 0.0;
  switch (f) {
    case Func::Sin: r = std::sin(x); break;
    case Func::Cos: r = std::cos(x); break;
    case Func::Sinh: r = std::sinh(x); break;
    case Func::Cosh: r = std::cosh(x); break;
    case Func::Tanh: r = std::tanh(x); break;
    case Func::Exp: r = std::exp(x); break;
    case Func::Ln:
      if (x <= 0.0) return std::nullopt;
      r = std::log(x);
      break;
  }
  if (!std::isfinite(r)) return std::nullopt;
  return r;
}

}  // namespace

bool is_normal(const Expr& e) noexcept {
  return e.kind() <= Kind::Variable || e.id()->normal.load(std::memory_order_relaxed);
}

Expr nf_sum(std::vector<Expr> terms) {
  std::map<Expr, Number, ExprLess> acc;
  Number constant(0);
  auto add = [&](auto&& self, const Expr& t) -> void {
    if (t.kind() == Kind::Sum) {
      for (const Expr& a : t.args()) self(self, a);
      return;
    }
    Split s = split_coefficient(t);
    if (s.rest.kind() == Kind::Rational && s.rest.is_one()) {
      constant = constant + s.coef;
      return;
    }
    auto [it, inserted] = acc.try_emplace(s.rest, s.coef);
    if (!inserted) it->second = it->second + s.coef;
  };
  for (const Expr& t : terms) add(add, t);

  std::vector<Expr> out;
  out.reserve(acc.size() + 1);
  if (!constant.is_zero()) out.push_back(Expr::number(constant));
  for (const auto& [rest, c] : acc)
    if (!c.is_zero()) out.push_back(with_coefficient(c, rest));
  if (out.empty()) return Expr();
  if (out.size() == 1) return out.front();
  return mark(Expr::sum(std::move(out)));
}

Expr nf_product(std::vector<Expr> factors) {
  Number coef(1);
  std::map<Expr, Number, ExprLess> powers;
  std::vector<Expr> exp_args;
  std::int64_t i_count = 0;

  auto take = [&](auto&& self, const Expr& f) -> void {
    switch (f.kind()) {
      case Kind::Product:
        for (const Expr& a : f.args()) self(self, a);
        return;
      case Kind::Rational:
      case Kind::Decimal:
        coef = coef * f.number_value();
        return;
      case Kind::ImagUnit:
        ++i_count;
        return;
      case Kind::Function:
        if (f.func() == Func::Exp) {
          exp_args.push_back(f.arg(0));
          return;
        }
        break;
      case Kind::Power:
        if (f.arg(1).is_number()) {
          Number n = f.arg(1).number_value();
          if (f.arg(0).kind() == Kind::ImagUnit && n.exact() && n.rational().is_integer()) {
            i_count += n.rational().num() % 4;
            return;
          }
          auto [it, inserted] = powers.try_emplace(f.arg(0), n);
          if (!inserted) it->second = it->second + n;
          return;
        }
        break;
      default:
        break;
    }
    auto [it, inserted] = powers.try_emplace(f, Number(1));
    if (!inserted) it->second = it->second + Number(1);
  };
  for (const Expr& f : factors) take(take, f);

  for (int round = 0; round < 4 && !exp_args.empty(); ++round) {
    std::vector<Expr> args = std::move(exp_args);
    exp_args.clear();
    Expr ex = nf_function(Func::Exp, nf_sum(std::move(args)));
    if (ex.kind() == Kind::Function && ex.func() == Func::Exp) {
      auto [it, inserted] = powers.try_emplace(ex, Number(1));
      if (!inserted) it->second = it->second + Number(1);
    } else {
      take(take, ex);
    }
  }
  for (const Expr& a : exp_args) {
    Expr ex = mark(Expr::function(Func::Exp, a));
    auto [it, inserted] = powers.try_emplace(ex, Number(1));
    if (!inserted) it->second = it->second + Number(1);
  }

  switch (((i_count % 4) + 4) % 4) {
    case 1:
      powers[Expr::imag()] = Number(1);
      break;
    case 2:
      coef = -coef;
      break;
    case 3:
      coef = -coef;
      powers[Expr::imag()] = Number(1);
      break;
    default:
      break;
  }

  std::vector<Expr> out;
  out.reserve(powers.size() + 1);
  for (const auto& [base, n] : powers) {
    if (n.is_zero()) continue;
    if (base.kind() == Kind::Rational && n.exact() && n.rational().is_integer()) {
      if (auto r = Rational::pow(base.rational_value(), n.rational().num())) {
        coef = coef * Number(*r);
        continue;
      }
    }
    if (base.kind() == Kind::Decimal) {
      bool integer = n.exact() && n.rational().is_integer();
      double r = std::pow(base.decimal_value(), n.value());
      if (std::isfinite(r) && (integer || base.decimal_value() >= 0.0)) {
        coef = coef * Number(r);
        continue;
      }
    }
    if (is_exact_one(n)) {
      out.push_back(base);
    } else {
      out.push_back(mark(Expr::power(base, Expr::number(n))));
    }
  }
  if (coef.is_zero()) return Expr();
  if (out.empty()) return Expr::number(coef);
  if (is_exact_one(coef)) return out.size() == 1 ? out.front() : mark(Expr::product(std::move(out)));
  if (out.size() == 1 && out.front().kind() == Kind::Sum) {
    std::vector<Expr> terms;
    terms.reserve(out.front().args().size());
    for (const Expr& t : out.front().args()) {
      Split s = split_coefficient(t);
      terms.push_back(with_coefficient(coef * s.coef, s.rest));
    }
    return nf_sum(std::move(terms));
  }
  out.insert(out.begin(), Expr::number(coef));
  return mark(Expr::product(std::move(out)));
}

Expr nf_power(const Expr& b, const Expr& e) {
  if (!e.is_number()) {
    if (b.kind() == Kind::Rational && b.is_one()) return exact_one();
    return nf_function(Func::Exp, nf_product({e, nf_function(Func::Ln, b)}));
  }
  Number n = e.number_value();
  if (n.is_zero()) return exact_one();
  if (is_exact_one(n)) return b;
  bool integer = n.exact() && n.rational().is_integer();
  std::int64_t k = integer ? n.rational().num() : 0;
  switch (b.kind()) {
    case Kind::Rational:
      if (integer) {
        if (auto r = Rational::pow(b.rational_value(), k)) return Expr(*r);
      } else if (b.is_one()) {
        return exact_one();
      } else if (b.is_zero() && !n.is_negative()) {
        return Expr();
      }
      break;
    case Kind::Decimal: {
      double r = std::pow(b.decimal_value(), n.value());
      if (std::isfinite(r) && (integer || b.decimal_value() >= 0.0)) return Expr::decimal(r);
      break;
    }
    case Kind::ImagUnit:
      if (integer) return nf_product({mark(Expr::power(b, e))});
      break;
    case Kind::Power:
      if (integer && b.arg(1).is_number())
        return nf_power(b.arg(0), Expr::number(b.arg(1).number_value() * n));
      break;
    case Kind::Product:
      if (integer) {
        std::vector<Expr> factors;
        factors.reserve(b.args().size());
        for (const Expr& f : b.args()) factors.push_back(nf_power(f, e));
        return nf_product(std::move(factors));
      }
      break;
    case Kind::Function:
      if (integer && b.func() == Func::Exp) return nf_function(Func::Exp, nf_product({e, b.arg(0)}));
      break;
    case Kind::Sum:
      if (integer) {
        Split lead = split_coefficient(b.arg(0));
        if (lead.coef.exact() && !lead.coef.is_one() && !lead.coef.is_zero()) {
          Rational inv = *lead.coef.rational().inverse();
          std::vector<Expr> terms;
          terms.reserve(b.args().size());
          for (const Expr& t : b.args()) {
            Split s = split_coefficient(t);
            terms.push_back(with_coefficient(s.coef * Number(inv), s.rest));
          }
          Expr scaled = nf_sum(std::move(terms));
          auto ck = Rational::pow(lead.coef.rational(), k);
          Expr c = ck ? Expr(*ck) : Expr::decimal(std::pow(lead.coef.value(), double(k)));
          return nf_product({c, nf_power(scaled, e)});
        }
      }
      break;
    default:
      break;
  }
  return mark(Expr::power(b, e));
}

Expr nf_function(Func f, const Expr& a) {
  if (a.kind() == Kind::Rational) {
    if (a.is_zero()) {
      switch (f) {
        case Func::Sin:
        case Func::Sinh:
        case Func::Tanh:
          return Expr();
        case Func::Cos:
        case Func::Cosh:
        case Func::Exp:
          return exact_one();
        case Func::Ln:
          break;
      }
    } else if (f == Func::Ln && a.is_one()) {
      return Expr();
    }
  }
  if (a.kind() == Kind::Decimal) {
    if (auto r = real_function_value(f, a.decimal_value())) return Expr::decimal(*r);
  }
  if (f == Func::Exp && a.kind() == Kind::Function && a.func() == Func::Ln) return a.arg(0);
  if (f != Func::Exp && f != Func::Ln && negative_leading(a)) {
    Expr flipped = mark(Expr::function(f, nf_product({Expr(-1), a})));
    if (f == Func::Cos || f == Func::Cosh) return flipped;
    return nf_product({Expr(-1), flipped});
  }
  return mark(Expr::function(f, a));
}

Expr simplify(const Expr& e) {
  if (is_normal(e)) return e;
  std::unordered_map<const Node*, Expr> memo;
  auto go = [&](auto&& self, const Expr& x) -> Expr {
    if (is_normal(x)) return x;
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    std::vector<Expr> args;
    args.reserve(x.args().size());
    for (const Expr& a : x.args()) args.push_back(self(self, a));
    Expr r;
    switch (x.kind()) {
      case Kind::Sum: r = nf_sum(std::move(args)); break;
      case Kind::Product: r = nf_product(std::move(args)); break;
      case Kind::Power: r = nf_power(args[0], args[1]); break;
      case Kind::Negate: r = nf_product({Expr(-1), args[0]}); break;
      case Kind::Quotient: r = nf_product({args[0], nf_power(args[1], Expr(-1))}); break;
      case Kind::Function: r = nf_function(x.func(), args[0]); break;
      default: r = x; break;
    }
    memo.emplace(x.id(), r);
    return r;
  };
  return go(go, e);
}

// ------------------------------------------------------------------ expand

namespace {

class Expander {
public:
  explicit Expander(std::size_t max_terms) : max_terms_(max_terms) {}

  Expr run(const Expr& x) {
    if (x.kind() <= Kind::Variable) return x;
    if (auto it = memo_.find(x.id()); it != memo_.end()) return it->second.second;
    Expr r = x;
    switch (x.kind()) {
      case Kind::Sum: {
        std::vector<Expr> terms;
        for (const Expr& t : x.args()) terms.push_back(run(t));
        r = nf_sum(std::move(terms));
        break;
      }
      case Kind::Product: {
        std::vector<Expr> acc{exact_one()};
        for (const Expr& f : x.args()) acc = multiply(acc, terms_of(run(f)));
        r = nf_sum(std::move(acc));
        break;
      }
      case Kind::Power: {
        Expr base = run(x.arg(0));
        const Expr& n = x.arg(1);
        bool positive_integer = n.kind() == Kind::Rational && n.rational_value().is_integer() &&
                                n.rational_value().num() > 0;
        if (positive_integer && base.kind() == Kind::Sum) {
          std::vector<Expr> acc{exact_one()};
          std::vector<Expr> b = terms_of(base);
          for (std::int64_t k = 0; k < n.rational_value().num(); ++k) acc = multiply(acc, b);
          r = nf_sum(std::move(acc));
        } else {
          r = nf_power(base, n);
          if (r.kind() == Kind::Product || r.kind() == Kind::Sum) {
            if (r.id() != x.id()) r = run(r);
          }
        }
        break;
      }
      case Kind::Function:
        r = nf_function(x.func(), run(x.arg(0)));
        break;
      default:
        r = run(simplify(x));
        break;
    }
    if (r.kind() == Kind::Sum && r.args().size() > max_terms_)
      throw ExpansionLimit("expansion exceeded " + std::to_string(max_terms_) + " terms");
    memo_.emplace(x.id(), std::make_pair(x, r));
    return r;
  }

private:
  static std::vector<Expr> terms_of(const Expr& e) {
    if (e.kind() == Kind::Sum) return {e.args().begin(), e.args().end()};
    return {e};
  }

  std::vector<Expr> multiply(const std::vector<Expr>& a, const std::vector<Expr>& b) {
    if (a.size() * b.size() > max_terms_)
      throw ExpansionLimit("expansion exceeded " + std::to_string(max_terms_) + " terms");
    std::vector<Expr> out;
    out.reserve(a.size() * b.size());
    for (const Expr& x : a)
      for (const Expr& y : b) out.push_back(nf_product({x, y}));
    return terms_of(nf_sum(std::move(out)));
  }

  std::size_t max_terms_;
  // Keys are kept alive alongside the results so node addresses cannot be recycled.
  std::unordered_map<const Node*, std::pair<Expr, Expr>> memo_;
};

Expr half() {
  static const Expr h(Rational(1, 2));
  return h;
}

}  // namespace

Expr expand(const Expr& e, std::size_t max_terms) { return Expander(max_terms).run(simplify(e)); }

Expr rewrite_exponential(const Expr& e) {
  std::unordered_map<const Node*, std::pair<Expr, Expr>> memo;
  auto go = [&](auto&& self, const Expr& x) -> Expr {
    if (x.kind() <= Kind::Variable) return x;
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second.second;
    std::vector<Expr> args;
    args.reserve(x.args().size());
    for (const Expr& a : x.args()) args.push_back(self(self, a));
    Expr r;
    auto ex = [](const Expr& a) { return nf_function(Func::Exp, a); };
    auto neg = [](const Expr& a) { return nf_product({Expr(-1), a}); };
    switch (x.kind()) {
      case Kind::Sum: r = nf_sum(std::move(args)); break;
      case Kind::Product: r = nf_product(std::move(args)); break;
      case Kind::Power: r = nf_power(args[0], args[1]); break;
      case Kind::Function: {
        const Expr& a = args[0];
        switch (x.func()) {
          case Func::Sinh:
            r = nf_product({half(), nf_sum({ex(a), neg(ex(neg(a)))})});
            break;
          case Func::Cosh:
            r = nf_product({half(), nf_sum({ex(a), ex(neg(a))})});
            break;
          case Func::Tanh: {
            Expr e2 = ex(nf_product({Expr(2), a}));
            r = nf_product({nf_sum({e2, Expr(-1)}), nf_power(nf_sum({e2, exact_one()}), Expr(-1))});
            break;
          }
          case Func::Sin: {
            Expr ia = nf_product({Expr::imag(), a});
            r = nf_product({Expr(Rational(-1, 2)), Expr::imag(), nf_sum({ex(ia), neg(ex(neg(ia)))})});
            break;
          }
          case Func::Cos: {
            Expr ia = nf_product({Expr::imag(), a});
            r = nf_product({half(), nf_sum({ex(ia), ex(neg(ia))})});
            break;
          }
          default:
            r = nf_function(x.func(), a);
            break;
        }
        break;
      }
      default:
        r = self(self, simplify(x));
        break;
    }
    memo.emplace(x.id(), std::make_pair(x, r));
    return r;
  };
  return go(go, simplify(e));
}

namespace {

// Multiplies every term by the sum denominators it carries, then expands again.
std::optional<Expr> clear_denominators(const Expr& x, std::size_t max_terms) {
  std::map<Expr, std::int64_t, ExprLess> dens;
  std::vector<Expr> terms =
      x.kind() == Kind::Sum ? std::vector<Expr>(x.args().begin(), x.args().end()) : std::vector<Expr>{x};
  for (const Expr& t : terms) {
    auto factors = t.kind() == Kind::Product ? t.args() : std::span<const Expr>(&t, 1);
    for (const Expr& f : factors) {
      if (f.kind() != Kind::Power || f.arg(0).kind() != Kind::Sum) continue;
      const Expr& n = f.arg(1);
      if (n.kind() != Kind::Rational || !n.rational_value().is_integer() || !n.rational_value().is_negative())
        continue;
      std::int64_t k = -n.rational_value().num();
      auto [it, inserted] = dens.try_emplace(f.arg(0), k);
      if (!inserted) it->second = std::max(it->second, k);
    }
  }
  if (dens.empty()) return std::nullopt;
  std::vector<Expr> multiplier;
  for (const auto& [base, k] : dens) multiplier.push_back(nf_power(base, Expr(k)));
  std::vector<Expr> scaled;
  scaled.reserve(terms.size());
  for (const Expr& t : terms) {
    std::vector<Expr> fs = multiplier;
    fs.push_back(t);
    scaled.push_back(nf_product(std::move(fs)));
  }
  return expand(nf_sum(std::move(scaled)), max_terms);
}

}  // namespace

bool is_symbolically_zero(const Expr& e) {
  constexpr std::size_t kBudget = 20000;
  try {
    Expr s = simplify(e);
    if (s.is_zero()) return true;
    for (int mode = 0; mode < 2; ++mode) {
      Expr x = expand(mode == 0 ? s : rewrite_exponential(s), kBudget);
      if (x.is_zero()) return true;
      for (int round = 0; round < 3; ++round) {
        auto cleared = clear_denominators(x, kBudget);
        if (!cleared) break;
        x = *cleared;
        if (x.is_zero()) return true;
      }
    }
  } catch (const ExpansionLimit&) {
  }
  return false;
}

}  // namespace nkgeo
