#include "expr_node.hpp"

namespace nkgeo {

Expr diff(const Expr& e, const std::string& var) {
  Expr s = simplify(e);
  std::unordered_map<const Node*, Expr> memo;
  auto go = [&](auto&& self, const Expr& x) -> Expr {
    if (!x.depends_on(var)) return Expr();
    if (x.kind() == Kind::Variable) return Expr(1);
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    Expr r;
    switch (x.kind()) {
      case Kind::Sum: {
        std::vector<Expr> terms;
        terms.reserve(x.args().size());
        for (const Expr& t : x.args()) terms.push_back(self(self, t));
        r = nf_sum(std::move(terms));
        break;
      }
      case Kind::Product: {
        auto f = x.args();
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < f.size(); ++i) {
          Expr d = self(self, f[i]);
          if (d.is_zero()) continue;
          std::vector<Expr> factors(f.begin(), f.end());
          factors[i] = d;
          terms.push_back(nf_product(std::move(factors)));
        }
        r = nf_sum(std::move(terms));
        break;
      }
      case Kind::Power: {
        const Expr& b = x.arg(0);
        const Expr& n = x.arg(1);
        // Normal form keeps only numeric exponents.
        Number m = n.number_value();
        r = nf_product({n, nf_power(b, Expr::number(m + Number(-1))), self(self, b)});
        break;
      }
      case Kind::Function: {
        const Expr& a = x.arg(0);
        Expr da = self(self, a);
        Expr outer;
        switch (x.func()) {
          case Func::Sin: outer = nf_function(Func::Cos, a); break;
          case Func::Cos: outer = nf_product({Expr(-1), nf_function(Func::Sin, a)}); break;
          case Func::Sinh: outer = nf_function(Func::Cosh, a); break;
          case Func::Cosh: outer = nf_function(Func::Sinh, a); break;
          case Func::Tanh:
            outer = nf_sum({Expr(1), nf_product({Expr(-1), nf_power(x, Expr(2))})});
            break;
          case Func::Exp: outer = x; break;
          case Func::Ln: outer = nf_power(a, Expr(-1)); break;
        }
        r = nf_product({outer, da});
        break;
      }
      default:
        break;
    }
    memo.emplace(x.id(), r);
    return r;
  };
  return go(go, s);
}

}  // namespace nkgeo
