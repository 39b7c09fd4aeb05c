#include <cmath>
#include <cstdio>
#include <cstring>

#include "expr_node.hpp"
#include "nkgeo/error.hpp"

namespace nkgeo {
namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t hash_double(double x) {
  if (x == 0.0) x = 0.0;
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  return bits;
}

std::shared_ptr<Node> fresh(Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

void finalize(Node& n) {
  std::uint64_t h = mix(kFnvOffset, static_cast<std::uint64_t>(n.kind));
  std::uint64_t mask = 0;
  switch (n.kind) {
    case Kind::Rational:
      h = mix(mix(h, static_cast<std::uint64_t>(n.q.num())), static_cast<std::uint64_t>(n.q.den()));
      break;
    case Kind::Decimal:
      h = mix(h, hash_double(n.x));
      break;
    case Kind::Variable: {
      std::uint64_t s = hash_string(n.name);
      h = mix(h, s);
      mask = std::uint64_t{1} << (s % 64);
      break;
    }
    case Kind::Function:
      h = mix(h, static_cast<std::uint64_t>(n.func));
      break;
    default:
      break;
  }
  for (const Expr& a : n.args) {
    h = mix(h, a.hash());
    mask |= a.id()->mask;
  }
  n.hash = static_cast<std::size_t>(h);
  n.mask = mask;
}

const std::shared_ptr<const Node>& zero_node() {
  static const std::shared_ptr<const Node> z = [] {
    auto n = fresh(Kind::Rational);
    n->q = Rational(0);
    finalize(*n);
    return std::shared_ptr<const Node>(n);
  }();
  return z;
}

}  // namespace

std::uint64_t variable_mask(const std::string& name) {
  return std::uint64_t{1} << (hash_string(name) % 64);
}

const char* func_name(Func f) noexcept {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Tanh: return "tanh";
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
  }
  return "?";
}

Expr::Expr() : node_(zero_node()) {}
Expr::Expr(int k) : Expr(Rational(k)) {}
Expr::Expr(std::int64_t k) : Expr(Rational(k)) {}
Expr::Expr(Rational q) {
  if (q.is_zero()) {
    node_ = zero_node();
    return;
  }
  auto n = fresh(Kind::Rational);
  n->q = q;
  finalize(*n);
  node_ = std::move(n);
}

Expr Expr::number(const Number& n) {
  return n.exact() ? Expr(n.rational()) : decimal(n.value());
}

Expr Expr::decimal(double x) {
  auto n = fresh(Kind::Decimal);
  n->x = x;
  finalize(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::imag() {
  static const Expr e = [] {
    auto n = fresh(Kind::ImagUnit);
    finalize(*n);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
  }();
  return e;
}

Expr Expr::pi() {
  static const Expr e = [] {
    auto n = fresh(Kind::Pi);
    finalize(*n);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
  }();
  return e;
}

Expr Expr::var(std::string name) {
  auto n = fresh(Kind::Variable);
  n->name = std::move(name);
  finalize(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return Expr();
  if (terms.size() == 1) return terms.front();
  auto n = fresh(Kind::Sum);
  n->args = std::move(terms);
  finalize(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) return Expr(1);
  if (factors.size() == 1) return factors.front();
  auto n = fresh(Kind::Product);
  n->args = std::move(factors);
  finalize(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::power(Expr base, Expr exponent) {
  auto n = fresh(Kind::Power);
  n->args = {std::move(base), std::move(exponent)};
  finalize(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::negate(Expr e) {
  auto n = fresh(Kind::Negate);
  n->args = {std::move(e)};
  finalize(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::quotient(Expr num, Expr den) {
  auto n = fresh(Kind::Quotient);
  n->args = {std::move(num), std::move(den)};
  finalize(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::function(Func f, Expr arg) {
  auto n = fresh(Kind::Function);
  n->func = f;
  n->args = {std::move(arg)};
  finalize(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Kind Expr::kind() const noexcept { return node_->kind; }
const Rational& Expr::rational_value() const noexcept { return node_->q; }
double Expr::decimal_value() const noexcept { return node_->x; }
const std::string& Expr::name() const noexcept { return node_->name; }
Func Expr::func() const noexcept { return node_->func; }
std::span<const Expr> Expr::args() const noexcept { return node_->args; }
std::size_t Expr::hash() const noexcept { return node_->hash; }

bool Expr::is_zero() const noexcept {
  return (kind() == Kind::Rational && node_->q.is_zero()) ||
         (kind() == Kind::Decimal && node_->x == 0.0);
}

bool Expr::is_one() const noexcept {
  return (kind() == Kind::Rational && node_->q.is_one()) ||
         (kind() == Kind::Decimal && node_->x == 1.0);
}

Number Expr::number_value() const {
  if (kind() == Kind::Rational) return Number(node_->q);
  if (kind() == Kind::Decimal) return Number(node_->x);
  throw DomainError("number_value on non-numeric expression");
}

bool Expr::depends_on(const std::string& name) const {
  if ((node_->mask & variable_mask(name)) == 0) return false;
  if (kind() == Kind::Variable) return node_->name == name;
  for (const Expr& a : node_->args)
    if (a.depends_on(name)) return true;
  return false;
}

std::string Expr::str() const { return to_string(*this); }

bool operator==(const Expr& a, const Expr& b) noexcept {
  if (a.id() == b.id()) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) noexcept {
  if (a.id() == b.id()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::Rational:
      return compare(a.rational_value(), b.rational_value());
    case Kind::Decimal: {
      double x = a.decimal_value(), y = b.decimal_value();
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    case Kind::ImagUnit:
    case Kind::Pi:
      return 0;
    case Kind::Variable: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Function:
      if (a.func() != b.func()) return a.func() < b.func() ? -1 : 1;
      break;
    default:
      break;
  }
  auto x = a.args(), y = b.args();
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (int c = compare(x[i], y[i]); c != 0) return c;
  return 0;
}

// Arithmetic operators: light folding only.

namespace {

void append_flat(std::vector<Expr>& out, const Expr& e, Kind k) {
  if (e.kind() == k) {
    for (const Expr& a : e.args()) out.push_back(a);
  } else {
    out.push_back(e);
  }
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero() && a.kind() == Kind::Rational) return b;
  if (b.is_zero() && b.kind() == Kind::Rational) return a;
  if (a.is_number() && b.is_number()) return Expr::number(a.number_value() + b.number_value());
  std::vector<Expr> terms;
  append_flat(terms, a, Kind::Sum);
  append_flat(terms, b, Kind::Sum);
  return Expr::sum(std::move(terms));
}

Expr operator-(const Expr& a) {
  if (a.is_number()) return Expr::number(-a.number_value());
  if (a.kind() == Kind::Negate) return a.arg(0);
  return Expr::negate(a);
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  auto exact_zero = [](const Expr& e) { return e.kind() == Kind::Rational && e.is_zero(); };
  if (exact_zero(a) || exact_zero(b)) return Expr();
  if (a.kind() == Kind::Rational && a.is_one()) return b;
  if (b.kind() == Kind::Rational && b.is_one()) return a;
  if (a.is_number() && b.is_number()) return Expr::number(a.number_value() * b.number_value());
  std::vector<Expr> factors;
  append_flat(factors, a, Kind::Product);
  append_flat(factors, b, Kind::Product);
  return Expr::product(std::move(factors));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.kind() == Kind::Rational && b.is_one()) return a;
  if (a.kind() == Kind::Rational && a.is_zero() && !b.is_zero()) return Expr();
  if (a.kind() == Kind::Rational && b.kind() == Kind::Rational && !b.is_zero()) {
    if (auto inv = b.rational_value().inverse())
      if (auto r = Rational::mul(a.rational_value(), *inv)) return Expr(*r);
  }
  return Expr::quotient(a, b);
}

Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.kind() == Kind::Rational) {
    if (exponent.is_zero()) return Expr(1);
    if (exponent.is_one()) return base;
  }
  return Expr::power(base, exponent);
}

Expr pow(const Expr& base, std::int64_t k) { return pow(base, Expr(k)); }

Expr sin(const Expr& e) { return Expr::function(Func::Sin, e); }
Expr cos(const Expr& e) { return Expr::function(Func::Cos, e); }
Expr sinh(const Expr& e) { return Expr::function(Func::Sinh, e); }
Expr cosh(const Expr& e) { return Expr::function(Func::Cosh, e); }
Expr tanh(const Expr& e) { return Expr::function(Func::Tanh, e); }
Expr exp(const Expr& e) { return Expr::function(Func::Exp, e); }
Expr ln(const Expr& e) { return Expr::function(Func::Ln, e); }

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  std::vector<const Expr*> stack{&e};
  std::unordered_map<const Node*, bool> seen;
  while (!stack.empty()) {
    const Expr* cur = stack.back();
    stack.pop_back();
    if (!seen.emplace(cur->id(), true).second) continue;
    if (cur->kind() == Kind::Variable) out.insert(cur->name());
    for (const Expr& a : cur->args()) stack.push_back(&a);
  }
  return out;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& values) {
  std::uint64_t mask = 0;
  for (const auto& [name, _] : values) mask |= variable_mask(name);
  std::unordered_map<const Node*, Expr> memo;
  auto go = [&](auto&& self, const Expr& x) -> Expr {
    if ((x.id()->mask & mask) == 0) return x;
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    Expr result = x;
    if (x.kind() == Kind::Variable) {
      if (auto it = values.find(x.name()); it != values.end()) result = it->second;
    } else {
      std::vector<Expr> args;
      args.reserve(x.args().size());
      bool changed = false;
      for (const Expr& a : x.args()) {
        args.push_back(self(self, a));
        changed = changed || args.back().id() != a.id();
      }
      if (changed) {
        switch (x.kind()) {
          case Kind::Sum: result = Expr::sum(std::move(args)); break;
          case Kind::Product: result = Expr::product(std::move(args)); break;
          case Kind::Power: result = Expr::power(args[0], args[1]); break;
          case Kind::Negate: result = Expr::negate(args[0]); break;
          case Kind::Quotient: result = Expr::quotient(args[0], args[1]); break;
          case Kind::Function: result = Expr::function(x.func(), args[0]); break;
          default: break;
        }
      }
    }
    memo.emplace(x.id(), result);
    return result;
  };
  return go(go, e);
}

}  // namespace nkgeo
