#include <algorithm>
#include <cmath>
#include <numbers>

#include "expr_node.hpp"
#include "nkgeo/error.hpp"

namespace nkgeo {
namespace {

bool is_real(Complex z) { return z.imag() == 0.0; }

// Branch cuts follow the principal value with arg in (-pi, pi]; a zero imaginary part
// counts as +0 whatever its sign bit, so results do not depend on how a real was produced.
Complex on_branch(Complex z) { return is_real(z) ? Complex(z.real(), 0.0) : z; }

[[noreturn]] void singular(const char* reason, const Expr& at) { throw SingularEvaluation(reason, to_string(at)); }

Complex int_power(Complex b, std::int64_t k, const Expr& at) {
  if (k < 0 && b == Complex(0.0)) singular("division by zero", at);
  bool invert = k < 0;
  std::uint64_t m = invert ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  Complex r(1.0), base = b;
  while (m) {
    if (m & 1) r *= base;
    m >>= 1;
    if (m) base *= base;
  }
  return invert ? Complex(1.0) / r : r;
}

Complex real_power(Complex b, double x, const Expr& at) {
  if (b == Complex(0.0)) {
    if (x > 0.0) return 0.0;
    singular("zero base with non-positive exponent", at);
  }
  if (is_real(b) && b.real() > 0.0) return std::pow(b.real(), x);
  return std::pow(on_branch(b), x);
}

Complex general_power(Complex b, Complex e, const Expr& at) {
  if (is_real(e)) return real_power(b, e.real(), at);
  if (b == Complex(0.0)) singular("zero base with complex exponent", at);
  return std::exp(e * std::log(on_branch(b)));
}

Complex apply_function(Func f, Complex z, const Expr& at) {
  bool real = is_real(z);
  double x = z.real();
  switch (f) {
    case Func::Sin: return real ? Complex(std::sin(x)) : std::sin(z);
    case Func::Cos: return real ? Complex(std::cos(x)) : std::cos(z);
    case Func::Sinh: return real ? Complex(std::sinh(x)) : std::sinh(z);
    case Func::Cosh: return real ? Complex(std::cosh(x)) : std::cosh(z);
    case Func::Tanh: return real ? Complex(std::tanh(x)) : std::tanh(z);
    case Func::Exp: return real ? Complex(std::exp(x)) : std::exp(z);
    case Func::Ln:
      if (z == Complex(0.0)) singular("logarithm of zero", at);
      return real && x > 0.0 ? Complex(std::log(x)) : std::log(on_branch(z));
  }
  return 0.0;
}

Complex checked(Complex z, const Expr& at) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) singular("non-finite value", at);
  return z;
}

Complex leaf_value(const Expr& e) {
  switch (e.kind()) {
    case Kind::Rational: return e.rational_value().to_double();
    case Kind::Decimal: return e.decimal_value();
    case Kind::ImagUnit: return Complex(0.0, 1.0);
    case Kind::Pi: return std::numbers::pi;
    default: return 0.0;
  }
}

bool integer_exponent(const Expr& n, std::int64_t& k) {
  if (n.kind() == Kind::Rational && n.rational_value().is_integer()) {
    k = n.rational_value().num();
    return true;
  }
  return false;
}

}  // namespace

Complex Evaluator::operator()(const Expr& e) {
  switch (e.kind()) {
    case Kind::Rational:
    case Kind::Decimal:
    case Kind::ImagUnit:
    case Kind::Pi:
      return leaf_value(e);
    case Kind::Variable: {
      auto it = point_.find(e.name());
      if (it == point_.end()) throw UnboundVariable(e.name());
      return it->second;
    }
    default:
      break;
  }
  if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second.second;
  Complex r;
  switch (e.kind()) {
    case Kind::Sum:
      r = 0.0;
      for (const Expr& a : e.args()) r += (*this)(a);
      break;
    case Kind::Product:
      r = 1.0;
      for (const Expr& a : e.args()) r *= (*this)(a);
      break;
    case Kind::Negate:
      r = -(*this)(e.arg(0));
      break;
    case Kind::Quotient: {
      Complex n = (*this)(e.arg(0));
      Complex d = (*this)(e.arg(1));
      if (d == Complex(0.0)) singular("division by zero", e);
      r = n / d;
      break;
    }
    case Kind::Power: {
      Complex b = (*this)(e.arg(0));
      std::int64_t k = 0;
      r = integer_exponent(e.arg(1), k) ? int_power(b, k, e) : general_power(b, (*this)(e.arg(1)), e);
      break;
    }
    case Kind::Function:
      r = apply_function(e.func(), (*this)(e.arg(0)), e);
      break;
    default:
      break;
  }
  r = checked(r, e);
  memo_.emplace(e.id(), std::make_pair(e, r));
  return r;
}

Complex eval(const Expr& e, const Point& p) { return Evaluator(p)(e); }

// -------------------------------------------------------------------- tape

Tape::Tape(std::span<const Expr> outputs, std::vector<std::string> variables)
    : variables_(std::move(variables)) {
  std::unordered_map<const Node*, std::uint32_t> seen;
  std::unordered_map<Expr, std::uint32_t, ExprHash> structural;
  outputs_.reserve(outputs.size());
  for (const Expr& e : outputs) outputs_.push_back(emit(e, seen, structural));
}

std::uint32_t Tape::emit(const Expr& e, std::unordered_map<const Node*, std::uint32_t>& seen,
                         std::unordered_map<Expr, std::uint32_t, ExprHash>& structural) {
  if (auto it = seen.find(e.id()); it != seen.end()) return it->second;
  if (auto it = structural.find(e); it != structural.end()) {
    seen.emplace(e.id(), it->second);
    return it->second;
  }
  Op op{e.kind(), Func::Sin, 0, 0, Complex(0.0), 0, false};
  switch (e.kind()) {
    case Kind::Rational:
    case Kind::Decimal:
    case Kind::ImagUnit:
    case Kind::Pi:
      op.constant = leaf_value(e);
      break;
    case Kind::Variable: {
      auto it = std::find(variables_.begin(), variables_.end(), e.name());
      if (it == variables_.end()) throw UnboundVariable(e.name());
      op.first = static_cast<std::uint32_t>(it - variables_.begin());
      break;
    }
    default: {
      std::vector<std::uint32_t> children;
      children.reserve(e.args().size());
      for (const Expr& a : e.args()) children.push_back(emit(a, seen, structural));
      op.func = e.kind() == Kind::Function ? e.func() : Func::Sin;
      op.first = static_cast<std::uint32_t>(operands_.size());
      op.count = static_cast<std::uint32_t>(children.size());
      operands_.insert(operands_.end(), children.begin(), children.end());
      if (e.kind() == Kind::Power) op.integer_exponent = integer_exponent(e.arg(1), op.int_exponent);
      break;
    }
  }
  auto slot = static_cast<std::uint32_t>(ops_.size());
  ops_.push_back(op);
  nodes_.push_back(e);
  seen.emplace(e.id(), slot);
  structural.emplace(e, slot);
  return slot;
}

void Tape::run(std::span<const Complex> values, std::span<Complex> out) const {
  if (values.size() != variables_.size()) throw DomainError("tape: wrong number of variable values");
  if (out.size() != outputs_.size()) throw DomainError("tape: wrong output size");
  std::vector<Complex> reg(ops_.size());
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const Op& op = ops_[i];
    const std::uint32_t* a = operands_.data() + op.first;
    Complex r;
    switch (op.kind) {
      case Kind::Rational:
      case Kind::Decimal:
      case Kind::ImagUnit:
      case Kind::Pi:
        reg[i] = op.constant;
        continue;
      case Kind::Variable:
        reg[i] = values[op.first];
        continue;
      case Kind::Sum:
        r = 0.0;
        for (std::uint32_t j = 0; j < op.count; ++j) r += reg[a[j]];
        break;
      case Kind::Product:
        r = 1.0;
        for (std::uint32_t j = 0; j < op.count; ++j) r *= reg[a[j]];
        break;
      case Kind::Negate:
        r = -reg[a[0]];
        break;
      case Kind::Quotient:
        if (reg[a[1]] == Complex(0.0)) singular("division by zero", nodes_[i]);
        r = reg[a[0]] / reg[a[1]];
        break;
      case Kind::Power:
        r = op.integer_exponent ? int_power(reg[a[0]], op.int_exponent, nodes_[i])
                                : general_power(reg[a[0]], reg[a[1]], nodes_[i]);
        break;
      case Kind::Function:
        r = apply_function(op.func, reg[a[0]], nodes_[i]);
        break;
    }
    reg[i] = checked(r, nodes_[i]);
  }
  for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = reg[outputs_[k]];
}

std::vector<Complex> Tape::run(std::span<const Complex> values) const {
  std::vector<Complex> out(outputs_.size());
  run(values, out);
  return out;
}

std::vector<Complex> Tape::run(const Point& p) const {
  std::vector<Complex> values;
  values.reserve(variables_.size());
  for (const std::string& v : variables_) {
    auto it = p.find(v);
    if (it == p.end()) throw UnboundVariable(v);
    values.push_back(it->second);
  }
  return run(values);
}

}  // namespace nkgeo
