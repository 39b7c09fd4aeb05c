#include <cctype>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>

#include "nkgeo/error.hpp"
#include "nkgeo/expr.hpp"

namespace nkgeo {
namespace {

// ---------------------------------------------------------------- printing

std::string decimal_text(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

bool is_atom(const Expr& e) {
  switch (e.kind()) {
    case Kind::Rational:
      return e.rational_value().is_integer() && !e.rational_value().is_negative();
    case Kind::Decimal:
      return e.decimal_value() >= 0.0;
    case Kind::ImagUnit:
    case Kind::Pi:
    case Kind::Variable:
    case Kind::Function:
      return true;
    default:
      return false;
  }
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, std::string& out, bool wrap) {
  if (wrap) out += '(';
  print(e, out);
  if (wrap) out += ')';
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Kind::Rational: {
      const Rational& q = e.rational_value();
      if (q.is_integer()) {
        out += std::to_string(q.num());
      } else {
        out += std::to_string(q.num()) + "/" + std::to_string(q.den());
      }
      return;
    }
    case Kind::Decimal:
      out += decimal_text(e.decimal_value());
      return;
    case Kind::ImagUnit:
      out += 'i';
      return;
    case Kind::Pi:
      out += "pi";
      return;
    case Kind::Variable:
      out += e.name();
      return;
    case Kind::Function:
      out += func_name(e.func());
      out += '(';
      print(e.arg(0), out);
      out += ')';
      return;
    case Kind::Sum: {
      bool first = true;
      for (const Expr& t : e.args()) {
        if (first) {
          print_wrapped(t, out, t.kind() == Kind::Sum);
        } else if (t.kind() == Kind::Negate) {
          out += " - ";
          const Expr& inner = t.arg(0);
          print_wrapped(inner, out, inner.kind() == Kind::Sum || inner.kind() == Kind::Negate);
        } else {
          out += " + ";
          print_wrapped(t, out, t.kind() == Kind::Sum);
        }
        first = false;
      }
      return;
    }
    case Kind::Product: {
      bool first = true;
      for (const Expr& f : e.args()) {
        if (!first) out += '*';
        print_wrapped(f, out, !is_atom(f) && f.kind() != Kind::Power);
        first = false;
      }
      return;
    }
    case Kind::Quotient: {
      const Expr& n = e.arg(0);
      const Expr& d = e.arg(1);
      bool wrap_num = !(is_atom(n) || n.kind() == Kind::Power || n.kind() == Kind::Product ||
                        n.kind() == Kind::Quotient);
      print_wrapped(n, out, wrap_num);
      out += '/';
      print_wrapped(d, out, !is_atom(d) && d.kind() != Kind::Power);
      return;
    }
    case Kind::Power:
      print_wrapped(e.arg(0), out, !is_atom(e.arg(0)));
      out += '^';
      print_wrapped(e.arg(1), out, !is_atom(e.arg(1)));
      return;
    case Kind::Negate: {
      out += '-';
      const Expr& a = e.arg(0);
      print_wrapped(a, out, !is_atom(a) && a.kind() != Kind::Power);
      return;
    }
  }
}

// ----------------------------------------------------------------- parsing

class Parser {
public:
  explicit Parser(std::string_view text) : s_(text) {}

  Expr run() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
    Expr e = sum();
    skip();
    if (pos_ < s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr sum() {
    std::vector<Expr> terms{product()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(product());
      } else if (accept('-')) {
        terms.push_back(Expr::negate(product()));
      } else {
        break;
      }
    }
    return Expr::sum(std::move(terms));
  }

  Expr product() {
    std::vector<Expr> factors{unary()};
    for (;;) {
      if (accept('*')) {
        factors.push_back(unary());
      } else if (accept('/')) {
        Expr num = Expr::product(std::move(factors));
        factors = {Expr::quotient(std::move(num), unary())};
      } else {
        break;
      }
    }
    return Expr::product(std::move(factors));
  }

  Expr unary() {
    if (accept('-')) {
      Expr inner = unary();
      if (inner.is_number()) return Expr::number(-inner.number_value());
      return Expr::negate(std::move(inner));
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return Expr::power(std::move(base), unary());
    return base;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      std::size_t open = pos_++;
      Expr e = sum();
      if (!accept(')')) throw ParseError("unbalanced parenthesis", open);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    std::size_t start = pos_;
    bool is_decimal = false;
    auto digits = [&] {
      std::size_t before = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ - before;
    };
    std::size_t int_digits = digits();
    std::size_t frac_digits = 0;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      is_decimal = true;
      ++pos_;
      frac_digits = digits();
    }
    if (int_digits + frac_digits == 0) throw ParseError("malformed number", start);
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = save;
      } else {
        is_decimal = true;
      }
    }
    std::string text(s_.substr(start, pos_ - start));
    if (!is_decimal) {
      std::int64_t k = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
      if (ec == std::errc() && ptr == text.data() + text.size()) return Expr(k);
    }
    return Expr::decimal(std::strtod(text.c_str(), nullptr));
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      static const std::pair<const char*, Func> table[] = {
          {"sin", Func::Sin},   {"cos", Func::Cos}, {"sinh", Func::Sinh}, {"cosh", Func::Cosh},
          {"tanh", Func::Tanh}, {"exp", Func::Exp}, {"ln", Func::Ln}};
      for (const auto& [fname, f] : table) {
        if (name == fname) {
          std::size_t open = pos_++;
          Expr arg = sum();
          if (!accept(')')) throw ParseError("unbalanced parenthesis", open);
          return Expr::function(f, std::move(arg));
        }
      }
      throw ParseError("unknown function '" + name + "'", start);
    }
    if (name == "i") return Expr::imag();
    if (name == "pi") return Expr::pi();
    return Expr::var(std::move(name));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

Expr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace nkgeo
