#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nkgeo/number.hpp"

namespace nkgeo {

using Complex = std::complex<double>;

enum class Kind : std::uint8_t {
  Rational,
  Decimal,
  ImagUnit,
  Pi,
  Variable,
  Power,
  Function,
  Product,
  Sum,
  Negate,
  Quotient,
};

enum class Func : std::uint8_t { Sin, Cos, Sinh, Cosh, Tanh, Exp, Ln };

const char* func_name(Func f) noexcept;

struct Node;

/// Immutable handle to a node of a symbolic expression tree. Copies share structure.
///
/// The raw constructors (`sum`, `product`, ...) build exactly the node asked for; the
/// arithmetic operators fold literal zeros and ones and flatten nested sums/products, and
/// `simplify` brings a tree to the library's normal form (no Negate/Quotient nodes,
/// collected coefficients and exponents, sorted operands).
class Expr {
public:
  Expr();
  Expr(int k);
  Expr(std::int64_t k);
  Expr(Rational q);

  static Expr rational(std::int64_t num, std::int64_t den = 1) { return Expr(Rational(num, den)); }
  static Expr number(const Number& n);
  static Expr decimal(double x);
  static Expr imag();
  static Expr pi();
  static Expr var(std::string name);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(Expr base, Expr exponent);
  static Expr negate(Expr e);
  static Expr quotient(Expr num, Expr den);
  static Expr function(Func f, Expr arg);

  Kind kind() const noexcept;
  const Rational& rational_value() const noexcept;
  double decimal_value() const noexcept;
  const std::string& name() const noexcept;
  Func func() const noexcept;
  std::span<const Expr> args() const noexcept;
  const Expr& arg(std::size_t i) const noexcept { return args()[i]; }
  std::size_t hash() const noexcept;

  bool is_number() const noexcept { return kind() == Kind::Rational || kind() == Kind::Decimal; }
  bool is_zero() const noexcept;
  bool is_one() const noexcept;
  /// Numeric value of a Rational/Decimal leaf.
  Number number_value() const;

  /// True if `name` occurs among the free variables.
  bool depends_on(const std::string& name) const;

  const Node* id() const noexcept { return node_.get(); }
  std::string str() const;

  friend bool operator==(const Expr& a, const Expr& b) noexcept;

private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Total structural order; used for canonical operand ordering.
int compare(const Expr& a, const Expr& b) noexcept;

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const noexcept { return compare(a, b) < 0; }
};
struct ExprHash {
  std::size_t operator()(const Expr& e) const noexcept { return e.hash(); }
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);
Expr pow(const Expr& base, const Expr& exponent);
Expr pow(const Expr& base, std::int64_t k);

Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr sinh(const Expr& e);
Expr cosh(const Expr& e);
Expr tanh(const Expr& e);
Expr exp(const Expr& e);
Expr ln(const Expr& e);

/// Parses the infix grammar: `^` (right-assoc) binds tighter than unary minus, which binds
/// tighter than `* /`, then `+ -`. Integers become rationals, literals with a point or
/// exponent become decimals, `i` is the imaginary unit and `pi` is π.
Expr parse(std::string_view text);
std::string to_string(const Expr& e);

Expr diff(const Expr& e, const std::string& var);
Expr simplify(const Expr& e);

/// Distributes products over sums and multiplies out positive integer powers of sums.
/// Negative powers of sums stay as atoms. Throws ExpansionLimit past `max_terms`.
Expr expand(const Expr& e, std::size_t max_terms = 200000);

/// Rewrites sin/cos/sinh/cosh/tanh through exp (trig ones through i), for zero testing.
Expr rewrite_exponential(const Expr& e);

/// Best-effort exact zero test: simplify, expand, clear sum denominators, and retry after
/// the exponential rewrite. `false` means "not proven", never "proven nonzero".
bool is_symbolically_zero(const Expr& e);

Expr substitute(const Expr& e, const std::map<std::string, Expr>& values);
std::set<std::string> free_variables(const Expr& e);

/// Binding of variable names to complex values.
using Point = std::map<std::string, Complex>;

/// Tree-walking evaluator with per-node memoization. Not thread-safe; use one per thread.
class Evaluator {
public:
  explicit Evaluator(const Point& point) : point_(point) {}
  Complex operator()(const Expr& e);

private:
  const Point& point_;
  std::unordered_map<const Node*, std::pair<Expr, Complex>> memo_;
};

Complex eval(const Expr& e, const Point& p);

/// A batch of expressions flattened into a straight-line instruction tape with shared
/// subexpressions evaluated once. Variables are bound positionally in `variables()` order.
class Tape {
public:
  Tape(std::span<const Expr> outputs, std::vector<std::string> variables);

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  std::size_t size() const noexcept { return outputs_.size(); }
  std::size_t instruction_count() const noexcept { return ops_.size(); }

  /// Evaluates every output. `values` has one entry per variable. Throws SingularEvaluation.
  void run(std::span<const Complex> values, std::span<Complex> out) const;
  std::vector<Complex> run(std::span<const Complex> values) const;
  std::vector<Complex> run(const Point& p) const;

private:
  struct Op {
    Kind kind;
    Func func;
    std::uint32_t first;
    std::uint32_t count;
    Complex constant;
    std::int64_t int_exponent;
    bool integer_exponent;
  };
  std::uint32_t emit(const Expr& e, std::unordered_map<const Node*, std::uint32_t>& seen,
                     std::unordered_map<Expr, std::uint32_t, ExprHash>& structural);

  std::vector<std::string> variables_;
  std::vector<Op> ops_;
  std::vector<std::uint32_t> operands_;
  std::vector<Expr> nodes_;
  std::vector<std::uint32_t> outputs_;
};

}  // namespace nkgeo
