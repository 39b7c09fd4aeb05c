#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace nkgeo {

/// Exact rational with 64-bit numerator and denominator, always normalized (den > 0, gcd = 1).
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }
  bool is_one() const noexcept { return num_ == 1 && den_ == 1; }
  bool is_integer() const noexcept { return den_ == 1; }
  bool is_negative() const noexcept { return num_ < 0; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  // Checked arithmetic: nullopt on 64-bit overflow.
  static std::optional<Rational> add(const Rational& a, const Rational& b);
  static std::optional<Rational> mul(const Rational& a, const Rational& b);
  static std::optional<Rational> pow(const Rational& a, std::int64_t k);
  Rational negated() const { return Rational(-num_, den_); }
  std::optional<Rational> inverse() const;

  std::string str() const;

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend int compare(const Rational& a, const Rational& b) noexcept;

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// A numeric coefficient: exact while possible, demoted to double on overflow or on
/// contact with a decimal.
class Number {
public:
  Number() = default;
  Number(Rational q) : exact_(true), q_(q) {}
  Number(std::int64_t k) : exact_(true), q_(k) {}
  Number(int k) : exact_(true), q_(k) {}
  explicit Number(double x) : exact_(false), x_(x) {}

  bool exact() const noexcept { return exact_; }
  const Rational& rational() const noexcept { return q_; }
  double value() const noexcept { return exact_ ? q_.to_double() : x_; }

  bool is_zero() const noexcept { return exact_ ? q_.is_zero() : x_ == 0.0; }
  bool is_one() const noexcept { return exact_ ? q_.is_one() : x_ == 1.0; }
  bool is_negative() const noexcept { return exact_ ? q_.is_negative() : x_ < 0.0; }

  friend Number operator+(const Number& a, const Number& b);
  friend Number operator*(const Number& a, const Number& b);
  Number operator-() const { return exact_ ? Number(q_.negated()) : Number(-x_); }

  friend bool operator==(const Number& a, const Number& b) noexcept {
    return a.exact_ == b.exact_ && (a.exact_ ? a.q_ == b.q_ : a.x_ == b.x_);
  }

private:
  bool exact_ = true;
  Rational q_{};
  double x_ = 0.0;
};

}  // namespace nkgeo
