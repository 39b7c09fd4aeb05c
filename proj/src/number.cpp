#include "nkgeo/number.hpp"

#include <numeric>

#include "nkgeo/error.hpp"

namespace nkgeo {
namespace {

using i128 = __int128;

std::optional<Rational> make_checked(i128 num, i128 den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr i128 lo = INT64_MIN + 1;
  constexpr i128 hi = INT64_MAX;
  if (num < lo || num > hi || den > hi) return std::nullopt;
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

std::optional<Rational> Rational::add(const Rational& a, const Rational& b) {
  return make_checked(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

std::optional<Rational> Rational::mul(const Rational& a, const Rational& b) {
  return make_checked(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}

std::optional<Rational> Rational::inverse() const {
  if (num_ == 0) return std::nullopt;
  return make_checked(den_, num_);
}

std::optional<Rational> Rational::pow(const Rational& a, std::int64_t k) {
  Rational base = a;
  if (k < 0) {
    auto inv = a.inverse();
    if (!inv) return std::nullopt;
    base = *inv;
    k = -k;
  }
  Rational result(1);
  while (k > 0) {
    if (k & 1) {
      auto r = mul(result, base);
      if (!r) return std::nullopt;
      result = *r;
    }
    k >>= 1;
    if (k > 0) {
      auto b2 = mul(base, base);
      if (!b2) return std::nullopt;
      base = *b2;
    }
  }
  return result;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

int compare(const Rational& a, const Rational& b) noexcept {
  i128 lhs = i128(a.num_) * b.den_;
  i128 rhs = i128(b.num_) * a.den_;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

Number operator+(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) {
    if (auto r = Rational::add(a.q_, b.q_)) return Number(*r);
  }
  return Number(a.value() + b.value());
}

Number operator*(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) {
    if (auto r = Rational::mul(a.q_, b.q_)) return Number(*r);
  }
  return Number(a.value() * b.value());
}

}  // namespace nkgeo
