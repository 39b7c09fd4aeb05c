#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "nkgeo/expr.hpp"

namespace nkgeo {

struct Node {
  Kind kind = Kind::Rational;
  Func func = Func::Sin;
  Rational q{};
  double x = 0.0;
  std::string name;
  std::vector<Expr> args;
  std::size_t hash = 0;
  // Bloom mask of the variable names below this node.
  std::uint64_t mask = 0;
  // Set once the node is known to be in simplified normal form.
  mutable std::atomic<bool> normal{false};
};

// Normal-form builders. Inputs must already be in normal form; so is the result.
Expr nf_sum(std::vector<Expr> terms);
Expr nf_product(std::vector<Expr> factors);
Expr nf_power(const Expr& base, const Expr& exponent);
Expr nf_function(Func f, const Expr& arg);
bool is_normal(const Expr& e) noexcept;

std::uint64_t variable_mask(const std::string& name);

}  // namespace nkgeo
