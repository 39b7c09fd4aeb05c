#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "nkgeo/expr.hpp"
#include "nkgeo/zero_test.hpp"

namespace nkgeo::cli {

/// A Θ together with where it came from.
struct Potential {
  std::string name;        ///< built-in name, file path, or "expression"
  std::string expression;  ///< text as written, before substitution
  Expr theta;              ///< with rho and n substituted for the chosen n
};

/// Directory with the built-in potential files: $NKGEO_DATA_DIR, else the configured default.
std::filesystem::path data_directory();

/// Built-in potentials: (name, file) for every *.txt in the data directory, sorted by name.
std::vector<std::pair<std::string, std::filesystem::path>> builtin_potentials();

/// Resolves `text` as a built-in name ("sparling-tod", "sparling_tod.txt", ...), then a file
/// path, then a literal expression. The expression may use `rho` (Σ ω_ij y^i x^j) and `n`.
/// Throws ParseError or DomainError.
Potential load_potential(const std::string& text, int n);

/// Σ ω_ij y^i x^j on the normal-form chart.
Expr symplectic_pairing(int n);

/// Bases of negative powers, quotient denominators and logarithm arguments in e.
std::vector<Expr> denominators(const Expr& e);

/// Rejects points where some denominator of Θ has modulus ≤ margin.
std::function<bool(const Point&)> away_from_poles(const Expr& theta, double margin);

}  // namespace nkgeo::cli
