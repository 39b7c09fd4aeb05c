#pragma once

#include <string>
#include <vector>

#include "nkgeo/expr.hpp"

namespace nkgeo {

/// A dependent variable that moves with one coordinate: d(variable)/d(along) = rate.
/// Used to impose ODEs (e.g. y' = z along t) before differentiating fields.
struct JetRule {
  std::string variable;
  std::string along;
  Expr rate;
};

/// Ordered coordinate names plus optional jet rules. Partial derivatives are total
/// derivatives along the coordinate, following every jet rule by the chain rule.
class Chart {
public:
  explicit Chart(std::vector<std::string> coordinates, std::vector<JetRule> jets = {});

  std::size_t dim() const noexcept { return coords_.size(); }
  const std::vector<std::string>& coordinates() const noexcept { return coords_; }
  const std::string& coordinate(std::size_t i) const { return coords_.at(i); }
  std::size_t index_of(const std::string& name) const;
  const std::vector<JetRule>& jets() const noexcept { return jets_; }
  bool has_jets() const noexcept { return !jets_.empty(); }

  /// Names that may appear in fields: coordinates followed by jet variables.
  std::vector<std::string> variables() const;

  Expr partial(const Expr& e, std::size_t i) const;
  Expr partial(const Expr& e, const std::string& coordinate) const { return partial(e, index_of(coordinate)); }

  /// Same coordinates, no jets: jet variables become free symbols.
  Chart without_jets() const { return Chart(coords_); }

private:
  std::vector<std::string> coords_;
  std::vector<JetRule> jets_;
};

}  // namespace nkgeo
