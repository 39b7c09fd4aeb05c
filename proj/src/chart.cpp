#include "nkgeo/chart.hpp"

#include <algorithm>
#include <set>

#include "nkgeo/error.hpp"

namespace nkgeo {

Chart::Chart(std::vector<std::string> coordinates, std::vector<JetRule> jets)
    : coords_(std::move(coordinates)), jets_(std::move(jets)) {
  if (coords_.empty()) throw DomainError("chart needs at least one coordinate");
  std::set<std::string> seen(coords_.begin(), coords_.end());
  if (seen.size() != coords_.size()) throw DomainError("chart coordinates must be distinct");
  for (const JetRule& j : jets_) {
    if (seen.count(j.variable)) throw DomainError("jet variable '" + j.variable + "' is a coordinate");
    if (!std::count(coords_.begin(), coords_.end(), j.along))
      throw DomainError("jet rule along unknown coordinate '" + j.along + "'");
  }
}

std::size_t Chart::index_of(const std::string& name) const {
  auto it = std::find(coords_.begin(), coords_.end(), name);
  if (it == coords_.end()) throw DomainError("unknown coordinate '" + name + "'");
  return static_cast<std::size_t>(it - coords_.begin());
}

std::vector<std::string> Chart::variables() const {
  std::vector<std::string> out = coords_;
  for (const JetRule& j : jets_)
    if (std::find(out.begin(), out.end(), j.variable) == out.end()) out.push_back(j.variable);
  return out;
}

Expr Chart::partial(const Expr& e, std::size_t i) const {
  const std::string& c = coords_.at(i);
  Expr d = diff(e, c);
  for (const JetRule& j : jets_) {
    if (j.along != c || !e.depends_on(j.variable)) continue;
    d = d + j.rate * diff(e, j.variable);
  }
  return simplify(d);
}

}  // namespace nkgeo
