#include "nkgeo/report_io.hpp"

#include <cmath>
#include <sstream>

namespace nkgeo {
namespace {

nlohmann::ordered_json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string format(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

nlohmann::ordered_json to_json(const Point& p) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [name, v] : p) {
    if (v.imag() == 0.0)
      out[name] = number(v.real());
    else
      out[name] = {number(v.real()), number(v.imag())};
  }
  return out;
}

nlohmann::ordered_json to_json(const CheckResult& c) {
  nlohmann::ordered_json out;
  out["name"] = c.name;
  out["pass"] = c.pass;
  out["symbolic_zero"] = c.symbolic_zero;
  out["max_residual"] = number(c.max_residual);
  out["tolerance"] = number(c.tolerance);
  out["points"] = c.points;
  auto residuals = nlohmann::ordered_json::array();
  for (double r : c.residuals) residuals.push_back(number(r));
  out["residuals"] = std::move(residuals);
  out["witness"] = c.witness ? to_json(*c.witness) : nlohmann::ordered_json(nullptr);
  out["note"] = c.note;
  out["informational"] = c.informational;
  return out;
}

nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json out;
  out["pass"] = r.pass();
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  out["checks"] = std::move(checks);
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string to_csv(const Report& r) {
  std::ostringstream os;
  os << "name,pass,informational,symbolic_zero,max_residual,tolerance,points,note\n";
  for (const auto& c : r.checks)
    os << csv_field(c.name) << ',' << (c.pass ? "true" : "false") << ',' << (c.informational ? "true" : "false")
       << ',' << (c.symbolic_zero ? "true" : "false") << ','
       << format(c.max_residual) << ',' << format(c.tolerance) << ',' << c.points << ',' << csv_field(c.note) << '\n';
  return os.str();
}

}  // namespace nkgeo
