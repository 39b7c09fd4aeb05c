#pragma once

#include <json.hpp>
#include <string>

#include "nkgeo/report.hpp"

namespace nkgeo {

/// Row fields: name, pass, symbolic_zero, max_residual, tolerance, points, residuals, witness, note,
/// informational.
/// Non-finite residuals serialize as null. Witness values are numbers, or [re, im] when complex.
nlohmann::ordered_json to_json(const CheckResult& c);
nlohmann::ordered_json to_json(const Point& p);
/// {"pass": ..., "checks": [...]}.
nlohmann::ordered_json to_json(const Report& r);

/// Header plus one line per row: name,pass,informational,symbolic_zero,max_residual,tolerance,points,note.
std::string to_csv(const Report& r);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

}  // namespace nkgeo
