#include "potentials.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nkgeo/error.hpp"
#include "nkgeo/nullkahler.hpp"

#ifndef NKGEO_DATA_DIR
#define NKGEO_DATA_DIR "data/potentials"
#endif

namespace nkgeo::cli {
namespace fs = std::filesystem;

namespace {

std::string read_expression(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw DomainError("cannot read potential file " + file.string());
  std::string line, text;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    text += (text.empty() ? "" : " ") + line;
  }
  if (text.empty()) throw DomainError("potential file " + file.string() + " has no expression");
  return text;
}

void collect(const Expr& e, std::vector<Expr>& out) {
  switch (e.kind()) {
    case Kind::Power:
      if (e.arg(1).is_number() && e.arg(1).number_value().is_negative()) out.push_back(e.arg(0));
      break;
    case Kind::Quotient:
      out.push_back(e.arg(1));
      break;
    case Kind::Function:
      if (e.func() == Func::Ln) out.push_back(e.arg(0));
      break;
    default:
      break;
  }
  for (const Expr& a : e.args()) collect(a, out);
}

/// Built-in lookup key: a bare name with an optional .txt suffix, '_' read as '-'.
std::string builtin_key(std::string text) {
  if (text.find('/') != std::string::npos) return {};
  if (text.size() > 4 && text.ends_with(".txt")) text.resize(text.size() - 4);
  std::replace(text.begin(), text.end(), '_', '-');
  return text;
}

}  // namespace

fs::path data_directory() {
  if (const char* env = std::getenv("NKGEO_DATA_DIR"); env && *env) return env;
  return NKGEO_DATA_DIR;
}

std::vector<std::pair<std::string, fs::path>> builtin_potentials() {
  std::vector<std::pair<std::string, fs::path>> out;
  const fs::path dir = data_directory();
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      out.emplace_back(entry.path().stem().string(), entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

Expr symplectic_pairing(int n) {
  const auto w = omega_matrix(n);
  const auto xs = x_names(n), ys = y_names(n);
  const std::size_t m = xs.size();
  Expr r;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (w[i * m + j] != 0) r += Expr(w[i * m + j]) * Expr::var(ys[i]) * Expr::var(xs[j]);
  return r;
}

Potential load_potential(const std::string& text, int n) {
  Potential p;
  const std::string key = builtin_key(text);
  for (const auto& [name, file] : builtin_potentials())
    if (name == key) {
      p.name = name;
      p.expression = read_expression(file);
    }
  if (p.name.empty() && fs::is_regular_file(text)) {
    p.name = text;
    p.expression = read_expression(text);
  }
  if (p.name.empty()) {
    p.name = "expression";
    p.expression = text;
  }
  p.theta = simplify(substitute(parse(p.expression), {{"rho", symplectic_pairing(n)}, {"n", Expr(n)}}));
  return p;
}

std::vector<Expr> denominators(const Expr& e) {
  std::vector<Expr> out;
  collect(e, out);
  return out;
}

std::function<bool(const Point&)> away_from_poles(const Expr& theta, double margin) {
  return [dens = denominators(theta), margin](const Point& p) {
    try {
      return std::all_of(dens.begin(), dens.end(), [&](const Expr& d) { return std::abs(eval(d, p)) > margin; });
    } catch (const Error&) {
      return false;
    }
  };
}

}  // namespace nkgeo::cli
