// Batch driver: runs check suites and writes machine-readable reports.
//
// Exit codes: 0 all gating checks pass, 1 a check failed, 2 usage or parse error,
// 3 sampling exhausted, 4 numeric blow-up.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "nkgeo/error.hpp"
#include "nkgeo/isomonodromy.hpp"
#include "nkgeo/nullkahler.hpp"
#include "nkgeo/painleve.hpp"
#include "nkgeo/pde.hpp"
#include "nkgeo/report_io.hpp"
#include "nkgeo/rng.hpp"
#include "potentials.hpp"

namespace {

using namespace nkgeo;
using Json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSampling = 3;
constexpr int kExitBlowUp = 4;

/// Tolerance for the parametrized-vs-integrated matrix flow along a trajectory.
constexpr double kFlowTolerance = 1e-7;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Output {
  std::string path;
  std::string format = "json";
};

struct Document {
  std::string command;
  Json config = Json::object();
  Report report;
  Json extra = Json::object();
};

void write_document(const Document& d, const Output& out) {
  std::string text;
  if (out.format == "csv") {
    text = to_csv(d.report);
  } else {
    Json j;
    j["tool"] = "nkgeo";
    j["command"] = d.command;
    j["config"] = d.config;
    const Json r = to_json(d.report);
    j["pass"] = r["pass"];
    j["checks"] = r["checks"];
    for (const auto& [k, v] : d.extra.items()) j[k] = v;
    text = j.dump(2) + "\n";
  }
  if (out.path.empty() || out.path == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out.path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + out.path);
    f << text;
  }
}

Expr parse_number(const std::string& flag, const std::string& text) {
  Expr e = simplify(parse(text));
  if (!free_variables(e).empty()) throw UsageError(flag + " must be a number, got '" + text + "'");
  return e;
}

double real_value(const Expr& e) { return eval(e, {}).real(); }

std::vector<double> grid(double a, double b, int n) {
  if (n < 1) throw UsageError("--samples must be positive");
  if (n == 1) return {a};
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

void append(Report& into, const std::string& prefix, CheckResult c) {
  c.name = prefix + "." + c.name;
  into.checks.push_back(std::move(c));
}

void append(Report& into, const std::string& prefix, const Report& r) {
  for (const auto& c : r.checks) append(into, prefix, c);
}

// ----------------------------------------------------------------- verify

struct VerifyArgs {
  std::string potential;
  int n = 1;
  std::vector<std::string> checks{"all"};
  int points = 50;
  std::uint64_t seed = 20240917;
  double tol = 1e-9;
  double margin = 0.3;
};

const std::vector<std::string> kVerifyGroups{"structure", "einstein", "asd",   "sd",   "heavenly",
                                             "hierarchy", "weaker",   "lax",   "joyce"};

Document run_verify(const VerifyArgs& a) {
  if (a.n < 1 || a.n > 2) throw UsageError("--n must be 1 or 2");
  const cli::Potential pot = cli::load_potential(a.potential, a.n);

  std::vector<std::string> groups;
  for (const auto& c : a.checks) {
    if (c == "all") {
      for (const char* g : {"structure", "einstein", "hierarchy", "weaker", "lax"}) groups.emplace_back(g);
      if (a.n == 1) groups.insert(groups.begin() + 2, {"asd", "heavenly"});
    } else if (std::find(kVerifyGroups.begin(), kVerifyGroups.end(), c) != kVerifyGroups.end()) {
      groups.push_back(c);
    } else {
      throw UsageError("unknown check group '" + c + "'");
    }
  }
  for (const auto& g : groups)
    if ((g == "asd" || g == "sd" || g == "heavenly") && a.n != 1) throw UsageError(g + " is defined for n = 1 only");

  ZeroTestOptions z;
  z.points = a.points;
  z.seed = a.seed;
  z.tol = a.tol;
  z.regular = cli::away_from_poles(pot.theta, a.margin);
  z.sample_variables = normal_chart(a.n).coordinates();
  PdeOptions pde;
  pde.sampling = z;

  Document d;
  d.command = "verify";
  d.config = {{"potential", pot.name}, {"expression", pot.expression}, {"theta", to_string(pot.theta)},
              {"n", a.n},            {"checks", groups},              {"points", a.points},
              {"seed", a.seed},      {"tol", a.tol},                  {"margin", a.margin}};

  std::optional<NullKahlerStructure> s;
  auto structure = [&]() -> const NullKahlerStructure& {
    if (!s) s = build_normal_form(a.n, pot.theta);
    return *s;
  };
  for (const auto& g : groups) {
    if (g == "structure") {
      VerifyOptions vo;
      vo.sampling = z;
      append(d.report, g, verify_structure(structure(), vo));
    } else if (g == "einstein" || g == "asd" || g == "sd" || g == "heavenly") {
      SystemReport r = g == "einstein" ? einstein_residual(pot.theta, a.n, Expr(), std::vector<Expr>(2 * a.n), pde)
                       : g == "asd"    ? asd_residual(pot.theta, pde)
                       : g == "sd"     ? sd_residual(pot.theta, pde)
                                       : heavenly_residual(pot.theta, pde);
      append(d.report, g, r.residual);
      for (const auto& c : r.cross_checks) append(d.report, g, c);
    } else if (g == "hierarchy") {
      const HierarchyReport h = hk_hierarchy_residual(pot.theta, a.n, z);
      append(d.report, g, h.residual);
      append(d.report, g, h.antisymmetry);
      append(d.report, g, h.trace_identity);
    } else if (g == "weaker") {
      append(d.report, g, weaker_residual(pot.theta, a.n, z).residual);
    } else if (g == "lax") {
      append(d.report, g, lax_distribution_check(pot.theta, a.n, z));
    } else if (g == "joyce") {
      append(d.report, g, joyce_checks(pot.theta, a.n, z));
    }
  }
  return d;
}

// --------------------------------------------------------------- painleve

struct PainleveArgs {
  std::string kind;
  std::string alpha = "0", a = "0", b = "0", c = "0";
  std::optional<double> t0, t1;
  int samples = 10;
  int points = 10;
  std::uint64_t seed = 20240917;
  double tol = 1e-8;
  std::string trajectory;
};

void write_trajectory_csv(const std::string& path, const Json& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  if (rows.empty()) return;
  std::vector<std::string> keys;
  for (const auto& [k, v] : rows.front().items()) keys.push_back(k);
  for (std::size_t i = 0; i < keys.size(); ++i) f << (i ? "," : "") << keys[i];
  f << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) f << (i ? "," : "") << row[keys[i]].dump();
    f << "\n";
  }
}

Document run_painleve(const PainleveArgs& a) {
  Document d;
  d.command = "painleve";
  FamilyCheckOptions o;
  o.points = a.points;
  o.seed = a.seed;
  o.tol = a.tol;

  PainleveFamily f = [&] {
    if (a.kind == "I") return pi_family();
    if (a.kind == "II") return pii_family(parse_number("--alpha", a.alpha));
    return solvable_family(parse_number("--a", a.a), parse_number("--b", a.b), parse_number("--c", a.c));
  }();

  Json trajectory = Json::array();
  double max_flow = 0.0;
  std::vector<double> times;
  if (a.kind == "I") {
    times = grid(a.t0.value_or(0.0), a.t1.value_or(0.8), a.samples);
    const OdeState s0{0.0, 1.0};  // initial data of pi_trajectory_points
    for (const auto& s : pi_trajectory(s0, 0.0, times)) {
      max_flow = std::max(max_flow, s.flow_mismatch);
      trajectory.push_back({{"t", s.t}, {"y", s.state[0]}, {"z", s.state[1]}, {"flow_mismatch", s.flow_mismatch}});
    }
    o.at = pi_trajectory_points(times, a.seed);
    d.config = {{"kind", "I"}, {"y0", s0[0]}, {"z0", s0[1]}};
  } else if (a.kind == "II") {
    const double alpha = real_value(parse_number("--alpha", a.alpha));
    times = grid(a.t0.value_or(0.0), a.t1.value_or(1.0), a.samples);
    const OdeState s0{0.1, 0.2, 1.0};  // initial data of pii_trajectory_points
    for (const auto& s : pii_trajectory(alpha, s0, 0.0, times)) {
      max_flow = std::max(max_flow, s.flow_mismatch);
      trajectory.push_back(
          {{"t", s.t}, {"y", s.state[0]}, {"z", s.state[1]}, {"u", s.state[2]}, {"flow_mismatch", s.flow_mismatch}});
    }
    o.at = pii_trajectory_points(alpha, times, a.seed);
    d.config = {{"kind", "II"}, {"alpha", a.alpha}, {"y0", s0[0]}, {"z0", s0[1]}, {"u0", s0[2]}};
  } else {
    times = grid(a.t0.value_or(0.2), a.t1.value_or(1.5), a.samples);
    Rng rng(a.seed);
    for (double t : times) {
      o.at.push_back({{"t", t}, {"p", rng.uniform(-1, 1)}, {"q", rng.uniform(-1, 1)}, {"r", rng.uniform(-1, 1)}});
      trajectory.push_back({{"t", t}});
    }
    d.config = {{"kind", "solvable"}, {"a", a.a}, {"b", a.b}, {"c", a.c}};
  }
  d.config["t0"] = times.front();
  d.config["t1"] = times.back();
  d.config["samples"] = a.samples;
  d.config["points"] = a.points;
  d.config["seed"] = a.seed;
  d.config["tol"] = a.tol;

  d.report = verify_family(f, o);
  if (a.kind != "solvable") {
    CheckResult flow = exact_check("trajectory_flow", max_flow < kFlowTolerance,
                                   "parametrized matrices against the directly integrated flow");
    flow.symbolic_zero = false;
    flow.max_residual = max_flow;
    flow.tolerance = kFlowTolerance;
    flow.points = static_cast<int>(times.size());
    d.report.checks.push_back(flow);
  }
  FamilyCheckOptions ko = o;
  ko.at.clear();
  const KernelDiagnostic k = kernel_type(f, ko);
  const bool expected = a.kind == "I" ? k.type == KernelType::Nilpotent
                        : a.kind == "II" ? k.type == KernelType::NonNilpotent
                                         : true;
  CheckResult kr = exact_check("kernel_type", expected, to_string(k.type));
  kr.symbolic_zero = false;
  kr.max_residual = k.relative_det;
  kr.informational = a.kind == "solvable";
  d.report.checks.push_back(kr);

  d.extra["family"] = {{"label", f.label},
                       {"k", to_string(f.k)},
                       {"normalization", to_string(f.normalization)},
                       {"corrections", f.corrections}};
  d.extra["trajectory"] = trajectory;
  if (!a.trajectory.empty()) write_trajectory_csv(a.trajectory, trajectory);
  return d;
}

// ----------------------------------------------------------- isomonodromy

struct IsoArgs {
  std::string which;
  std::string alpha = "0", a = "1/2", b = "1/3", c = "1/5";
  double t0 = 0.0, t1 = 0.5, lambda0 = 0.0, lambda1 = 1.0;
  int samples = 10;
  int points = 20;
  std::uint64_t seed = 20240917;
  double tol = 1e-6;
};

CheckResult entries_zero(const std::string& name, const std::vector<Expr>& v, const ZeroTestOptions& z) {
  return to_check(name, is_zero(v, z), z.tol);
}

std::vector<Expr> matrix_entries(const Mat2& m) { return entries(m); }

Document run_isomonodromy(const IsoArgs& a) {
  Document d;
  d.command = "isomonodromy";
  d.config = {{"case", a.which}, {"t0", a.t0},         {"t1", a.t1},         {"lambda0", a.lambda0},
              {"lambda1", a.lambda1}, {"samples", a.samples}, {"points", a.points}, {"seed", a.seed},
              {"tol", a.tol}};
  ZeroTestOptions z;
  z.points = a.points;
  z.seed = a.seed;
  z.lo = 0.2;
  z.hi = 1.5;
  Report& r = d.report;
  const auto times = grid(a.t0, a.t1, a.samples);

  auto classification = [&](GaugeClass expected, const CMat2& P, const CMat2& R) {
    const GaugeClass got = classify_gauge(P, R);
    r.checks.push_back(exact_check("classification", got == expected, to_string(got)));
  };
  auto flatness = [&](const NumericLax& lax) {
    const FlatnessResult fr = flatness_check(lax, a.lambda0, a.lambda1, a.t0, a.t1);
    CheckResult c = exact_check("flatness", fr.defect < a.tol, "holonomy defect around the (lambda, t) rectangle");
    c.symbolic_zero = false;
    c.max_residual = fr.defect;
    c.tolerance = a.tol;
    r.checks.push_back(c);
  };
  auto flow_row = [&](const std::vector<TrajectorySample>& samples) {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, s.flow_mismatch);
    CheckResult c = exact_check("trajectory_flow", m < kFlowTolerance, "parametrized matrices against the integrated flow");
    c.symbolic_zero = false;
    c.max_residual = m;
    c.tolerance = kFlowTolerance;
    c.points = static_cast<int>(samples.size());
    r.checks.push_back(c);
  };

  if (a.which == "pII") {
    const Expr alpha = parse_number("--alpha", a.alpha);
    d.config["alpha"] = a.alpha;
    const SymbolicState st = pii_state(alpha);
    r.checks.push_back(entries_zero(
        "compatibility", matrix_entries(compatibility_residual(default_lax_pair(st.P, st.Q, st.R), st.chart)), z));
    r.checks.push_back(entries_zero("flow_residual", flow_residual(st.P, st.Q, st.R, st.chart), z));
    const double al = real_value(alpha);
    const OdeState s0{0.1, 0.2, 1.0};
    flow_row(pii_trajectory(al, s0, a.t0, times));
    const auto m = pii_matrices(s0[2], s0[0], s0[1], a.t0, al);
    classification(GaugeClass::PII, m[0], m[2]);
    flatness(pii_numeric_lax(al, s0, a.t0));
  } else if (a.which == "pI") {
    const SymbolicState st = pi_state();
    r.checks.push_back(
        entries_zero("compatibility", matrix_entries(compatibility_residual(pi_lax_pair(st), st.chart)), z));
    const OdeState s0{0.0, 1.0};
    flow_row(pi_trajectory(s0, a.t0, times));
    const auto m = pi_matrices(s0[0], s0[1], a.t0);
    classification(GaugeClass::PI, m[0], m[2]);
    flatness(pi_numeric_lax(s0, a.t0));
  } else {
    const Expr ea = parse_number("--a", a.a), eb = parse_number("--b", a.b), ec = parse_number("--c", a.c);
    d.config["a"] = a.a;
    d.config["b"] = a.b;
    d.config["c"] = a.c;
    const SolvableState st = solvable_state(ea, eb, ec);
    const auto res = solvable_residuals(st);
    r.checks.push_back(entries_zero("closed_form", {res.begin(), res.end()}, z));
    r.checks.push_back(entries_zero(
        "compatibility", matrix_entries(compatibility_residual(default_lax_pair(st.P, st.Q, st.R), st.chart)), z));
    r.checks.push_back(entries_zero("flow_residual", flow_residual(st.P, st.Q, st.R, st.chart), z));
    const Point p{{"t", a.t0 == 0.0 ? 0.5 : a.t0}};
    classification(GaugeClass::Solvable, to_numeric(st.P, p), to_numeric(st.R, p));
    flatness(solvable_numeric_lax(ea, eb, ec));
  }
  return d;
}

// ---------------------------------------------------------------- examples

Document run_examples() {
  Document d;
  d.command = "examples";
  Json list = Json::array();
  for (const auto& [name, file] : cli::builtin_potentials()) {
    const cli::Potential p = cli::load_potential(name, 1);
    list.push_back({{"name", name}, {"file", file.filename().string()}, {"expression", p.expression},
                    {"theta_n1", to_string(p.theta)}});
  }
  d.config["data_directory"] = cli::data_directory().filename().string();
  d.extra["potentials"] = list;
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Null-Kähler geometry checks"};
  app.require_subcommand(1);
  Output out;
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", out.path, "Report path (default stdout)");
    sub->add_option("--format", out.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "Check a null-Kähler potential");
  verify->add_option("--potential", va.potential, "Built-in name, file, or expression in x1.., y1..")->required();
  verify->add_option("--n", va.n, "Half-dimension parameter (1 or 2)");
  verify->add_option("--checks", va.checks, "Groups: all, " + [] {
    std::string s;
    for (const auto& g : kVerifyGroups) s += (s.empty() ? "" : ", ") + g;
    return s;
  }())->delimiter(',');
  verify->add_option("--points", va.points, "Sample points per identity");
  verify->add_option("--seed", va.seed, "Sampling seed");
  verify->add_option("--tol", va.tol, "Zero-test tolerance");
  verify->add_option("--margin", va.margin, "Minimum modulus of every denominator of the potential at samples");
  add_output(verify);

  PainleveArgs pa;
  CLI::App* painleve = app.add_subcommand("painleve", "Check a Painlevé-type metric family");
  painleve->add_option("--kind", pa.kind, "I, II or solvable")->required()->check(CLI::IsMember({"I", "II", "solvable"}));
  painleve->add_option("--alpha", pa.alpha, "PII parameter (number or fraction)");
  painleve->add_option("--a", pa.a, "Solvable parameter a");
  painleve->add_option("--b", pa.b, "Solvable parameter b");
  painleve->add_option("--c", pa.c, "Solvable parameter c");
  painleve->add_option("--t0", pa.t0, "Start of the t-range");
  painleve->add_option("--t1", pa.t1, "End of the t-range");
  painleve->add_option("--samples", pa.samples, "Number of t-samples");
  painleve->add_option("--points", pa.points, "Random points for the symbolic rows");
  painleve->add_option("--seed", pa.seed, "Sampling seed");
  painleve->add_option("--tol", pa.tol, "Tolerance");
  painleve->add_option("--trajectory", pa.trajectory, "Write the trajectory as CSV to this path");
  add_output(painleve);

  IsoArgs ia;
  CLI::App* iso = app.add_subcommand("isomonodromy", "Check the isomonodromic Lax pairs");
  iso->add_option("--case", ia.which, "pI, pII or solvable")->required()->check(CLI::IsMember({"pI", "pII", "solvable"}));
  iso->add_option("--alpha", ia.alpha, "PII parameter");
  iso->add_option("--a", ia.a, "Solvable parameter a");
  iso->add_option("--b", ia.b, "Solvable parameter b");
  iso->add_option("--c", ia.c, "Solvable parameter c");
  iso->add_option("--t0", ia.t0, "Start of the t-range");
  iso->add_option("--t1", ia.t1, "End of the t-range");
  iso->add_option("--lambda0", ia.lambda0, "Start of the lambda-range");
  iso->add_option("--lambda1", ia.lambda1, "End of the lambda-range");
  iso->add_option("--samples", ia.samples, "Trajectory samples");
  iso->add_option("--points", ia.points, "Random points for the symbolic rows");
  iso->add_option("--seed", ia.seed, "Sampling seed");
  iso->add_option("--tol", ia.tol, "Flatness tolerance");
  add_output(iso);

  CLI::App* examples = app.add_subcommand("examples", "List the built-in potentials");
  add_output(examples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    Document d;
    if (*verify)
      d = run_verify(va);
    else if (*painleve)
      d = run_painleve(pa);
    else if (*iso)
      d = run_isomonodromy(ia);
    else
      d = run_examples();
    write_document(d, out);
    return d.report.pass() ? kExitPass : kExitFail;
  } catch (const UsageError& e) {
    std::cerr << "nkgeo: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "nkgeo: parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SamplingExhausted& e) {
    std::cerr << "nkgeo: sampling exhausted: " << e.what() << "\n";
    return kExitSampling;
  } catch (const SingularEvaluation& e) {
    std::cerr << "nkgeo: singular evaluation: " << e.what() << "\n";
    return kExitSampling;
  } catch (const IntegrationFailure& e) {
    std::cerr << "nkgeo: integration failed: " << e.what() << "\n";
    return kExitBlowUp;
  } catch (const Error& e) {
    std::cerr << "nkgeo: " << e.what() << "\n";
    return kExitUsage;
  }
}
