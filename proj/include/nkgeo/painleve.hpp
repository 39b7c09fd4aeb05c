#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nkgeo/isomonodromy.hpp"
#include "nkgeo/report.hpp"
#include "nkgeo/sl2.hpp"

namespace nkgeo {

enum class FamilyKind { PI, PII, Solvable };
const char* to_string(FamilyKind k);

/// One-forms on (t, p, q, r) written in the invariant basis (dt, σ¹, σ², σ³).
using InvariantForm = std::array<Expr, 4>;

/// SL(2)-invariant ASD null-Kähler metric built from isomonodromic data.
///
/// The tetrad is E₁₁ = Q, E₂₂ = P, E₁₂ = −2∂_t + xL₂, E₂₁ = 2∂_t − R − xL₂ (x = y for PI,
/// 0 otherwise) with P, Q, R read as left-invariant fields. `coframe` is its exact dual, and
/// g = normalization · k · ½(e¹¹⊙e²² − e¹²⊙e²¹), re-expressed as γ, n.
struct PainleveFamily {
  FamilyKind kind;
  std::string label;
  Mat2 P, Q, R;
  Chart chart;                          ///< (t, p, q, r) plus the ODE as jet rules
  std::vector<std::string> data;        ///< y, z[, u]
  Expr k;                               ///< conformal factor
  std::vector<Expr> singular_locus;     ///< g degenerates or blows up where one of these vanishes
  Expr normalization;                   ///< constant matching the tabulated γ, n
  std::array<InvariantForm, 4> tetrad;   ///< E_ij in the basis (∂_t, L₁, L₂, L₃)
  std::array<InvariantForm, 4> coframe;  ///< exact dual of the tetrad
  std::array<InvariantForm, 4> displayed_coframe;
  std::array<InvariantForm, 4> corrected_coframe;  ///< displayed, with `corrections` applied
  std::array<Expr, 9> gamma;  ///< γ computed from `coframe` in the invariant basis
  std::array<Expr, 3> n;
  Expr g_tt;  ///< must vanish
  std::array<Expr, 9> displayed_gamma;
  std::array<Expr, 3> displayed_n;
  std::array<Expr, 9> corrected_gamma;
  std::vector<std::string> corrections;  ///< tabulated entries replaced in the corrected tables
  Metric g;                              ///< from corrected_gamma, displayed_n
  std::vector<Expr> omega;               ///< Ω_ab, 4×4 on (t, p, q, r)
  std::optional<std::vector<Expr>> N;    ///< N^a_b (row a), PI only
};

struct FamilyOptions {
  /// Replaces the ODE jet rules (e.g. free derivative symbols, or a sabotaged equation).
  std::optional<std::vector<JetRule>> jets;
  /// Replaces k. Ω is rescaled by k'/k so it stays the k'-rescaled two-form.
  std::optional<Expr> k;
};

/// ẏ = z, ż = 6y² + t + shift.
std::vector<JetRule> pi_jets(const Expr& shift = Expr());
/// u̇ = −yu, ż = −2yz + α − ½, ẏ = z + y² + t/2.
std::vector<JetRule> pii_jets(const Expr& alpha);
/// v̇ = d_v for each name, with d_v a free symbol.
std::vector<JetRule> free_jets(const std::vector<std::string>& names);

/// N = ½(σ³⊗L₂ − (c/z)σ¹⊗∂_t) as N^a_b on (t, p, q, r). g(N·,·) is skew only for c = 4,
/// and then Ω(X, Y) = −g(NX, Y).
std::vector<Expr> pi_null_structure(const Expr& c);

/// k = 16z, Ω = 2σ³∧σ¹, N = pi_null_structure(4).
PainleveFamily pi_family(const FamilyOptions& options = {});
/// k = 4yz + 1 − 2α, Ω = 2σ³∧σ².
PainleveFamily pii_family(const Expr& alpha, const FamilyOptions& options = {});
/// k = 8 sinh t / cosh³ t, Ω = σ³∧σ¹.
PainleveFamily solvable_family(const Expr& a, const Expr& b, const Expr& c, const FamilyOptions& options = {});

/// ½ sinh t cosh³ t σ³⊗σ³ on (t, p, q, r).
std::vector<Expr> solvable_ricci_display();
/// The a = b = c = 0 metric given in τ = tanh t, pulled back to (t, p, q, r).
Metric solvable_tau_metric();

struct FamilyCheckOptions {
  int points = 10;
  std::uint64_t seed = 20240917;
  double tol = 1e-8;
  double lo = 0.2;  ///< sampling box for every free variable
  double hi = 1.5;
  double margin = 0.05;  ///< points need |s| > margin for every s in the singular locus
  Point fixed;           ///< bindings held fixed (parameters)
  std::vector<Point> at;  ///< explicit points; replaces random sampling when non-empty
};

/// Rows: gamma_symmetric, tetrad_duality, displayed_coframe, corrected_coframe, dt_null,
/// coframe_gamma, routes_agree, tabulated_gamma, omega_closed, omega_parallel, weyl_plus, killing;
/// PI adds n_squared, n_skew, omega_is_gN; the solvable family adds ricci_profile.
/// routes_agree compares the corrected γ, n with normalization·k times the co-frame metric;
/// tabulated_gamma fails exactly when the displayed γ needed corrections. displayed_coframe and
/// tabulated_gamma are informational. Numeric rows are
/// divided by max(1, largest component at the point).
Report verify_family(const PainleveFamily& family, const FamilyCheckOptions& options = {});

/// Only the ∇Ω row (cheaper; used for the conformal-factor probes).
CheckResult omega_parallel_check(const PainleveFamily& family, const FamilyCheckOptions& options = {});

/// Sample points for `verify_family`: random orbit coordinates plus scalar data, or `at` with
/// points inside the singular-locus margin removed.
std::vector<Point> family_points(const PainleveFamily& family, const FamilyCheckOptions& options);

/// Points along a numeric PI (y, z) or PII (y, z, u) trajectory with random p, q, r.
std::vector<Point> pi_trajectory_points(const std::vector<double>& times, std::uint64_t seed = 20240917);
std::vector<Point> pii_trajectory_points(double alpha, const std::vector<double>& times,
                                         std::uint64_t seed = 20240917);

enum class KernelType { Nilpotent, NonNilpotent };
const char* to_string(KernelType k);

struct KernelDiagnostic {
  KernelType type;
  std::array<Complex, 3> element;  ///< components in L₁, L₂, L₃ at the first point
  double relative_det = 0.0;       ///< max |det| / ‖element‖² over the points
};

/// Ker(g⁻¹Ω) ∩ span(L₁, L₂, L₃) as a Lie-algebra element; nilpotent iff its determinant
/// vanishes (relative tolerance 1e-9). Throws DomainError if the intersection is not a line.
KernelDiagnostic kernel_type(const PainleveFamily& family, const FamilyCheckOptions& options = {});

}  // namespace nkgeo
