#pragma once

// Closed-form solution pairs (f of x, y and F of y, t) tied by a link
// between (t, x, y). Rows may be given in a chart (u, v) other than the
// natural coordinates; partials are then taken through the inverse
// Jacobian of the chart.

#include "wdvv/fixtures.hpp"
#include "wdvv/pde.hpp"
#include "wdvv/report.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wdvv {

class ChartError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolutionEntry {
    std::string label;
    std::string f, F;
    /// Expressions for x, y, t that are not chart coordinates.
    std::map<std::string, std::string> link;
    std::array<std::string, 2> chart{"y", "t"};
    /// Chart coordinates other than x, y, t (e.g. T, lambda).
    std::vector<std::string> parametric_vars;
    /// Optional algebraic root: name^2 = radicand.
    std::string atom, atom_radicand;
    /// Optional parameter constraint (expression = 0), solved linearly.
    std::string constraint, solve_for;
    /// Reduction fixture id the row comes from; empty when none.
    std::string reduction;
    /// Replacements for misprinted fields, keyed f, F, x, y or t.
    std::map<std::string, std::string> corrected;
    /// Unprimed partner and the renaming taking its f-side to this row.
    std::string prime_of;
    std::map<std::string, std::string> prime_map;
    /// "f1" marks rows using the derived polynomials P4, P8.
    std::string derived;
    bool core = false;
    bool quasi_homogeneous = false;
    /// Numeric sampling: chart coordinate values are multiplied by these.
    std::map<std::string, std::string> sample_scale;

    Context context() const;
};

SolutionEntry solution_from_record(const Record& r);
std::vector<SolutionEntry> solutions_from_records(const std::vector<Record>& rs);

struct ImplicitChart {
    std::array<std::string, 2> coords;
    NormalForm x, y, t;  // in chart coordinates
    /// d(y, t)/d(u, v) and its inverse.
    std::array<std::array<NormalForm, 2>, 2> jacobian, inverse;
    NormalForm det;
};

using Partials = std::map<std::pair<int, int>, NormalForm>;

/// Partials up to max_order of g (a function of the chart coordinates) with
/// respect to the functions a, b of the same coordinates. A shortcut entry
/// replaces the computed partial when the two are identically equal.
Partials chart_partials(const NormalForm& g, const NormalForm& a, const NormalForm& b,
                        const std::array<std::string, 2>& coords, int max_order = 3, const Partials& shortcuts = {});

/// Throws ChartError for a missing link or singular Jacobian.
ImplicitChart build_chart(const SolutionEntry& e);

struct F1Polynomials {
    NormalForm P4, P8;
};
/// P4 from t = f_xx against the stated shape; P8 from the inverse
/// hodograph relations through the (x, y) chart. Throws ChartError when
/// the computed t does not have the stated shape.
F1Polynomials derive_f1_polynomials();
/// Fixture records holding P4 and P8 with their derivation notes.
std::vector<Record> f1_polynomial_records(const F1Polynomials& p);

struct RowResult {
    std::string label;
    NormalForm f_residual, F_residual;
    std::vector<RelationCheck> relations;
    bool chart_used = false;
    bool det_nonzero = true;
    bool mixed_symmetric = true;
    bool f_ok() const { return f_residual.is_zero(); }
    bool F_ok() const { return F_residual.is_zero(); }
    bool relations_ok() const;
    bool ok() const { return f_ok() && F_ok() && relations_ok() && det_nonzero && mixed_symmetric; }
};

struct EntryOptions {
    /// Field replacements keyed f, F, x, y or t (printed / corrected variants).
    std::map<std::string, std::string> replace;
    /// Parameters pinned to constants, e.g. k = 1.
    std::map<std::string, Coefficient> fix;
};

RowResult verify_entry(const SolutionEntry& e, const EntryOptions& opt = {});
/// Rows with no chart inversion for F.
RowResult verify_explicit_entry(const SolutionEntry& e);
RowResult verify_parametric_entry(const SolutionEntry& e);

/// f, F, and link bindings, parsed, with P4/P8 and constraints applied.
struct ParsedEntry {
    NormalForm f, F;
    std::map<std::string, NormalForm> link;
};
ParsedEntry parse_entry(const SolutionEntry& e, const EntryOptions& opt = {});
/// Same, as trees for numeric evaluation.
struct ParsedTrees {
    Expr f, F;
    std::map<std::string, Expr> link;
};
ParsedTrees parse_entry_trees(const SolutionEntry& e, const EntryOptions& opt = {});

/// The F2 family at the differentiated level: f written through phi(z),
/// z = x y, with phi_zz given; the reduced residual must vanish.
struct DifferentiatedRow {
    std::string label;
    std::string f;  // in x, y, z and jets of phi
    std::string z, dz_dx, dz_dy, eliminate;
    std::vector<std::string> phi_zz;  // one per branch
    std::string corrected_f;
};
DifferentiatedRow differentiated_from_record(const Record& r);
/// Residual per branch; zero when the ansatz solves the PDE.
std::vector<NormalForm> verify_differentiated(const DifferentiatedRow& r, const std::string& f);

/// Largest modulus of the row residuals (f PDE, F PDE, every relation) at
/// `count` seeded points, computed from the trees by Taylor series with no
/// symbolic differentiation. Keys: "f_pde", "F_pde" and relation names.
std::map<std::string, double> sample_entry(const SolutionEntry& e, std::uint64_t seed, int count, long digits,
                                           const EntryOptions& opt = {});

/// Weights (w_y, w_t, w_F) with w_y y F_y + w_t t F_t = w_F F modulo
/// quadratic terms, computed through the row's chart.
QuasiHomogeneity entry_quasi_homogeneity(const SolutionEntry& e);

/// f of the partner row renamed by the prime map equals this row's f.
bool prime_matches(const SolutionEntry& prime, const SolutionEntry& partner, const EntryOptions& opt = {},
                   const EntryOptions& partner_opt = {});

/// Every check driven by the solutions fixtures.
std::vector<Check> verify_solutions(const std::vector<Record>& rs, std::uint64_t seed = 20240501, long digits = 50,
                                    int jobs = 1);

}  // namespace wdvv
