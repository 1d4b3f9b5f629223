#pragma once

// Similarity reductions of f_xxx f_yyy - f_xxy f_xyy = 1 to third order
// ODEs, with checks on the reduced equations: multipliers, first integrals,
// explicit solutions and changes of dependent/independent variable.

#include "wdvv/fixtures.hpp"
#include "wdvv/report.hpp"
#include "wdvv/expr.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wdvv {

class ReductionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// f(x, y) written through a similarity variable z and an unknown phi(z).
struct Reduction {
    std::string id;
    std::string generator;  // combination of v1..v10
    std::string z;          // in (x, y); informational when exponents are symbolic
    std::string dz_dx, dz_dy;  // in (x, y, z)
    std::string ansatz;     // f in (x, y, z) and jets of func
    std::string func = "phi";
    /// Optional "x = ..." or "y = ..." applied after the residual is formed.
    std::string eliminate;
    /// Abbreviations used by the ODE texts, e.g. {"s", "a + b"}.
    std::vector<std::pair<std::string, std::string>> lets;
    std::string target;     // ODE as printed
    std::string corrected;  // replacement when the printed form is wrong
    std::string mirror_of;  // id of the x <-> y partner, if any
    /// Replacements for a misprinted similarity variable; empty when unused.
    std::string corrected_z, corrected_dz_dx, corrected_dz_dy;

    bool has_corrected_geometry() const { return !corrected_z.empty(); }
    /// Copy with the corrected similarity variable in place.
    Reduction effective() const;

    Context context() const;
    DiffRules rules() const;
    /// ODE text parsed with lets applied.
    NormalForm ode(const std::string& text) const;
};

Reduction reduction_from_record(const Record& r);
std::vector<Reduction> reductions_from_records(const std::vector<Record>& rs);

struct OdeResidual {
    std::string func = "phi";
    std::string var = "z";
    NormalForm residual;
    int order = 0;
};

/// Jet base func_z...z of the given order (0 is func itself).
Base ode_jet(const std::string& func, const std::string& var, int order);
int ode_order(const NormalForm& a, const std::string& func, const std::string& var);

/// Residual of the PDE on the ansatz, in (z, jets) only. Throws
/// ReductionError when x or y survive.
OdeResidual apply_reduction(const Reduction& r);

/// xi f_x + eta f_y - phi on the ansatz is identically zero.
bool verify_invariant_surface(const Reduction& r);

/// m with computed == m * target, m a single term free of jets.
std::optional<NormalForm> match_ode(const NormalForm& computed, const NormalForm& target);

/// Total z-derivative, jets extended along func(var).
NormalForm ode_derivative(const NormalForm& a, const std::string& func, const std::string& var);

/// dK/dz vanishes on solutions. Uses the ODE solved for the top jet when
/// it is linear in it, else a multiple of the residual; Inconclusive when
/// neither applies.
Status verify_first_integral(const NormalForm& k, const OdeResidual& ode);

/// Eliminates a parameter through a constraint linear in it.
struct Constraint {
    std::string relation;  // expression equal to zero
    std::string solve_for;
};

NormalForm apply_constraint(const NormalForm& a, const Constraint& c);

/// ODE residual on phi = sol(z), reduced by the constraint when given.
NormalForm ode_on_solution(const NormalForm& sol, const OdeResidual& ode,
                           const std::optional<Constraint>& c = std::nullopt);
bool verify_ode_solution(const NormalForm& sol, const OdeResidual& ode,
                         const std::optional<Constraint>& c = std::nullopt);

/// Rewrite an ODE under z = z(w), phi = G(w, psi(w)); the result is in
/// (w, psi jets) and is returned renamed back to (z, phi).
NormalForm transform_ode(const OdeResidual& ode, const NormalForm& z_of_w, const NormalForm& phi_of_w);

/// d/dz of the residual equals factor * (top jet + 1), e.g. the derivative of
/// the mu = 1 ODE is 2(3 phi - 2 z phi') phi''''.
bool verify_derivative_factor(const OdeResidual& ode, const NormalForm& expected);

/// Every check driven by the reductions fixtures.
std::vector<Check> verify_reductions(const std::vector<Record>& rs);

}  // namespace wdvv
