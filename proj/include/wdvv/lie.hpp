#pragma once

// Point symmetries of f_xxx f_yyy - f_xxy f_xyy = 1: prolongation, the
// determining system, brackets, structure constants and the adjoint group
// action computed as exact exponentials.

#include "wdvv/fixtures.hpp"
#include "wdvv/linalg.hpp"
#include "wdvv/pde.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wdvv {

/// xi d/dx + eta d/dy + phi d/df with components in (x, y, f).
struct VectorField {
    NormalForm xi, eta, phi;
    std::vector<NormalForm> components() const { return {xi, eta, phi}; }
    VectorField scaled(const NormalForm& c) const { return {xi * c, eta * c, phi * c}; }
    friend VectorField operator+(const VectorField& a, const VectorField& b) {
        return {a.xi + b.xi, a.eta + b.eta, a.phi + b.phi};
    }
    friend VectorField operator-(const VectorField& a, const VectorField& b) {
        return {a.xi - b.xi, a.eta - b.eta, a.phi - b.phi};
    }
    bool is_zero() const { return xi.is_zero() && eta.is_zero() && phi.is_zero(); }
    std::string str() const;
};

/// Context where f is the unknown f(x, y).
Context lie_context();
VectorField make_field(const std::string& xi, const std::string& eta, const std::string& phi);
/// The ten generators v1..v10 (index 0..9).
const std::vector<VectorField>& reference_basis();
/// Largest total degree of the components in (x, y, f).
int field_degree(const VectorField& v);

using JetIndex = std::vector<std::string>;  // sorted, e.g. {x, x, y}
/// Prolonged coefficients phi^J for every J with 1 <= |J| <= 3.
std::map<JetIndex, NormalForm> prolong3(const VectorField& v);
/// pr v applied to the residual, with f_yyy eliminated. Zero iff v is a symmetry.
NormalForm symmetry_residual(const VectorField& v);

/// Action of v on a function of (x, y, f).
NormalForm apply(const VectorField& v, const NormalForm& g);
VectorField commutator(const VectorField& v, const VectorField& w);
std::optional<Vec> express(const VectorField& v, const std::vector<VectorField>& basis);

class ClosureError : public std::runtime_error {
public:
    ClosureError(std::size_t i, std::size_t j);
    std::size_t i, j;
};

struct LieAlgebra {
    std::vector<VectorField> basis;
    /// c[i][j][k]: [b_i, b_j] = sum_k c[i][j][k] b_k
    std::vector<std::vector<Vec>> c;
    std::size_t dim() const { return basis.size(); }
    bool antisymmetric() const;
    /// Failing (i, j, k) triples of the Jacobi identity.
    std::vector<std::array<std::size_t, 3>> jacobi_failures() const;
};

/// Throws ClosureError naming the first bracket outside the span.
LieAlgebra structure_constants(const std::vector<VectorField>& basis);

struct DeterminingResult {
    int max_degree = 0;
    std::size_t unknowns = 0;
    std::size_t equations = 0;
    std::vector<VectorField> solutions;
    /// Reference generators of degree <= max_degree.
    std::vector<std::size_t> reference_indices;
    /// Both inclusions between the solution span and the reference span hold.
    bool span_equal = false;
    /// Coefficients of each solution in the reference subset.
    std::vector<Vec> in_reference;
};

/// Polynomial ansatz of total degree <= max_degree in (x, y, f) for each
/// component; solves the determining equations exactly.
DeterminingResult solve_determining(int max_degree);

// ---------------------------------------------------------------- eps functions

/// Finite sum of p(eps) * exp(r * eps), p with rational coefficients.
class EpsFunction {
public:
    EpsFunction() = default;
    EpsFunction(long c);  // NOLINT
    static EpsFunction constant(const mpq_class& c);
    static EpsFunction eps();
    static EpsFunction exp_rate(Exponent r);
    /// From a polynomial normal form in eps and exp(eps).
    static EpsFunction from_nf(const NormalForm& a);

    const std::map<Exponent, std::vector<mpq_class>, std::less<>>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    EpsFunction derivative() const;
    /// Value at eps = 0.
    mpq_class at_zero() const;
    double value(double eps) const;
    NormalForm to_nf() const;
    std::string str() const;

    friend EpsFunction operator+(const EpsFunction& a, const EpsFunction& b);
    friend EpsFunction operator-(const EpsFunction& a, const EpsFunction& b);
    friend EpsFunction operator*(const EpsFunction& a, const EpsFunction& b);
    EpsFunction operator-() const;
    friend bool operator==(const EpsFunction& a, const EpsFunction& b) { return a.t_ == b.t_; }
    friend bool operator!=(const EpsFunction& a, const EpsFunction& b) { return !(a == b); }

private:
    void add(Exponent r, std::size_t k, const mpq_class& c);
    void trim();
    std::map<Exponent, std::vector<mpq_class>, std::less<>> t_;
};

using EpsMatrix = std::vector<std::vector<EpsFunction>>;

/// Matrix of ad(b_i) in the basis: column j holds [b_j, b_i].
Matrix ad_matrix(const LieAlgebra& g, std::size_t i);
/// exp(eps * ad(b_i)); column j is Ad(exp(eps b_i)) b_j.
EpsMatrix adjoint_matrix_exp(const LieAlgebra& g, std::size_t i);
std::vector<EpsFunction> adjoint_action(const LieAlgebra& g, std::size_t i, std::size_t j);

/// Exact rational eigenvalues with algebraic multiplicities; throws
/// AlgebraError when the characteristic polynomial does not split over Q.
std::vector<std::pair<mpq_class, int>> rational_eigenvalues(const Matrix& m);

// ---------------------------------------------------------------- subalgebra families

struct FamilyCheck {
    std::string expr;
    std::vector<NormalForm> coefficients;  // on v1..v10
    bool in_span = false;
    bool is_symmetry = false;
};
/// A family written as a linear combination of v1..v10 with symbolic
/// parameters; checks membership and that the field is a symmetry.
FamilyCheck check_family(const std::string& combination);

enum class ClaimKind { Cancel, Scale, Invariant };

struct NormalizationClaim {
    std::string id;
    std::size_t generator;  // 0-based
    std::string element;  // combination of v1..v10
    ClaimKind kind;
    std::size_t target;  // 0-based basis index
    std::string value;  // Cancel: eps that removes the target; Scale: factor in eps
};

struct ClaimResult {
    std::string id;
    bool holds = false;
    std::vector<NormalForm> transformed;  // coefficients after the action
    std::string detail;
};

ClaimResult check_claim(const LieAlgebra& g, const NormalizationClaim& claim);
/// Coefficients on v1..v10 of a combination; nullopt when not linear in them.
std::optional<std::vector<NormalForm>> combination_coefficients(const std::string& text);

// ---------------------------------------------------------------- fixture comparison

/// Basis from [generator vN] records (xi, eta, phi keys), in file order.
std::vector<VectorField> basis_from_records(const std::vector<Record>& rs);

struct TableEntryCheck {
    std::size_t i = 0, j = 0;  // 0-based
    std::string expected, computed;
    bool match = false;
};

/// Every [commutator vI] key vJ against [v_I, v_J] from the structure constants.
std::vector<TableEntryCheck> check_commutator_table(const LieAlgebra& g, const std::vector<Record>& rs);
/// Every [adjoint vI] key vJ against column J of exp(eps ad(v_I)).
std::vector<TableEntryCheck> check_adjoint_table(const LieAlgebra& g, const std::vector<Record>& rs);
/// Claims from [claim id] records.
std::vector<NormalizationClaim> claims_from_records(const std::vector<Record>& rs);

}  // namespace wdvv
