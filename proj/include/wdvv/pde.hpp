#pragma once

// The two third-order associativity equations, the hodograph relations
// linking them, the Lax pair and the three-dimensional WDVV checks.
//
// f = f(x, y) obeys   f_xxx f_yyy - f_xxy f_xyy - 1 = 0
// F = F(y, t) obeys   F_tyy^2 - F_ttt - F_tty F_yyy = 0

#include "wdvv/expr.hpp"
#include "wdvv/linalg.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace wdvv {

struct PdeResidual {
    std::string func;
    std::array<std::string, 2> vars;
    Expr residual;  // in jets of func
    Expr on_shell_jet;
    Expr on_shell_value;
    Context context() const;
};

/// f(x, y); solved for f_yyy.
const PdeResidual& ferapontov_pde();
/// F(y, t); solved for F_ttt.
const PdeResidual& dubrovin_pde();

/// Third partials of g with respect to (a, b): index i counts a-derivatives.
/// Extra rules (chain rules, unknown functions) pass through to diff.
std::map<int, NormalForm> third_partials(const NormalForm& g, const std::string& a, const std::string& b,
                                         const DiffRules& rules = {});

NormalForm ferapontov_residual(const NormalForm& f, const DiffRules& rules = {});
NormalForm dubrovin_residual(const NormalForm& F, const DiffRules& rules = {});
Expr ferapontov_residual(const Expr& f);
Expr dubrovin_residual(const Expr& F);

// ---------------------------------------------------------------- hodograph

enum class HodographDirection { FToCapitalF, CapitalFToF };

struct HodographLink {
    HodographDirection direction;
    /// Relations as (lhs, rhs) in the symbols x, y, t and jets f_.., F_...
    std::vector<std::pair<Expr, Expr>> relations;
    /// Coordinate bindings tying (t, x, y), e.g. x -> t*y/k.
    ExprBindings link;
    std::vector<std::string> parametric_vars;
};

/// Context declaring f(x, y) and F(y, t).
Context hodograph_context();
/// The five relations taking f to F (t = f_xx, ...).
std::vector<std::pair<Expr, Expr>> forward_relations();
/// The four relations taking F back to f (f_xx = t, ...).
std::vector<std::pair<Expr, Expr>> inverse_relations();
HodographLink make_link(HodographDirection dir, ExprBindings link);

struct RelationCheck {
    std::string name;  // "lhs = rhs"
    NormalForm residual;
    bool holds;
};

/// Partials of f (in x, y) and F (in y, t) up to third order, together with
/// the coordinate values, all expressed in one common set of coordinates.
struct HodographData {
    std::map<std::pair<int, int>, NormalForm> f;  // (x-order, y-order)
    std::map<std::pair<int, int>, NormalForm> F;  // (y-order, t-order)
    NormalForm x, y, t;
};

/// Evaluates relations on prepared data.
std::vector<RelationCheck> check_relations(const std::vector<std::pair<Expr, Expr>>& relations,
                                           const HodographData& data);

/// Explicit pair: f in (x, y), F in (y, t), tied by the link bindings.
std::vector<RelationCheck> hodograph_check(const NormalForm& f, const NormalForm& F, const HodographLink& link);

/// All partials up to order 3 of g in (a, b).
std::map<std::pair<int, int>, NormalForm> partials_upto3(const NormalForm& g, const std::string& a,
                                                         const std::string& b);

// ---------------------------------------------------------------- Lax pair

using Matrix3 = std::array<std::array<NormalForm, 3>, 3>;
using ExprMatrix3 = std::array<std::array<Expr, 3>, 3>;

struct LaxPair {
    ExprMatrix3 A, B;  // psi_x = lambda A psi, psi_y = lambda B psi
};
const LaxPair& lax_pair();

struct LaxReport {
    Matrix3 curl;  // A_y - B_x
    Matrix3 commutator;  // [A, B] after eliminating f_yyy
    bool curl_zero = false;
    bool commutator_zero = false;
    /// Entries of [A, B] before the on-shell step, for the record.
    Matrix3 commutator_off_shell;
};
LaxReport lax_compatibility();

/// Curl and commutator entries for an explicit f, built by tree
/// differentiation only (nothing is normalized) for numeric evaluation.
struct LaxTrees {
    ExprMatrix3 curl, commutator;
};
LaxTrees lax_trees(const Expr& f);

Matrix3 mat_mul(const Matrix3& a, const Matrix3& b);

// ---------------------------------------------------------------- WDVV

enum class Embedding { Eta11Nonzero, Eta11Zero };

struct WdvvInstance {
    std::array<int, 4> index;  // alpha, beta, gamma, delta (1-based)
    NormalForm residual;
    bool zero;
    /// residual / scalar PDE residual is a nonzero constant.
    bool proportional_to_pde;
};

struct WdvvReport {
    Embedding embedding;
    NormalForm prepotential;
    std::array<std::array<NormalForm, 3>, 3> eta;
    bool eta_constant = false;
    bool eta_nondegenerate = false;
    std::vector<WdvvInstance> instances;  // all 81 index tuples
    bool all_zero = false;
    std::size_t nonzero_count = 0;
    std::size_t proportional_count = 0;
};

/// Builds the prepotential in t1, t2, t3 from f(x, y) (eta_11 != 0) or from
/// F(y, t) (eta_11 = 0) and checks every associativity contraction.
WdvvReport wdvv1_check(Embedding e, const NormalForm& g);

struct QuasiHomogeneity {
    bool found = false;
    /// Basis of admissible (w_y, w_t, w_F).
    std::vector<std::array<Coefficient, 3>> weights;
};

/// Seeks constants with w_y*y*F_y + w_t*t*F_t - w_F*F (+ quadratic in y, t
/// when allow_affine) == 0. All inputs share one coordinate system.
QuasiHomogeneity quasi_homogeneity(const NormalForm& F, const NormalForm& yFy, const NormalForm& tFt,
                                   const NormalForm& y, const NormalForm& t, bool allow_affine);
/// F explicit in (y, t).
QuasiHomogeneity quasi_homogeneity_check(const NormalForm& F, bool allow_affine);

}  // namespace wdvv
