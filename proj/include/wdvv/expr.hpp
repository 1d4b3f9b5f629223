#pragma once

// Expression trees: the parsed, printable form of formulas. Heavy algebra
// happens on NormalForm; trees are for input, output and cross-checking.

#include "wdvv/algebra.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wdvv {

enum class ExprKind : std::uint8_t { Const, Var, Jet, Root, Log, Exp, Sum, Product, Power };

class Expr;

struct ExprNode {
    ExprKind kind;
    Coefficient value;  // Const
    std::string name;  // Var, Jet (function), Root (root name)
    std::vector<std::string> index;  // Jet multi-index, sorted
    std::vector<Expr> args;  // Log/Exp: 1, Sum/Product: n, Power: base, Root: radicand
    Exponent exp;  // Power
};

/// Immutable, cheaply copyable handle to a shared expression tree.
class Expr {
public:
    Expr() : Expr(constant(Coefficient(0))) {}
    Expr(long v) : Expr(constant(Coefficient(v))) {}  // NOLINT

    static Expr constant(Coefficient c);
    static Expr var(std::string name);
    static Expr jet(std::string func, std::vector<std::string> index);
    /// Named algebraic root with name^2 = radicand.
    static Expr root(std::string name, Expr radicand);
    static Expr log(Expr arg);
    static Expr exp(Expr arg);
    static Expr sqrt(Expr arg) { return power(std::move(arg), Exponent(1, 2)); }
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr power(Expr base, Exponent q);

    const ExprNode& node() const { return *n_; }
    ExprKind kind() const { return n_->kind; }
    const std::vector<Expr>& args() const { return n_->args; }
    bool is_const() const { return n_->kind == ExprKind::Const; }
    bool is_zero() const { return is_const() && n_->value.is_zero(); }
    bool is_one() const { return is_const() && n_->value.is_one(); }

    friend Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
    friend Expr operator-(const Expr& a, const Expr& b) { return sum({a, product({Expr(-1), b})}); }
    friend Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
    friend Expr operator/(const Expr& a, const Expr& b) { return product({a, power(b, Exponent(-1))}); }
    Expr operator-() const { return product({Expr(-1), *this}); }

    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : n_(std::move(n)) {}
    std::shared_ptr<const ExprNode> n_;
};

/// Symbol environment for parsing and tree operations.
struct Context {
    /// Unknown functions and their arguments; enables f and f_xxy shorthand.
    std::map<std::string, std::vector<std::string>> functions;
    /// Named algebraic roots: name^2 = radicand.
    std::map<std::string, Expr> roots;
    /// When set, identifiers outside this list (and outside functions/roots) are rejected.
    std::optional<std::set<std::string>> symbols;

    void declare_function(const std::string& f, std::vector<std::string> args) { functions[f] = std::move(args); }
    DiffRules diff_rules() const;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos);
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

Expr parse(const std::string& text, const Context& ctx = {});
std::string render(const Expr& e);

Expr differentiate(const Expr& e, const std::string& var, const Context& ctx = {});

/// Simultaneous substitution; keys must be Var, Jet, Root or Log nodes.
using ExprBindings = std::vector<std::pair<Expr, Expr>>;
Expr substitute(const Expr& e, const ExprBindings& bindings, bool strict_jets = false);

NormalForm normalize(const Expr& e);
bool is_identically_zero(const Expr& e);
Expr to_expr(const NormalForm& a);

/// Rendering of a NormalForm through its expression form.
inline std::string render(const NormalForm& a) { return render(to_expr(a)); }
/// Parse then normalize.
inline NormalForm nf(const std::string& text, const Context& ctx = {}) { return normalize(parse(text, ctx)); }

/// Variables (by name) occurring in the tree, including inside atoms.
std::set<std::string> free_variables(const Expr& e);

}  // namespace wdvv
