#pragma once

// Canonical representation for the symbolic kernel.
//
// A Poly is a finite sum of Coefficient * Monomial where a Monomial is a
// product of interned bases raised to rational exponents (Laurent and
// fractional powers allowed). Bases are variables, jet variables, opaque
// atoms (log, exp, algebraic root) and prime surds such as 2^(1/2).
//
// A NormalForm is num / prod(den_i ^ mult_i). Every denominator factor is a
// non-monomial Poly scaled so that its leading term is exactly 1; monomial
// and scalar units are always folded into the numerator. Zero testing is
// structural: a NormalForm is zero iff its numerator has no terms.

#include "wdvv/coefficient.hpp"
#include "wdvv/exponent.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wdvv {

class NormalForm;

enum class BaseKind : std::uint8_t { Variable, Jet, Log, Exp, Root, Prime };

struct BaseInfo {
    BaseKind kind;
    std::string key;  // identity and global order key
    std::string name;  // variable or function name
    std::vector<std::string> index;  // jet multi-index, sorted
    mpz_class prime;
    std::shared_ptr<const NormalForm> arg;  // log/exp argument or root radicand
    std::vector<const BaseInfo*> deps;  // leaf variables/jets reachable through arg
};
using Base = const BaseInfo*;

Base variable_base(std::string_view name);
Base jet_base(std::string_view func, std::vector<std::string> index);
Base prime_base(const mpz_class& p);

inline bool is_atom(Base b) {
    return b->kind == BaseKind::Log || b->kind == BaseKind::Exp || b->kind == BaseKind::Root;
}
/// Global order on bases; primes sort last so they are least significant.
inline bool base_less(Base a, Base b) { return a != b && a->key < b->key; }

/// Error raised for operations outside the supported expression class.
class AlgebraError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct Power {
    Base base;
    Exponent exp;
    friend bool operator==(const Power& a, const Power& b) { return a.base == b.base && a.exp == b.exp; }
};

class Monomial {
public:
    Monomial() = default;
    Monomial(Base b, Exponent e);

    const std::vector<Power>& factors() const { return f_; }
    bool empty() const { return f_.empty(); }
    std::size_t size() const { return f_.size(); }
    Exponent degree(Base b) const;
    bool contains(Base b) const { return !degree(b).is_zero(); }
    bool has_prime() const { return !f_.empty() && f_.back().base->kind == BaseKind::Prime; }

    /// Product; prime exponents are kept in [0,1) and the integer overflow is
    /// multiplied into `carry`.
    static Monomial mul(const Monomial& a, const Monomial& b, mpq_class& carry);
    Monomial pow(Exponent q, mpq_class& carry) const;
    Monomial without(Base b) const;
    Monomial with(Base b, Exponent e) const;

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.f_ == b.f_; }
    std::size_t hash() const;

private:
    friend class Poly;
    std::vector<Power> f_;  // sorted by base_less, no zero exponents
};

/// Group order on monomials (lexicographic in base order).
int compare(const Monomial& a, const Monomial& b);

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct Term {
    Monomial mono;
    Coefficient coeff;
};

class Poly {
public:
    Poly() = default;
    Poly(Coefficient c);  // NOLINT
    Poly(Monomial m, Coefficient c);
    static Poly from_terms(std::vector<Term> terms);  // sorts and merges

    const std::vector<Term>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_single_term() const { return t_.size() == 1; }
    bool is_one() const { return t_.size() == 1 && t_[0].mono.empty() && t_[0].coeff.is_one(); }
    std::size_t size() const { return t_.size(); }
    const Term& leading() const { return t_.front(); }
    /// Distinct bases occurring in the terms, sorted.
    std::vector<Base> bases() const;
    bool contains(Base b) const;
    Exponent max_degree(Base b) const;

    Poly operator-() const;
    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly scaled(const Coefficient& c) const;
    Poly times(const Monomial& m, const Coefficient& c) const;
    Poly pow(unsigned n) const;

    /// Terms in which b occurs with exponent exactly e, with b removed.
    Poly coefficient(Base b, Exponent e) const;

    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
    friend int compare(const Poly& a, const Poly& b);
    std::size_t hash() const;

private:
    std::vector<Term> t_;  // strictly descending monomials, nonzero coefficients
};

/// p = unit_coeff * unit_mono * primitive, with primitive's leading term 1.
struct CanonicalSplit {
    Coefficient unit_coeff;
    Monomial unit_mono;
    Poly primitive;
};
CanonicalSplit canonical_split(const Poly& p);

struct DenFactor {
    Poly poly;
    int mult;
};

class NormalForm {
public:
    NormalForm() = default;
    NormalForm(Coefficient c);  // NOLINT
    NormalForm(long c) : NormalForm(Coefficient(c)) {}  // NOLINT
    static NormalForm from_poly(Poly p);
    static NormalForm from_base(Base b, Exponent e = Exponent(1));
    static NormalForm variable(std::string_view name) { return from_base(variable_base(name)); }

    const Poly& num() const { return num_; }
    const std::vector<DenFactor>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.empty(); }
    /// Value when the expression is a pure Gaussian-rational constant.
    std::optional<Coefficient> constant() const;
    std::vector<Base> bases() const;
    /// Leaf variables/jets, looking through atoms.
    std::vector<Base> leaf_bases() const;
    bool depends_on(Base b) const;

    NormalForm operator-() const;
    friend NormalForm operator+(const NormalForm& a, const NormalForm& b);
    friend NormalForm operator-(const NormalForm& a, const NormalForm& b) { return a + (-b); }
    friend NormalForm operator*(const NormalForm& a, const NormalForm& b);
    friend NormalForm operator/(const NormalForm& a, const NormalForm& b) { return a * b.inverse(); }
    NormalForm& operator+=(const NormalForm& o) { return *this = *this + o; }
    NormalForm& operator*=(const NormalForm& o) { return *this = *this * o; }
    NormalForm inverse() const;
    friend bool operator==(const NormalForm& a, const NormalForm& b) { return (a - b).is_zero(); }
    friend bool operator!=(const NormalForm& a, const NormalForm& b) { return !(a == b); }

    /// Full product of denominator factors as a Poly.
    Poly den_poly() const;
    std::string serialize() const;

private:
    friend void reduce_roots(NormalForm& a);
    friend NormalForm make_sqrt(const NormalForm& a);
    Poly num_;
    std::vector<DenFactor> den_;  // sorted by compare(Poly), distinct
};

NormalForm pow(const NormalForm& a, Exponent q);
/// Gaussian-rational power; non-integer powers produce prime surds.
NormalForm coefficient_power(const Coefficient& c, Exponent q);
NormalForm make_log(const NormalForm& u);
NormalForm make_exp(const NormalForm& u);
/// Principal square root: monomials distribute, composite radicands become a
/// single algebraic-root atom whose powers reduce by its defining relation.
NormalForm make_sqrt(const NormalForm& a);

/// Root atom occurring in the expression, if any (at most one is allowed).
Base find_root(const NormalForm& a);

/// Derivative rules: which arguments each unknown function takes, and the
/// derivative of dependent variables (e.g. dz/dx for a similarity variable).
struct DiffRules {
    std::map<std::string, std::vector<std::string>> functions;
    std::map<std::pair<std::string, std::string>, NormalForm> chain;

    void declare_function(const std::string& name, std::vector<std::string> args) {
        functions[name] = std::move(args);
    }
    void set_chain(const std::string& var, const std::string& wrt, NormalForm d) {
        chain[{var, wrt}] = std::move(d);
    }
};

/// Derivative with respect to a variable or jet base. With total=true jet
/// variables depend on their function's arguments (jets extend the
/// multi-index); with total=false they are held fixed.
NormalForm diff(const NormalForm& a, Base wrt, const DiffRules& rules, bool total = true);

using Bindings = std::unordered_map<Base, NormalForm>;
/// Simultaneous substitution. Atoms whose arguments mention a bound base are
/// rebuilt. With strict_jets, an unbound jet variable is an error.
NormalForm substitute(const NormalForm& a, const Bindings& bindings, bool strict_jets = false);

/// Groups terms by the part of their monomial made of bases accepted by
/// `select`; the remaining part (with the coefficient) forms the value.
std::vector<std::pair<Monomial, Poly>> collect(const Poly& p, const std::function<bool(Base)>& select);

std::string debug_string(const Poly& p);
std::string debug_string(const NormalForm& a);

}  // namespace wdvv
