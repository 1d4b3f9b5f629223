#pragma once

// Arbitrary-precision complex arithmetic (MPFR) and a generic evaluator
// for expression trees. Taylor2 carries a bivariate truncated series so the
// same evaluator produces derivatives without symbolic differentiation.

#include "wdvv/expr.hpp"

#include <mpfr.h>

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wdvv {

/// Evaluation left the principal-branch domain or hit a singular point.
class BranchError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class UnboundSymbolError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

long digits_to_bits(long digits);

class Real {
public:
    explicit Real(long bits = 128);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    static Real from(const mpq_class& q, long bits);
    static Real from(double d, long bits);

    long bits() const { return static_cast<long>(mpfr_get_prec(v_)); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    /// Decimal rendering with n significant digits.
    std::string str(int n = 20) const;

    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    Real operator-() const;
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }

private:
    mpfr_t v_;
};

Real abs(const Real& a);
Real sqrt(const Real& a);
Real log(const Real& a);
Real exp(const Real& a);
Real atan2(const Real& y, const Real& x);
Real hypot(const Real& a, const Real& b);

class Complex {
public:
    explicit Complex(long bits = 128) : re_(bits), im_(bits) {}
    Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
    static Complex from(const Coefficient& c, long bits);

    const Real& re() const { return re_; }
    const Real& im() const { return im_; }
    long bits() const { return re_.bits(); }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    std::complex<double> to_std() const { return {re_.to_double(), im_.to_double()}; }
    std::string str(int n = 20) const;

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }
    friend Complex operator*(const Complex& a, const Complex& b);
    friend Complex operator/(const Complex& a, const Complex& b);
    Complex operator-() const { return {-re_, -im_}; }

private:
    Real re_, im_;
};

Real abs(const Complex& z);
Complex log(const Complex& z);
Complex exp(const Complex& z);
/// Principal-branch power.
Complex pow(const Complex& z, Exponent q);

/// Truncated bivariate Taylor series in (h, k) up to total order 3.
class Taylor2 {
public:
    static constexpr int kOrder = 3;
    static int slot(int i, int j);  // coefficient of h^i k^j

    explicit Taylor2(long bits = 128);
    static Taylor2 constant(const Complex& c);
    /// The series of x0 + h (dir = 0) or y0 + k (dir = 1).
    static Taylor2 coordinate(const Complex& x0, int dir);

    const Complex& at(int i, int j) const { return c_[slot(i, j)]; }
    Complex& at(int i, int j) { return c_[slot(i, j)]; }
    const Complex& value() const { return c_[0]; }
    /// Partial derivative d^(i+j)/dh^i dk^j at the expansion point.
    Complex derivative(int i, int j) const;
    long bits() const { return c_[0].bits(); }

    friend Taylor2 operator+(const Taylor2& a, const Taylor2& b);
    friend Taylor2 operator-(const Taylor2& a, const Taylor2& b);
    friend Taylor2 operator*(const Taylor2& a, const Taylor2& b);
    friend Taylor2 operator/(const Taylor2& a, const Taylor2& b);
    Taylor2 operator-() const;

    /// g(a) where g is univariate with derivatives d[0..3] at the constant term.
    Taylor2 compose(const std::array<Complex, 4>& d) const;

private:
    std::array<Complex, 10> c_;
};

Taylor2 pow(const Taylor2& a, Exponent q);
/// Series of g in the coordinates (a, b) near the expansion point, given
/// g, a, b as series in the original ones (truncated series reversion).
/// Throws BranchError when the Jacobian of (a, b) vanishes there.
Taylor2 reexpand(const Taylor2& g, const Taylor2& a, const Taylor2& b);
Taylor2 log(const Taylor2& a);
Taylor2 exp(const Taylor2& a);

using LongComplex = std::complex<long double>;

/// Positive-real check used for strict branch enforcement.
bool principal_ok(const Complex& z);
bool principal_ok(const Taylor2& z);
bool principal_ok(const LongComplex& z);

LongComplex pow(const LongComplex& z, Exponent q);

/// Generic evaluator; `leaf` supplies values for Var and Jet nodes.
/// With strict, non-integer powers, logs and roots demand positive real
/// arguments.
template <class T>
T evaluate(const Expr& e, const std::function<T(const ExprNode&)>& leaf,
           const std::function<T(const Coefficient&)>& konst, bool strict) {
    const ExprNode& n = e.node();
    auto rec = [&](const Expr& a) { return evaluate<T>(a, leaf, konst, strict); };
    switch (n.kind) {
        case ExprKind::Const:
            return konst(n.value);
        case ExprKind::Var:
        case ExprKind::Jet:
            return leaf(n);
        case ExprKind::Root: {
            T r = rec(n.args[0]);
            if (strict && !principal_ok(r)) throw BranchError("algebraic root of a non-positive value");
            return pow(r, Exponent(1, 2));
        }
        case ExprKind::Log: {
            T a = rec(n.args[0]);
            if (strict && !principal_ok(a)) throw BranchError("log of a non-positive value");
            return log(a);
        }
        case ExprKind::Exp:
            return exp(rec(n.args[0]));
        case ExprKind::Sum: {
            T acc = rec(n.args[0]);
            for (std::size_t i = 1; i < n.args.size(); ++i) acc = acc + rec(n.args[i]);
            return acc;
        }
        case ExprKind::Product: {
            T acc = rec(n.args[0]);
            for (std::size_t i = 1; i < n.args.size(); ++i) acc = acc * rec(n.args[i]);
            return acc;
        }
        case ExprKind::Power: {
            T b = rec(n.args[0]);
            if (strict && !n.exp.is_integer() && !principal_ok(b))
                throw BranchError("fractional power of a non-positive value");
            return pow(b, n.exp);
        }
    }
    return konst(Coefficient(0));
}

/// Name used to bind a Var or Jet node in evaluation points ("x", "f_xy").
std::string symbol_name(const ExprNode& n);

using Point = std::map<std::string, mpq_class>;

/// Strict principal-branch evaluation at `digits` decimal digits.
Complex eval_numeric(const Expr& e, const Point& point, long digits);
/// Same, with complex point values and a chosen branch policy.
Complex eval_complex(const Expr& e, const std::map<std::string, Complex>& point, long bits, bool strict);
LongComplex eval_long(const Expr& e, const std::map<std::string, LongComplex>& point);

/// Point names of the leaf variables and jets of a normal form.
std::vector<std::string> point_names(const NormalForm& a);
/// Rationals k/128 in (1/2, 2) for each name; deterministic in the seed.
Point sample_point(const std::vector<std::string>& names, std::uint64_t seed);

}  // namespace wdvv
