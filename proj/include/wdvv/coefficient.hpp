#pragma once

#include <gmpxx.h>

#include <string>

namespace wdvv {

/// Exact Gaussian rational re + im*i.
class Coefficient {
public:
    Coefficient() : re_(0), im_(0) {}
    Coefficient(long v) : re_(v), im_(0) {}  // NOLINT
    Coefficient(mpq_class re) : re_(std::move(re)), im_(0) { re_.canonicalize(); }  // NOLINT
    Coefficient(mpq_class re, mpq_class im);

    static Coefficient imaginary_unit() { return Coefficient(mpq_class(0), mpq_class(1)); }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    Coefficient conj() const { return Coefficient(re_, -im_); }
    Coefficient inverse() const;

    Coefficient operator-() const { return Coefficient(-re_, -im_); }
    friend Coefficient operator+(const Coefficient& a, const Coefficient& b);
    friend Coefficient operator-(const Coefficient& a, const Coefficient& b);
    friend Coefficient operator*(const Coefficient& a, const Coefficient& b);
    friend Coefficient operator/(const Coefficient& a, const Coefficient& b) { return a * b.inverse(); }
    Coefficient& operator+=(const Coefficient& o);
    Coefficient& operator*=(const Coefficient& o) { return *this = *this * o; }

    friend bool operator==(const Coefficient& a, const Coefficient& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
    friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }
    /// Total order (re first, then im); only used for canonical tie-breaking.
    friend int compare(const Coefficient& a, const Coefficient& b);

    /// Grammar-compatible rendering, e.g. "3/2", "-I", "(1/2+3*I)".
    std::string str() const;
    /// True when str() needs no parentheses as a product factor.
    bool is_atomic_str() const;

private:
    mpq_class re_;
    mpq_class im_;
};

}  // namespace wdvv
