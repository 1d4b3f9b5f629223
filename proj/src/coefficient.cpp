#include "wdvv/coefficient.hpp"

#include <stdexcept>

namespace wdvv {

Coefficient::Coefficient(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
}

Coefficient Coefficient::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero coefficient");
    if (is_real()) return Coefficient(mpq_class(1) / re_);
    const mpq_class n = re_ * re_ + im_ * im_;
    return Coefficient(re_ / n, -im_ / n);
}

Coefficient operator+(const Coefficient& a, const Coefficient& b) {
    return Coefficient(a.re_ + b.re_, a.im_ + b.im_);
}

Coefficient operator-(const Coefficient& a, const Coefficient& b) {
    return Coefficient(a.re_ - b.re_, a.im_ - b.im_);
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    if (a.is_real() && b.is_real()) return Coefficient(mpq_class(a.re_ * b.re_));
    return Coefficient(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
}

Coefficient& Coefficient::operator+=(const Coefficient& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

int compare(const Coefficient& a, const Coefficient& b) {
    if (int c = cmp(a.re_, b.re_)) return c < 0 ? -1 : 1;
    if (int c = cmp(a.im_, b.im_)) return c < 0 ? -1 : 1;
    return 0;
}

bool Coefficient::is_atomic_str() const {
    if (!is_real() && sgn(re_) != 0) return false;
    const mpq_class& v = is_real() ? re_ : im_;
    return v.get_den() == 1 && sgn(v) >= 0;
}

std::string Coefficient::str() const {
    if (is_real()) return re_.get_str();
    std::string imag;
    if (im_ == 1)
        imag = "I";
    else if (im_ == -1)
        imag = "-I";
    else
        imag = im_.get_str() + "*I";
    if (sgn(re_) == 0) return imag;
    std::string out = "(" + re_.get_str();
    if (imag[0] != '-') out += "+";
    return out + imag + ")";
}

}  // namespace wdvv
