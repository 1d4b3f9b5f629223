#include "wdvv/exponent.hpp"

#include <limits>
#include <numeric>

namespace wdvv {

namespace {

std::int64_t checked(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("exponent arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

}  // namespace

Exponent::Exponent(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("exponent with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    num_ = g ? n / g : 0;
    den_ = g ? d / g : 1;
}

std::int64_t Exponent::floor() const {
    if (num_ >= 0) return num_ / den_;
    return -((-num_ + den_ - 1) / den_);
}

Exponent operator+(Exponent a, Exponent b) {
    if (a.den_ == b.den_) return Exponent(checked(__int128(a.num_) + b.num_), a.den_);
    return Exponent(checked(__int128(a.num_) * b.den_ + __int128(b.num_) * a.den_),
                    checked(__int128(a.den_) * b.den_));
}

Exponent operator*(Exponent a, Exponent b) {
    return Exponent(checked(__int128(a.num_) * b.num_), checked(__int128(a.den_) * b.den_));
}

Exponent operator/(Exponent a, Exponent b) {
    if (b.num_ == 0) throw std::domain_error("exponent division by zero");
    return Exponent(checked(__int128(a.num_) * b.den_), checked(__int128(a.den_) * b.num_));
}

bool operator<(Exponent a, Exponent b) {
    return __int128(a.num_) * b.den_ < __int128(b.num_) * a.den_;
}

std::string Exponent::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace wdvv
