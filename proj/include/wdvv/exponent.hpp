#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace wdvv {

/// Small exact rational used for exponents. Exponents in this problem class
/// stay tiny, so machine integers suffice; overflow is detected and thrown.
class Exponent {
public:
    constexpr Exponent() = default;
    constexpr Exponent(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit on purpose
    Exponent(std::int64_t n, std::int64_t d);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    bool is_half_integer() const { return den_ == 1 || den_ == 2; }

    /// Largest integer <= value.
    std::int64_t floor() const;
    /// value - floor(value), in [0, 1).
    Exponent frac() const { return *this - Exponent(floor()); }

    Exponent operator-() const { return Exponent(-num_, den_); }
    friend Exponent operator+(Exponent a, Exponent b);
    friend Exponent operator-(Exponent a, Exponent b) { return a + (-b); }
    friend Exponent operator*(Exponent a, Exponent b);
    friend Exponent operator/(Exponent a, Exponent b);
    Exponent& operator+=(Exponent o) { return *this = *this + o; }

    friend bool operator==(Exponent a, Exponent b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(Exponent a, Exponent b) { return !(a == b); }
    friend bool operator<(Exponent a, Exponent b);
    friend bool operator>(Exponent a, Exponent b) { return b < a; }
    friend bool operator<=(Exponent a, Exponent b) { return !(b < a); }
    friend bool operator>=(Exponent a, Exponent b) { return !(a < b); }

    std::string str() const;
    std::size_t hash() const { return std::hash<std::int64_t>{}(num_ * 1000003 + den_); }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace wdvv
