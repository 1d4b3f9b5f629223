#include "wdvv/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace wdvv {

long digits_to_bits(long digits) { return static_cast<long>(std::ceil(digits * 3.3219280948873623)) + 32; }

// ---------------------------------------------------------------- Real

Real::Real(long bits) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
}

Real::Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

Real& Real::operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real Real::from(const mpq_class& q, long bits) {
    Real r(bits);
    mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
    return r;
}

Real Real::from(double d, long bits) {
    Real r(bits);
    mpfr_set_d(r.v_, d, MPFR_RNDN);
    return r;
}

std::string Real::str(int n) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", n, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

namespace {

long max_bits(const Real& a, const Real& b) { return std::max(a.bits(), b.bits()); }

}  // namespace

Real operator+(const Real& a, const Real& b) {
    Real r(max_bits(a, b));
    mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}

Real operator-(const Real& a, const Real& b) {
    Real r(max_bits(a, b));
    mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}

Real operator*(const Real& a, const Real& b) {
    Real r(max_bits(a, b));
    mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}

Real operator/(const Real& a, const Real& b) {
    if (b.is_zero()) throw BranchError("division by zero");
    Real r(max_bits(a, b));
    mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}

Real Real::operator-() const {
    Real r(bits());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

Real abs(const Real& a) {
    Real r(a.bits());
    mpfr_abs(r.get(), a.get(), MPFR_RNDN);
    return r;
}

Real sqrt(const Real& a) {
    Real r(a.bits());
    mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
    return r;
}

Real log(const Real& a) {
    Real r(a.bits());
    mpfr_log(r.get(), a.get(), MPFR_RNDN);
    return r;
}

Real exp(const Real& a) {
    Real r(a.bits());
    mpfr_exp(r.get(), a.get(), MPFR_RNDN);
    return r;
}

Real atan2(const Real& y, const Real& x) {
    Real r(max_bits(y, x));
    mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
    return r;
}

Real hypot(const Real& a, const Real& b) {
    Real r(max_bits(a, b));
    mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}

// ---------------------------------------------------------------- Complex

Complex Complex::from(const Coefficient& c, long bits) {
    return {Real::from(c.re(), bits), Real::from(c.im(), bits)};
}

std::string Complex::str(int n) const {
    if (im_.is_zero()) return re_.str(n);
    return "(" + re_.str(n) + (im_.sign() < 0 ? " - " : " + ") + abs(im_).str(n) + "*I)";
}

Complex operator*(const Complex& a, const Complex& b) {
    if (a.im_.is_zero() && b.im_.is_zero()) return {a.re_ * b.re_, Real(max_bits(a.re_, b.re_))};
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
}

Complex operator/(const Complex& a, const Complex& b) {
    if (b.is_zero()) throw BranchError("division by zero");
    if (b.im_.is_zero()) return {a.re_ / b.re_, a.im_ / b.re_};
    const Real d = b.re_ * b.re_ + b.im_ * b.im_;
    return {(a.re_ * b.re_ + a.im_ * b.im_) / d, (a.im_ * b.re_ - a.re_ * b.im_) / d};
}

Real abs(const Complex& z) { return hypot(z.re(), z.im()); }

Complex log(const Complex& z) {
    if (z.is_zero()) throw BranchError("log of zero");
    return {log(abs(z)), atan2(z.im(), z.re())};
}

Complex exp(const Complex& z) {
    const Real m = exp(z.re());
    if (z.im().is_zero()) return {m, Real(z.bits())};
    Real c(z.bits()), s(z.bits());
    mpfr_sin_cos(s.get(), c.get(), z.im().get(), MPFR_RNDN);
    return {m * c, m * s};
}

Complex pow(const Complex& z, Exponent q) {
    if (q.is_integer()) {
        std::int64_t k = q.num();
        Complex base = z;
        if (k < 0) {
            base = Complex::from(Coefficient(1), z.bits()) / z;
            k = -k;
        }
        Complex r = Complex::from(Coefficient(1), z.bits());
        while (k) {
            if (k & 1) r = r * base;
            k >>= 1;
            if (k) base = base * base;
        }
        return r;
    }
    if (z.is_zero()) {
        if (q > Exponent(0)) return Complex(z.bits());
        throw BranchError("negative power of zero");
    }
    if (z.im().is_zero() && z.re().sign() > 0) {
        if (q == Exponent(1, 2)) return {sqrt(z.re()), Real(z.bits())};
        const Real e = Real::from(mpq_class(q.num(), q.den()), z.bits());
        return {exp(e * log(z.re())), Real(z.bits())};
    }
    const Complex e = Complex::from(Coefficient(mpq_class(q.num(), q.den())), z.bits());
    return exp(e * log(z));
}

bool principal_ok(const Complex& z) {
    if (z.re().sign() <= 0) return false;
    if (z.im().is_zero()) return true;
    Real tol = Real::from(1.0, z.bits());
    mpfr_mul_2si(tol.get(), tol.get(), -z.bits() / 2, MPFR_RNDN);
    return abs(z.im()) < tol * z.re();
}

bool principal_ok(const LongComplex& z) {
    return z.real() > 0 && std::fabs(z.imag()) <= 1e-12L * z.real();
}

LongComplex pow(const LongComplex& z, Exponent q) {
    if (q.is_integer()) {
        std::int64_t k = q.num();
        LongComplex base = k < 0 ? LongComplex(1) / z : z;
        if (k < 0) k = -k;
        LongComplex r(1);
        while (k) {
            if (k & 1) r *= base;
            k >>= 1;
            if (k) base *= base;
        }
        return r;
    }
    const long double e = static_cast<long double>(q.num()) / static_cast<long double>(q.den());
    if (z.imag() == 0 && z.real() > 0) return {std::pow(z.real(), e), 0};
    return std::pow(z, LongComplex(e));
}

// ---------------------------------------------------------------- Taylor2

int Taylor2::slot(int i, int j) {
    const int d = i + j;
    return d * (d + 1) / 2 + j;
}

Taylor2::Taylor2(long bits) {
    for (auto& c : c_) c = Complex(bits);
}

Taylor2 Taylor2::constant(const Complex& c) {
    Taylor2 t(c.bits());
    t.c_[0] = c;
    return t;
}

Taylor2 Taylor2::coordinate(const Complex& x0, int dir) {
    Taylor2 t = constant(x0);
    t.at(dir == 0 ? 1 : 0, dir == 0 ? 0 : 1) = Complex::from(Coefficient(1), x0.bits());
    return t;
}

Complex Taylor2::derivative(int i, int j) const {
    static const long fact[] = {1, 1, 2, 6};
    return at(i, j) * Complex::from(Coefficient(fact[i] * fact[j]), bits());
}

Taylor2 operator+(const Taylor2& a, const Taylor2& b) {
    Taylor2 r(a.bits());
    for (int s = 0; s < 10; ++s) r.c_[s] = a.c_[s] + b.c_[s];
    return r;
}

Taylor2 operator-(const Taylor2& a, const Taylor2& b) {
    Taylor2 r(a.bits());
    for (int s = 0; s < 10; ++s) r.c_[s] = a.c_[s] - b.c_[s];
    return r;
}

Taylor2 Taylor2::operator-() const {
    Taylor2 r(bits());
    for (int s = 0; s < 10; ++s) r.c_[s] = -c_[s];
    return r;
}

Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
    Taylor2 r(a.bits());
    for (int i1 = 0; i1 <= 3; ++i1)
        for (int j1 = 0; i1 + j1 <= 3; ++j1) {
            const Complex& x = a.at(i1, j1);
            if (x.is_zero()) continue;
            for (int i2 = 0; i1 + i2 <= 3; ++i2)
                for (int j2 = 0; i1 + j1 + i2 + j2 <= 3; ++j2) {
                    const Complex& y = b.at(i2, j2);
                    if (y.is_zero()) continue;
                    r.at(i1 + i2, j1 + j2) = r.at(i1 + i2, j1 + j2) + x * y;
                }
        }
    return r;
}

Taylor2 Taylor2::compose(const std::array<Complex, 4>& d) const {
    Taylor2 h = *this;
    h.c_[0] = Complex(bits());
    const Taylor2 h2 = h * h;
    const Taylor2 h3 = h2 * h;
    const long b = bits();
    Taylor2 r = constant(d[0]);
    for (int s = 1; s < 10; ++s) {
        r.c_[s] = d[1] * h.c_[s] + d[2] * h2.c_[s] / Complex::from(Coefficient(2), b) +
                  d[3] * h3.c_[s] / Complex::from(Coefficient(6), b);
    }
    return r;
}

Taylor2 operator/(const Taylor2& a, const Taylor2& b) {
    const Complex& v = b.value();
    if (v.is_zero()) throw BranchError("series division by zero");
    const long bits = b.bits();
    const Complex one = Complex::from(Coefficient(1), bits);
    const Complex i1 = one / v;
    const Complex i2 = i1 * i1;
    const Complex i3 = i2 * i1;
    std::array<Complex, 4> d{i1, -i2, Complex::from(Coefficient(2), bits) * i3,
                             Complex::from(Coefficient(-6), bits) * i3 * i1};
    return a * b.compose(d);
}

Taylor2 pow(const Taylor2& a, Exponent q) {
    if (q.is_integer()) {
        std::int64_t k = q.num();
        Taylor2 base = a;
        if (k < 0) {
            base = Taylor2::constant(Complex::from(Coefficient(1), a.bits())) / a;
            k = -k;
        }
        Taylor2 r = Taylor2::constant(Complex::from(Coefficient(1), a.bits()));
        while (k) {
            if (k & 1) r = r * base;
            k >>= 1;
            if (k) base = base * base;
        }
        return r;
    }
    const Complex& v = a.value();
    if (v.is_zero()) throw BranchError("fractional power of a series vanishing at the point");
    const long bits = a.bits();
    const Complex p = pow(v, q);
    const Complex inv = Complex::from(Coefficient(1), bits) / v;
    std::array<Complex, 4> d{p, Complex(bits), Complex(bits), Complex(bits)};
    Complex factor = p;
    for (int n = 1; n <= 3; ++n) {
        const Exponent c = q - Exponent(n - 1);
        factor = factor * Complex::from(Coefficient(mpq_class(c.num(), c.den())), bits) * inv;
        d[n] = factor;
    }
    return a.compose(d);
}

Taylor2 log(const Taylor2& a) {
    const Complex& v = a.value();
    const long bits = a.bits();
    const Complex i1 = Complex::from(Coefficient(1), bits) / v;
    const Complex i2 = i1 * i1;
    std::array<Complex, 4> d{log(v), i1, -i2, Complex::from(Coefficient(2), bits) * i2 * i1};
    return a.compose(d);
}

Taylor2 exp(const Taylor2& a) {
    const Complex e = exp(a.value());
    return a.compose({e, e, e, e});
}

namespace {

// sum s_ij h^i k^j for series h, k without constant term
Taylor2 substitute_series(const Taylor2& s, const Taylor2& h, const Taylor2& k) {
    std::array<Taylor2, 4> hp{Taylor2::constant(Complex::from(Coefficient(1), s.bits())), h, h * h, Taylor2(s.bits())};
    hp[3] = hp[2] * h;
    std::array<Taylor2, 4> kp{hp[0], k, k * k, Taylor2(s.bits())};
    kp[3] = kp[2] * k;
    Taylor2 out(s.bits());
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; i + j <= 3; ++j)
            if (!s.at(i, j).is_zero()) out = out + Taylor2::constant(s.at(i, j)) * hp[i] * kp[j];
    return out;
}

}  // namespace

Taylor2 reexpand(const Taylor2& g, const Taylor2& a, const Taylor2& b) {
    const long bits = g.bits();
    Taylor2 A = a, B = b;
    A.at(0, 0) = Complex(bits);
    B.at(0, 0) = Complex(bits);
    const Complex ah = A.at(1, 0), ak = A.at(0, 1), bh = B.at(1, 0), bk = B.at(0, 1);
    const Complex det = ah * bk - ak * bh;
    if (det.is_zero()) throw BranchError("singular Jacobian at the expansion point");
    Taylor2 nA = A, nB = B;  // nonlinear parts
    nA.at(1, 0) = nA.at(0, 1) = nB.at(1, 0) = nB.at(0, 1) = Complex(bits);
    const Taylor2 p = Taylor2::coordinate(Complex(bits), 0), q = Taylor2::coordinate(Complex(bits), 1);
    auto solve = [&](const Taylor2& rp, const Taylor2& rq, Taylor2& h, Taylor2& k) {
        h = (Taylor2::constant(bk) * rp - Taylor2::constant(ak) * rq) * Taylor2::constant(Complex::from(Coefficient(1), bits) / det);
        k = (Taylor2::constant(ah) * rq - Taylor2::constant(bh) * rp) * Taylor2::constant(Complex::from(Coefficient(1), bits) / det);
    };
    Taylor2 h(bits), k(bits);
    solve(p, q, h, k);
    // each pass fixes one more order
    for (int pass = 0; pass < 2; ++pass) solve(p - substitute_series(nA, h, k), q - substitute_series(nB, h, k), h, k);
    return substitute_series(g, h, k);
}

bool principal_ok(const Taylor2& z) { return principal_ok(z.value()); }

// ---------------------------------------------------------------- evaluation

std::string symbol_name(const ExprNode& n) {
    if (n.kind == ExprKind::Var || n.index.empty()) return n.name;
    std::string s = n.name + "_";
    for (const auto& i : n.index) s += i;
    return s;
}

Complex eval_complex(const Expr& e, const std::map<std::string, Complex>& point, long bits, bool strict) {
    std::function<Complex(const ExprNode&)> leaf = [&](const ExprNode& n) {
        auto it = point.find(symbol_name(n));
        if (it == point.end()) throw UnboundSymbolError("unbound symbol " + symbol_name(n));
        return it->second;
    };
    std::function<Complex(const Coefficient&)> konst = [bits](const Coefficient& c) {
        return Complex::from(c, bits);
    };
    return evaluate<Complex>(e, leaf, konst, strict);
}

Complex eval_numeric(const Expr& e, const Point& point, long digits) {
    if (digits <= 0) throw std::invalid_argument("digits must be positive");
    const long bits = digits_to_bits(digits);
    std::map<std::string, Complex> p;
    for (const auto& [k, v] : point) p.emplace(k, Complex::from(Coefficient(v), bits));
    return eval_complex(e, p, bits, true);
}

LongComplex eval_long(const Expr& e, const std::map<std::string, LongComplex>& point) {
    std::function<LongComplex(const ExprNode&)> leaf = [&](const ExprNode& n) {
        auto it = point.find(symbol_name(n));
        if (it == point.end()) throw UnboundSymbolError("unbound symbol " + symbol_name(n));
        return it->second;
    };
    std::function<LongComplex(const Coefficient&)> konst = [](const Coefficient& c) {
        return LongComplex(static_cast<long double>(c.re().get_d()), static_cast<long double>(c.im().get_d()));
    };
    return evaluate<LongComplex>(e, leaf, konst, false);
}

std::vector<std::string> point_names(const NormalForm& a) {
    std::vector<std::string> out;
    for (Base b : a.leaf_bases()) {
        if (b->kind == BaseKind::Variable) {
            out.push_back(b->name);
        } else if (b->kind == BaseKind::Jet) {
            std::string s = b->name;
            if (!b->index.empty()) s += "_";
            for (const auto& i : b->index) s += i;
            out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Point sample_point(const std::vector<std::string>& names, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> k(65, 255);
    Point p;
    for (const auto& n : names) p[n] = mpq_class(k(rng), 128);
    return p;
}

}  // namespace wdvv
