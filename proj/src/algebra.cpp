#include "wdvv/algebra.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <set>
#include <sstream>

namespace wdvv {

// ---------------------------------------------------------------- interning

namespace {

struct Registry {
    std::mutex mutex;
    std::unordered_map<std::string, std::unique_ptr<BaseInfo>> bases;
};

Registry& registry() {
    static Registry r;
    return r;
}

Base intern(BaseInfo info) {
    Registry& r = registry();
    std::lock_guard<std::mutex> lock(r.mutex);
    auto it = r.bases.find(info.key);
    if (it != r.bases.end()) return it->second.get();
    auto owned = std::make_unique<BaseInfo>(std::move(info));
    if (owned->kind == BaseKind::Variable || owned->kind == BaseKind::Jet) owned->deps = {owned.get()};
    Base b = owned.get();
    r.bases.emplace(b->key, std::move(owned));
    return b;
}

void sort_bases(std::vector<Base>& v) {
    std::sort(v.begin(), v.end(), [](Base a, Base b) { return a->key < b->key; });
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

Base intern_atom(BaseKind kind, const NormalForm& arg) {
    static const char* prefix[] = {"", "", "3:", "4:", "5:", ""};
    BaseInfo info;
    info.kind = kind;
    info.key = std::string(prefix[static_cast<int>(kind)]) + arg.serialize();
    info.arg = std::make_shared<const NormalForm>(arg);
    info.deps = arg.leaf_bases();
    return intern(std::move(info));
}

mpq_class mpq_pow(const mpz_class& p, std::int64_t k) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
    if (k < 0) return mpq_class(mpz_class(1), r);
    return mpq_class(r);
}

mpq_class exponent_q(Exponent e) { return mpq_class(mpz_class(e.num()), mpz_class(e.den())); }

std::vector<std::pair<mpz_class, long>> factor(mpz_class n) {
    std::vector<std::pair<mpz_class, long>> out;
    if (n < 0) n = -n;
    auto take = [&](const mpz_class& p) {
        long a = 0;
        while (n % p == 0) {
            n /= p;
            ++a;
        }
        if (a) out.emplace_back(p, a);
    };
    take(2);
    for (mpz_class p = 3; p * p <= n && p < 1000000; p += 2) take(p);
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

}  // namespace

Base variable_base(std::string_view name) {
    BaseInfo info;
    info.kind = BaseKind::Variable;
    info.key = "1:" + std::string(name);
    info.name = std::string(name);
    return intern(std::move(info));
}

Base jet_base(std::string_view func, std::vector<std::string> index) {
    std::sort(index.begin(), index.end());
    BaseInfo info;
    info.kind = BaseKind::Jet;
    info.key = "2:" + std::string(func) + ":";
    for (std::size_t i = 0; i < index.size(); ++i) info.key += (i ? "," : "") + index[i];
    info.name = std::string(func);
    info.index = std::move(index);
    return intern(std::move(info));
}

Base prime_base(const mpz_class& p) {
    BaseInfo info;
    info.kind = BaseKind::Prime;
    std::string digits = p.get_str();
    info.key = "9:" + std::string(digits.size() < 24 ? 24 - digits.size() : 0, '0') + digits;
    info.prime = p;
    return intern(std::move(info));
}

// ---------------------------------------------------------------- monomials

Monomial::Monomial(Base b, Exponent e) {
    if (!e.is_zero()) f_.push_back({b, e});
}

Exponent Monomial::degree(Base b) const {
    for (const Power& p : f_)
        if (p.base == b) return p.exp;
    return Exponent(0);
}

namespace {

void push_power(std::vector<Power>& out, Base b, Exponent e, mpq_class& carry) {
    if (b->kind == BaseKind::Prime) {
        const std::int64_t fl = e.floor();
        if (fl != 0) carry *= mpq_pow(b->prime, fl);
        e = e.frac();
    }
    if (!e.is_zero()) out.push_back({b, e});
}

}  // namespace

Monomial Monomial::mul(const Monomial& a, const Monomial& b, mpq_class& carry) {
    if (b.f_.empty()) return a;
    if (a.f_.empty()) return b;
    Monomial r;
    r.f_.reserve(a.f_.size() + b.f_.size());
    std::size_t i = 0, j = 0;
    while (i < a.f_.size() || j < b.f_.size()) {
        if (j == b.f_.size() || (i < a.f_.size() && base_less(a.f_[i].base, b.f_[j].base))) {
            r.f_.push_back(a.f_[i++]);
        } else if (i == a.f_.size() || base_less(b.f_[j].base, a.f_[i].base)) {
            r.f_.push_back(b.f_[j++]);
        } else {
            push_power(r.f_, a.f_[i].base, a.f_[i].exp + b.f_[j].exp, carry);
            ++i;
            ++j;
        }
    }
    return r;
}

Monomial Monomial::pow(Exponent q, mpq_class& carry) const {
    Monomial r;
    if (q.is_zero()) return r;
    r.f_.reserve(f_.size());
    for (const Power& p : f_) push_power(r.f_, p.base, p.exp * q, carry);
    return r;
}

Monomial Monomial::without(Base b) const {
    Monomial r;
    for (const Power& p : f_)
        if (p.base != b) r.f_.push_back(p);
    return r;
}

Monomial Monomial::with(Base b, Exponent e) const {
    Monomial r;
    bool placed = false;
    for (const Power& p : f_) {
        if (!placed && !base_less(p.base, b)) {
            placed = true;
            if (!e.is_zero()) r.f_.push_back({b, e});
            if (p.base == b) continue;
        }
        r.f_.push_back(p);
    }
    if (!placed && !e.is_zero()) r.f_.push_back({b, e});
    return r;
}

std::size_t Monomial::hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (const Power& p : f_) {
        h ^= std::hash<const void*>{}(p.base) + 0x9e3779b9 + (h << 6) + (h >> 2);
        h ^= p.exp.hash() + 0x9e3779b9 + (h << 6) + (h >> 2);
    }
    return h;
}

int compare(const Monomial& a, const Monomial& b) {
    const auto& fa = a.factors();
    const auto& fb = b.factors();
    std::size_t i = 0, j = 0;
    while (i < fa.size() || j < fb.size()) {
        if (j == fb.size() || (i < fa.size() && base_less(fa[i].base, fb[j].base)))
            return fa[i].exp > Exponent(0) ? 1 : -1;
        if (i == fa.size() || base_less(fb[j].base, fa[i].base)) return fb[j].exp > Exponent(0) ? -1 : 1;
        if (fa[i].exp != fb[j].exp) return fa[i].exp < fb[j].exp ? -1 : 1;
        ++i;
        ++j;
    }
    return 0;
}

// ---------------------------------------------------------------- polys

Poly::Poly(Coefficient c) {
    if (!c.is_zero()) t_.push_back({Monomial(), std::move(c)});
}

Poly::Poly(Monomial m, Coefficient c) {
    if (!c.is_zero()) t_.push_back({std::move(m), std::move(c)});
}

Poly Poly::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return compare(a.mono, b.mono) > 0; });
    Poly p;
    for (Term& t : terms) {
        if (!p.t_.empty() && p.t_.back().mono == t.mono) {
            p.t_.back().coeff += t.coeff;
            if (p.t_.back().coeff.is_zero()) p.t_.pop_back();
            continue;
        }
        if (!t.coeff.is_zero()) p.t_.push_back(std::move(t));
    }
    return p;
}

std::vector<Base> Poly::bases() const {
    std::vector<Base> out;
    for (const Term& t : t_)
        for (const Power& p : t.mono.factors()) out.push_back(p.base);
    sort_bases(out);
    return out;
}

bool Poly::contains(Base b) const {
    for (const Term& t : t_)
        if (t.mono.contains(b)) return true;
    return false;
}

Exponent Poly::max_degree(Base b) const {
    Exponent m(0);
    for (const Term& t : t_) m = std::max(m, t.mono.degree(b));
    return m;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (Term& t : r.t_) t.coeff = -t.coeff;
    return r;
}

Poly operator+(const Poly& a, const Poly& b) {
    if (a.t_.empty()) return b;
    if (b.t_.empty()) return a;
    Poly r;
    r.t_.reserve(a.t_.size() + b.t_.size());
    std::size_t i = 0, j = 0;
    while (i < a.t_.size() && j < b.t_.size()) {
        const int c = compare(a.t_[i].mono, b.t_[j].mono);
        if (c > 0) {
            r.t_.push_back(a.t_[i++]);
        } else if (c < 0) {
            r.t_.push_back(b.t_[j++]);
        } else {
            Coefficient s = a.t_[i].coeff + b.t_[j].coeff;
            if (!s.is_zero()) r.t_.push_back({a.t_[i].mono, std::move(s)});
            ++i;
            ++j;
        }
    }
    for (; i < a.t_.size(); ++i) r.t_.push_back(a.t_[i]);
    for (; j < b.t_.size(); ++j) r.t_.push_back(b.t_[j]);
    return r;
}

Poly Poly::scaled(const Coefficient& c) const {
    if (c.is_zero()) return Poly();
    if (c.is_one()) return *this;
    Poly r = *this;
    for (Term& t : r.t_) t.coeff *= c;
    return r;
}

Poly Poly::times(const Monomial& m, const Coefficient& c) const {
    if (c.is_zero() || t_.empty()) return Poly();
    if (m.empty()) return scaled(c);
    std::vector<Term> out;
    out.reserve(t_.size());
    for (const Term& t : t_) {
        mpq_class carry(1);
        Monomial nm = Monomial::mul(t.mono, m, carry);
        Coefficient nc = t.coeff * c;
        if (carry != 1) nc *= Coefficient(carry);
        out.push_back({std::move(nm), std::move(nc)});
    }
    if (m.has_prime()) return from_terms(std::move(out));
    Poly r;
    r.t_ = std::move(out);
    return r;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.t_.empty() || b.t_.empty()) return Poly();
    if (a.t_.size() == 1) return b.times(a.t_[0].mono, a.t_[0].coeff);
    if (b.t_.size() == 1) return a.times(b.t_[0].mono, b.t_[0].coeff);
    std::unordered_map<Monomial, Coefficient, MonomialHash> acc;
    acc.reserve(a.t_.size() * b.t_.size());
    for (const Term& x : a.t_) {
        for (const Term& y : b.t_) {
            mpq_class carry(1);
            Monomial m = Monomial::mul(x.mono, y.mono, carry);
            Coefficient c = x.coeff * y.coeff;
            if (carry != 1) c *= Coefficient(carry);
            auto it = acc.find(m);
            if (it == acc.end())
                acc.emplace(std::move(m), std::move(c));
            else
                it->second += c;
        }
    }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (!c.is_zero()) terms.push_back({m, c});
    return Poly::from_terms(std::move(terms));
}

Poly Poly::pow(unsigned n) const {
    Poly result(Coefficient(1));
    Poly base = *this;
    while (n) {
        if (n & 1U) result = result * base;
        n >>= 1U;
        if (n) base = base * base;
    }
    return result;
}

Poly Poly::coefficient(Base b, Exponent e) const {
    std::vector<Term> out;
    for (const Term& t : t_)
        if (t.mono.degree(b) == e) out.push_back({t.mono.without(b), t.coeff});
    return from_terms(std::move(out));
}

bool operator==(const Poly& a, const Poly& b) {
    if (a.t_.size() != b.t_.size()) return false;
    for (std::size_t i = 0; i < a.t_.size(); ++i)
        if (!(a.t_[i].mono == b.t_[i].mono) || a.t_[i].coeff != b.t_[i].coeff) return false;
    return true;
}

int compare(const Poly& a, const Poly& b) {
    const std::size_t n = std::min(a.t_.size(), b.t_.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(a.t_[i].mono, b.t_[i].mono)) return c;
        if (int c = compare(a.t_[i].coeff, b.t_[i].coeff)) return c;
    }
    if (a.t_.size() == b.t_.size()) return 0;
    return a.t_.size() < b.t_.size() ? -1 : 1;
}

std::size_t Poly::hash() const {
    std::size_t h = t_.size();
    for (const Term& t : t_) h ^= t.mono.hash() + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
}

CanonicalSplit canonical_split(const Poly& p) {
    if (p.is_zero()) throw AlgebraError("canonical split of zero");
    auto non_surd = [](const Monomial& m) {
        Monomial r;
        for (const Power& f : m.factors())
            if (f.base->kind != BaseKind::Prime) r = r.with(f.base, f.exp);
        return r;
    };
    auto normalise = [&](const Term& t) {
        mpq_class carry(1);
        Monomial inv = t.mono.pow(Exponent(-1), carry);
        Coefficient c = Coefficient(carry) / t.coeff;
        return CanonicalSplit{t.coeff, t.mono, p.times(inv, c)};
    };
    const Term& lt = p.leading();
    if (!lt.mono.has_prime() && (p.size() == 1 || !(non_surd(p.terms()[1].mono) == lt.mono)))
        return normalise(lt);
    const Monomial cls = non_surd(lt.mono);
    std::optional<CanonicalSplit> best;
    for (const Term& t : p.terms()) {
        if (!(non_surd(t.mono) == cls)) break;
        CanonicalSplit s = normalise(t);
        if (!best || compare(s.primitive, best->primitive) < 0) best = std::move(s);
    }
    return std::move(*best);
}

// ---------------------------------------------------------------- normal forms

NormalForm::NormalForm(Coefficient c) : num_(std::move(c)) {}

NormalForm NormalForm::from_poly(Poly p) {
    NormalForm r;
    r.num_ = std::move(p);
    reduce_roots(r);
    return r;
}

NormalForm NormalForm::from_base(Base b, Exponent e) {
    if (b->kind == BaseKind::Prime) return coefficient_power(Coefficient(mpq_class(b->prime)), e);
    if (b->kind == BaseKind::Root && !e.is_integer()) throw AlgebraError("fractional power of algebraic root");
    return from_poly(Poly(Monomial(b, e), Coefficient(1)));
}

std::optional<Coefficient> NormalForm::constant() const {
    if (!den_.empty()) return std::nullopt;
    if (num_.is_zero()) return Coefficient(0);
    if (num_.size() == 1 && num_.leading().mono.empty()) return num_.leading().coeff;
    return std::nullopt;
}

std::vector<Base> NormalForm::bases() const {
    std::vector<Base> out = num_.bases();
    for (const DenFactor& d : den_) {
        std::vector<Base> more = d.poly.bases();
        out.insert(out.end(), more.begin(), more.end());
    }
    sort_bases(out);
    return out;
}

std::vector<Base> NormalForm::leaf_bases() const {
    std::vector<Base> out;
    for (Base b : bases()) out.insert(out.end(), b->deps.begin(), b->deps.end());
    sort_bases(out);
    return out;
}

bool NormalForm::depends_on(Base b) const {
    for (Base x : bases())
        if (x == b || std::find(x->deps.begin(), x->deps.end(), b) != x->deps.end()) return true;
    return false;
}

NormalForm NormalForm::operator-() const {
    NormalForm r = *this;
    r.num_ = -r.num_;
    return r;
}

Poly NormalForm::den_poly() const {
    Poly d(Coefficient(1));
    for (const DenFactor& f : den_) d = d * f.poly.pow(static_cast<unsigned>(f.mult));
    return d;
}

namespace {

bool same_den(const std::vector<DenFactor>& a, const std::vector<DenFactor>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].mult != b[i].mult || a[i].poly != b[i].poly) return false;
    return true;
}

// Exact division attempt; gives up when the quotient is clearly not a
// polynomial or the work bound is reached.
bool try_divide(const Poly& num, const Poly& d, Poly& quotient) {
    const Term& ld = d.leading();
    mpq_class c1(1);
    const Monomial ld_inv = ld.mono.pow(Exponent(-1), c1);
    const Coefficient ld_scale = Coefficient(c1) / ld.coeff;
    const bool surds = num.leading().mono.has_prime() || ld.mono.has_prime() || d.terms().back().mono.has_prime();
    Monomial low;
    if (!surds) {
        mpq_class c(1);
        low = Monomial::mul(num.terms().back().mono, d.terms().back().mono.pow(Exponent(-1), c), c);
    }
    const std::size_t cap = 2 * num.size() + 16;
    std::vector<Term> q;
    Poly r = num;
    while (!r.is_zero()) {
        if (q.size() >= cap) return false;
        mpq_class c2(1);
        Monomial m = Monomial::mul(r.leading().mono, ld_inv, c2);
        if (!surds && compare(m, low) < 0) return false;
        Coefficient c = r.leading().coeff * ld_scale;
        if (c2 != 1) c *= Coefficient(c2);
        r = r - d.times(m, c);
        q.push_back({std::move(m), std::move(c)});
    }
    quotient = Poly::from_terms(std::move(q));
    return true;
}

constexpr std::size_t kCancelLimit = 400;

void cancel(Poly& num, std::vector<DenFactor>& den) {
    if (num.is_zero()) {
        den.clear();
        return;
    }
    if (num.size() > kCancelLimit) return;
    for (DenFactor& f : den) {
        if (f.poly.size() > num.size()) continue;
        while (f.mult > 0) {
            Poly q;
            if (!try_divide(num, f.poly, q)) break;
            num = std::move(q);
            --f.mult;
        }
    }
    den.erase(std::remove_if(den.begin(), den.end(), [](const DenFactor& f) { return f.mult == 0; }), den.end());
}

std::vector<DenFactor> merge_den(const std::vector<DenFactor>& a, const std::vector<DenFactor>& b, bool add) {
    std::vector<DenFactor> out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int c = 0;
        if (i == a.size())
            c = 1;
        else if (j == b.size())
            c = -1;
        else
            c = compare(a[i].poly, b[j].poly);
        if (c < 0)
            out.push_back(a[i++]);
        else if (c > 0)
            out.push_back(b[j++]);
        else {
            out.push_back({a[i].poly, add ? a[i].mult + b[j].mult : std::max(a[i].mult, b[j].mult)});
            ++i;
            ++j;
        }
    }
    return out;
}

int multiplicity(const std::vector<DenFactor>& den, const Poly& p) {
    for (const DenFactor& f : den)
        if (f.poly == p) return f.mult;
    return 0;
}

void insert_den(std::vector<DenFactor>& den, const Poly& p, int mult) {
    den = merge_den(den, {{p, mult}}, true);
}

}  // namespace

// Rewrites root powers to {0,1} using the defining relation and cancels
// common factors where an exact division is cheap.
void reduce_roots(NormalForm& a) {
    Base root = nullptr;
    for (const Term& t : a.num_.terms()) {
        for (const Power& p : t.mono.factors()) {
            if (p.base->kind != BaseKind::Root) continue;
            if (root && root != p.base) throw AlgebraError("more than one algebraic root in an expression");
            root = p.base;
        }
    }
    for (const DenFactor& f : a.den_)
        for (const Term& t : f.poly.terms())
            for (const Power& p : t.mono.factors())
                if (p.base->kind == BaseKind::Root) throw AlgebraError("algebraic root in a denominator factor");
    if (root) {
        bool needs = false;
        for (const Term& t : a.num_.terms()) {
            Exponent e = t.mono.degree(root);
            if (!e.is_integer()) throw AlgebraError("fractional power of algebraic root");
            if (e != Exponent(0) && e != Exponent(1)) needs = true;
        }
        if (needs) {
            const Poly& radicand = root->arg->num();
            std::int64_t emin = 0;
            for (const Term& t : a.num_.terms()) {
                const std::int64_t k = t.mono.degree(root).num();
                emin = std::min(emin, (k - ((k % 2 + 2) % 2)) / 2);
            }
            std::map<std::int64_t, Poly> powers;
            Poly out;
            for (const Term& t : a.num_.terms()) {
                const std::int64_t k = t.mono.degree(root).num();
                const std::int64_t r = (k % 2 + 2) % 2;
                const std::int64_t e = (k - r) / 2 - emin;
                auto it = powers.find(e);
                if (it == powers.end()) it = powers.emplace(e, radicand.pow(static_cast<unsigned>(e))).first;
                out = out + it->second.times(t.mono.with(root, Exponent(r)), t.coeff);
            }
            a.num_ = std::move(out);
            if (emin < 0 && !a.num_.is_zero()) insert_den(a.den_, radicand, static_cast<int>(-emin));
        }
    }
    cancel(a.num_, a.den_);
}

NormalForm operator+(const NormalForm& a, const NormalForm& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    NormalForm r;
    if (same_den(a.den_, b.den_)) {
        r.num_ = a.num_ + b.num_;
        r.den_ = a.den_;
    } else {
        r.den_ = merge_den(a.den_, b.den_, false);
        Poly fa(Coefficient(1)), fb(Coefficient(1));
        for (const DenFactor& f : r.den_) {
            const int ma = multiplicity(a.den_, f.poly);
            const int mb = multiplicity(b.den_, f.poly);
            if (f.mult > ma) fa = fa * f.poly.pow(static_cast<unsigned>(f.mult - ma));
            if (f.mult > mb) fb = fb * f.poly.pow(static_cast<unsigned>(f.mult - mb));
        }
        r.num_ = a.num_ * fa + b.num_ * fb;
    }
    reduce_roots(r);
    return r;
}

NormalForm operator*(const NormalForm& a, const NormalForm& b) {
    if (a.is_zero() || b.is_zero()) return NormalForm();
    NormalForm r;
    r.num_ = a.num_ * b.num_;
    r.den_ = b.den_.empty() ? a.den_ : a.den_.empty() ? b.den_ : merge_den(a.den_, b.den_, true);
    reduce_roots(r);
    return r;
}

NormalForm NormalForm::inverse() const {
    if (is_zero()) throw AlgebraError("division by zero");
    NormalForm r;
    r.num_ = den_poly();
    Poly n = num_;
    Base root = find_root(*this);
    if (root) {
        std::vector<Term> with, without;
        for (const Term& t : n.terms()) {
            if (t.mono.contains(root))
                with.push_back({t.mono.without(root), t.coeff});
            else
                without.push_back(t);
        }
        if (!with.empty()) {
            Poly A = Poly::from_terms(without);
            Poly B = Poly::from_terms(with);
            const Poly& R = root->arg->num();
            Poly conj = A - B.times(Monomial(root, Exponent(1)), Coefficient(1));
            n = A * A - B * B * R;
            if (n.is_zero()) throw AlgebraError("division by zero");
            r.num_ = r.num_ * conj;
        }
    }
    CanonicalSplit s = canonical_split(n);
    mpq_class carry(1);
    Monomial inv = s.unit_mono.pow(Exponent(-1), carry);
    r.num_ = r.num_.times(inv, Coefficient(carry) / s.unit_coeff);
    if (!s.primitive.is_one()) r.den_.push_back({s.primitive, 1});
    reduce_roots(r);
    return r;
}

Base find_root(const NormalForm& a) {
    for (const Term& t : a.num().terms())
        for (const Power& p : t.mono.factors())
            if (p.base->kind == BaseKind::Root) return p.base;
    return nullptr;
}

std::string NormalForm::serialize() const {
    std::string s;
    auto poly = [&](const Poly& p) {
        s += "[";
        for (const Term& t : p.terms()) {
            s += t.coeff.str();
            for (const Power& f : t.mono.factors()) s += "*{" + f.base->key + "}^" + f.exp.str();
            s += ";";
        }
        s += "]";
    };
    poly(num_);
    for (const DenFactor& d : den_) {
        s += "/";
        poly(d.poly);
        s += "^" + std::to_string(d.mult);
    }
    return s;
}

// ---------------------------------------------------------------- powers

NormalForm coefficient_power(const Coefficient& c, Exponent q) {
    if (q.is_integer()) {
        std::int64_t k = q.num();
        if (k == 0) return NormalForm(Coefficient(1));
        Coefficient base = k < 0 ? c.inverse() : c;
        if (k < 0) k = -k;
        Coefficient result(1);
        while (k) {
            if (k & 1) result *= base;
            k >>= 1;
            if (k) base *= base;
        }
        return NormalForm(result);
    }
    if (c.is_zero()) {
        if (q > Exponent(0)) return NormalForm();
        throw AlgebraError("negative power of zero");
    }
    if (!c.is_real()) throw AlgebraError("fractional power of a non-real constant");
    mpq_class v = c.re();
    Coefficient phase(1);
    if (v < 0) {
        if (q.den() != 2) throw AlgebraError("fractional power of a negative constant leaves the Gaussian field");
        // principal branch: (-1)^q = i^(2q)
        const std::int64_t k = ((q.num() % 4) + 4) % 4;
        static const Coefficient units[4] = {Coefficient(1), Coefficient::imaginary_unit(), Coefficient(-1),
                                             -Coefficient::imaginary_unit()};
        phase = units[k];
        v = -v;
    }
    mpq_class coeff(1);
    mpq_class carry(1);
    Monomial m;
    auto apply = [&](const mpz_class& n, int sign) {
        for (auto& [p, a] : factor(n)) {
            const Exponent e = Exponent(a * sign) * q;
            coeff *= mpq_pow(p, e.floor());
            const Exponent fr = e.frac();
            if (!fr.is_zero()) m = Monomial::mul(m, Monomial(prime_base(p), fr), carry);
        }
    };
    apply(v.get_num(), 1);
    apply(v.get_den(), -1);
    coeff *= carry;
    return NormalForm::from_poly(Poly(std::move(m), phase * Coefficient(coeff)));
}

NormalForm pow(const NormalForm& a, Exponent q) {
    if (q.is_zero()) return NormalForm(Coefficient(1));
    if (a.is_polynomial() && a.num().is_single_term()) {
        const Term& t = a.num().leading();
        if (find_root(a) && !q.is_integer()) throw AlgebraError("fractional power of algebraic root");
        if (q.is_integer() && q < Exponent(0) && t.mono.empty()) return coefficient_power(t.coeff, q);
        mpq_class carry(1);
        Monomial m = t.mono.pow(q, carry);
        NormalForm c = coefficient_power(t.coeff, q);
        if (carry != 1) c = c * NormalForm(Coefficient(carry));
        return c * NormalForm::from_poly(Poly(std::move(m), Coefficient(1)));
    }
    if (a.is_zero()) {
        if (q > Exponent(0)) return NormalForm();
        throw AlgebraError("negative power of zero");
    }
    if (q.is_integer()) {
        std::int64_t k = q.num();
        NormalForm base = k < 0 ? a.inverse() : a;
        if (k < 0) k = -k;
        NormalForm result(Coefficient(1));
        while (k) {
            if (k & 1) result = result * base;
            k >>= 1;
            if (k) base = base * base;
        }
        return result;
    }
    if (q.den() == 2) return pow(make_sqrt(a), Exponent(q.num()));
    throw AlgebraError("non-half-integer power of a composite expression");
}

NormalForm make_sqrt(const NormalForm& a) {
    if (a.is_zero()) return a;
    if (a.is_polynomial() && a.num().is_single_term()) return pow(a, Exponent(1, 2));
    if (find_root(a)) throw AlgebraError("nested algebraic root");
    Poly P = a.num();
    std::vector<DenFactor> den;
    for (const DenFactor& f : a.den()) {
        if (f.mult % 2) P = P * f.poly;
        den.push_back({f.poly, (f.mult + 1) / 2});
    }
    CanonicalSplit s = canonical_split(P);
    NormalForm unit = pow(NormalForm::from_poly(Poly(s.unit_mono, s.unit_coeff)), Exponent(1, 2));
    NormalForm r;
    if (s.primitive.is_one()) {
        r = unit;
    } else if (s.primitive.is_single_term()) {
        r = unit * pow(NormalForm::from_poly(s.primitive), Exponent(1, 2));
    } else {
        Base root = intern_atom(BaseKind::Root, NormalForm::from_poly(s.primitive));
        r = unit * NormalForm::from_poly(Poly(Monomial(root, Exponent(1)), Coefficient(1)));
    }
    NormalForm d;
    d.num_ = Poly(Coefficient(1));
    d.den_ = std::move(den);
    return r * d;
}

NormalForm make_log(const NormalForm& u) {
    if (u.is_zero()) throw AlgebraError("log of zero");
    if (auto c = u.constant(); c && c->is_one()) return NormalForm();
    if (u.is_polynomial() && u.num().is_single_term()) {
        const Term& t = u.num().leading();
        if (t.coeff.is_one() && t.mono.size() == 1 && t.mono.factors()[0].base->kind == BaseKind::Exp) {
            const Power& p = t.mono.factors()[0];
            return *p.base->arg * NormalForm(Coefficient(exponent_q(p.exp)));
        }
    }
    return NormalForm::from_base(intern_atom(BaseKind::Log, u));
}

NormalForm make_exp(const NormalForm& u) {
    if (u.is_zero()) return NormalForm(Coefficient(1));
    if (u.is_polynomial() && u.num().is_single_term()) {
        const Term& t = u.num().leading();
        if (t.coeff.is_real() && t.mono.size() == 1 && t.mono.factors()[0].base->kind == BaseKind::Log &&
            t.mono.factors()[0].exp == Exponent(1)) {
            const mpq_class& r = t.coeff.re();
            if (mpz_class(r.get_num()).fits_slong_p() && mpz_class(r.get_den()).fits_slong_p()) {
                try {
                    return pow(*t.mono.factors()[0].base->arg, Exponent(r.get_num().get_si(), r.get_den().get_si()));
                } catch (const AlgebraError&) {
                }
            }
        }
    }
    if (u.is_polynomial()) {
        bool real = true;
        for (const Term& t : u.num().terms()) real = real && t.coeff.is_real();
        if (real) {
            mpz_class g = 0, l = 1;
            for (const Term& t : u.num().terms()) {
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.re().get_num_mpz_t());
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.re().get_den_mpz_t());
            }
            mpq_class content(g, l);
            content.canonicalize();
            if (u.num().leading().coeff.re() < 0) content = -content;
            if (content != 1 && g.fits_slong_p() && l.fits_slong_p()) {
                NormalForm u0 = NormalForm::from_poly(u.num().scaled(Coefficient(mpq_class(1 / content))));
                Base e = intern_atom(BaseKind::Exp, u0);
                const Exponent k(content.get_num().get_si(), content.get_den().get_si());
                return NormalForm::from_poly(Poly(Monomial(e, k), Coefficient(1)));
            }
        }
    }
    return NormalForm::from_base(intern_atom(BaseKind::Exp, u));
}

// ---------------------------------------------------------------- calculus

namespace {

Poly partial_poly(const Poly& p, Base b) {
    std::vector<Term> out;
    for (const Term& t : p.terms()) {
        const Exponent e = t.mono.degree(b);
        if (e.is_zero()) continue;
        out.push_back({t.mono.with(b, e - Exponent(1)), t.coeff * Coefficient(exponent_q(e))});
    }
    return Poly::from_terms(std::move(out));
}

class Differentiator {
public:
    Differentiator(Base wrt, const DiffRules& rules, bool total) : wrt_(wrt), rules_(rules), total_(total) {}

    NormalForm of(const NormalForm& a) {
        NormalForm dn = of_poly(a.num());
        if (a.is_polynomial()) return dn;
        // (N/D)' = (N' - N * sum m_i d_i'/d_i) / D
        NormalForm n = NormalForm::from_poly(a.num());
        NormalForm acc = dn;
        for (const DenFactor& f : a.den()) {
            NormalForm dd = of_poly(f.poly);
            if (dd.is_zero()) continue;
            acc = acc - n * dd * NormalForm(Coefficient(f.mult)) / NormalForm::from_poly(f.poly);
        }
        NormalForm inv_den = NormalForm::from_poly(a.den_poly()).inverse();
        return acc * inv_den;
    }

    NormalForm of_poly(const Poly& p) {
        NormalForm acc;
        for (Base b : p.bases()) {
            const NormalForm& db = base(b);
            if (db.is_zero()) continue;
            acc += NormalForm::from_poly(partial_poly(p, b)) * db;
        }
        return acc;
    }

    const NormalForm& base(Base b) {
        auto it = cache_.find(b);
        if (it != cache_.end()) return it->second;
        NormalForm d = compute(b);
        return cache_.emplace(b, std::move(d)).first->second;
    }

private:
    NormalForm compute(Base b) {
        if (b == wrt_) return NormalForm(Coefficient(1));
        switch (b->kind) {
            case BaseKind::Prime:
                return NormalForm();
            case BaseKind::Variable: {
                if (wrt_->kind != BaseKind::Variable) return NormalForm();
                auto it = rules_.chain.find({b->name, wrt_->name});
                return it == rules_.chain.end() ? NormalForm() : it->second;
            }
            case BaseKind::Jet: {
                if (!total_ || wrt_->kind != BaseKind::Variable) return NormalForm();
                auto fn = rules_.functions.find(b->name);
                if (fn == rules_.functions.end()) return NormalForm();
                NormalForm acc;
                for (const std::string& a : fn->second) {
                    const NormalForm& da = base(variable_base(a));
                    if (da.is_zero()) continue;
                    std::vector<std::string> idx = b->index;
                    idx.push_back(a);
                    acc += NormalForm::from_base(jet_base(b->name, idx)) * da;
                }
                return acc;
            }
            case BaseKind::Log:
                return of(*b->arg) / *b->arg;
            case BaseKind::Exp:
                return NormalForm::from_base(b) * of(*b->arg);
            case BaseKind::Root: {
                // s^2 = R  =>  s' = R' s / (2R)
                NormalForm s = NormalForm::from_base(b);
                return of(*b->arg) * s / (NormalForm(Coefficient(2)) * *b->arg);
            }
        }
        return NormalForm();
    }

    Base wrt_;
    const DiffRules& rules_;
    bool total_;
    std::unordered_map<Base, NormalForm> cache_;
};

class Substituter {
public:
    Substituter(const Bindings& b, bool strict) : bindings_(b), strict_(strict) {}

    NormalForm of(const NormalForm& a) {
        NormalForm r = of_poly(a.num());
        for (const DenFactor& f : a.den()) r = r / pow(of_poly(f.poly), Exponent(f.mult));
        return r;
    }

private:
    bool affected(Base b) {
        if (bindings_.count(b)) return true;
        if (b->kind == BaseKind::Jet && strict_) return true;
        if (!is_atom(b)) return false;
        for (Base d : b->deps)
            if (bindings_.count(d) || (strict_ && d->kind == BaseKind::Jet)) return true;
        return false;
    }

    const NormalForm& power(Base b, Exponent e) {
        auto key = std::make_pair(b, std::make_pair(e.num(), e.den()));
        auto it = powers_.find(key);
        if (it != powers_.end()) return it->second;
        return powers_.emplace(key, wdvv::pow(replacement(b), e)).first->second;
    }

    const NormalForm& replacement(Base b) {
        auto it = repl_.find(b);
        if (it != repl_.end()) return it->second;
        NormalForm r;
        auto bound = bindings_.find(b);
        if (bound != bindings_.end()) {
            r = bound->second;
        } else if (b->kind == BaseKind::Jet) {
            std::string name = b->name;
            if (!b->index.empty()) {
                name += "_";
                for (const auto& s : b->index) name += s;
            }
            throw AlgebraError("unbound jet variable " + name);
        } else {
            NormalForm arg = of(*b->arg);
            if (b->kind == BaseKind::Log)
                r = make_log(arg);
            else if (b->kind == BaseKind::Exp)
                r = make_exp(arg);
            else
                r = make_sqrt(arg);
        }
        return repl_.emplace(b, std::move(r)).first->second;
    }

    NormalForm of_poly(const Poly& p) {
        std::vector<Term> untouched;
        NormalForm acc;
        for (const Term& t : p.terms()) {
            Monomial rest;
            std::vector<Power> hit;
            for (const Power& f : t.mono.factors()) {
                if (affected(f.base))
                    hit.push_back(f);
                else
                    rest = rest.with(f.base, f.exp);
            }
            if (hit.empty()) {
                untouched.push_back(t);
                continue;
            }
            NormalForm prod = NormalForm::from_poly(Poly(rest, t.coeff));
            for (const Power& f : hit) prod = prod * power(f.base, f.exp);
            acc += prod;
        }
        if (!untouched.empty()) acc += NormalForm::from_poly(Poly::from_terms(std::move(untouched)));
        return acc;
    }

    const Bindings& bindings_;
    bool strict_;
    std::unordered_map<Base, NormalForm> repl_;
    std::map<std::pair<Base, std::pair<std::int64_t, std::int64_t>>, NormalForm> powers_;
};

}  // namespace

NormalForm diff(const NormalForm& a, Base wrt, const DiffRules& rules, bool total) {
    Differentiator d(wrt, rules, total);
    return d.of(a);
}

NormalForm substitute(const NormalForm& a, const Bindings& bindings, bool strict_jets) {
    if (bindings.empty() && !strict_jets) return a;
    Substituter s(bindings, strict_jets);
    return s.of(a);
}

std::vector<std::pair<Monomial, Poly>> collect(const Poly& p, const std::function<bool(Base)>& select) {
    std::unordered_map<Monomial, std::vector<Term>, MonomialHash> groups;
    for (const Term& t : p.terms()) {
        Monomial key, rest;
        for (const Power& f : t.mono.factors()) {
            if (select(f.base))
                key = key.with(f.base, f.exp);
            else
                rest = rest.with(f.base, f.exp);
        }
        groups[key].push_back({rest, t.coeff});
    }
    std::vector<std::pair<Monomial, Poly>> out;
    out.reserve(groups.size());
    for (auto& [k, v] : groups) out.emplace_back(k, Poly::from_terms(std::move(v)));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return compare(a.first, b.first) > 0; });
    return out;
}

namespace {

std::string base_name(Base b) {
    switch (b->kind) {
        case BaseKind::Variable:
            return b->name;
        case BaseKind::Jet: {
            std::string s = b->name;
            if (!b->index.empty()) s += "_";
            for (const auto& i : b->index) s += i;
            return s;
        }
        case BaseKind::Log:
            return "log(" + debug_string(*b->arg) + ")";
        case BaseKind::Exp:
            return "exp(" + debug_string(*b->arg) + ")";
        case BaseKind::Root:
            return "sqrt(" + debug_string(*b->arg) + ")";
        case BaseKind::Prime:
            return b->prime.get_str();
    }
    return "?";
}

}  // namespace

std::string debug_string(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < p.terms().size(); ++i) {
        const Term& t = p.terms()[i];
        if (i) s += " + ";
        s += t.coeff.str();
        for (const Power& f : t.mono.factors()) {
            s += "*" + base_name(f.base);
            if (f.exp != Exponent(1)) s += "^(" + f.exp.str() + ")";
        }
    }
    return s;
}

std::string debug_string(const NormalForm& a) {
    std::string s = "(" + debug_string(a.num()) + ")";
    for (const DenFactor& d : a.den()) s += "/(" + debug_string(d.poly) + ")^" + std::to_string(d.mult);
    return s;
}

}  // namespace wdvv
