#include "wdvv/lie.hpp"

#include <algorithm>
#include <cmath>

namespace wdvv {

namespace {

const DiffRules& jet_rules() {
    static const DiffRules r = [] {
        DiffRules d;
        d.declare_function("f", {"x", "y"});
        return d;
    }();
    return r;
}

Base fx_base(JetIndex idx) { return jet_base("f", std::move(idx)); }
NormalForm jet(JetIndex idx) { return NormalForm::from_base(fx_base(std::move(idx))); }

NormalForm total_d(const NormalForm& a, const std::string& v) { return diff(a, variable_base(v), jet_rules(), true); }
NormalForm partial_d(const NormalForm& a, Base b) { return diff(a, b, jet_rules(), false); }

JetIndex extended(JetIndex j, const std::string& v) {
    j.push_back(v);
    std::sort(j.begin(), j.end());
    return j;
}

}  // namespace

std::string VectorField::str() const {
    return "(" + render(xi) + ", " + render(eta) + ", " + render(phi) + ")";
}

Context lie_context() {
    Context c;
    c.declare_function("f", {"x", "y"});
    return c;
}

VectorField make_field(const std::string& xi, const std::string& eta, const std::string& phi) {
    const Context c = lie_context();
    return {nf(xi, c), nf(eta, c), nf(phi, c)};
}

const std::vector<VectorField>& reference_basis() {
    static const std::vector<VectorField> b = {
        make_field("1", "0", "0"),         make_field("0", "1", "0"),     make_field("x", "0", "3/2*f"),
        make_field("0", "y", "3/2*f"),     make_field("0", "0", "x*y"),   make_field("0", "0", "x^2"),
        make_field("0", "0", "y^2"),       make_field("0", "0", "x"),     make_field("0", "0", "y"),
        make_field("0", "0", "1"),
    };
    return b;
}

int field_degree(const VectorField& v) {
    const Base x = variable_base("x"), y = variable_base("y"), f = fx_base({});
    long best = 0;
    for (const NormalForm& c : v.components()) {
        if (!c.is_polynomial()) throw AlgebraError("field component is not polynomial");
        for (const Term& t : c.num().terms()) {
            Exponent e = t.mono.degree(x) + t.mono.degree(y) + t.mono.degree(f);
            if (!e.is_integer()) throw AlgebraError("field component is not polynomial");
            best = std::max<long>(best, e.num());
        }
    }
    return static_cast<int>(best);
}

std::map<JetIndex, NormalForm> prolong3(const VectorField& v) {
    const NormalForm q = v.phi - v.xi * jet({"x"}) - v.eta * jet({"y"});
    std::map<JetIndex, NormalForm> dq{{{}, q}};
    std::map<JetIndex, NormalForm> out;
    const std::vector<JetIndex> order = {{"x"}, {"y"}, {"x", "x"}, {"x", "y"}, {"y", "y"},
                                         {"x", "x", "x"}, {"x", "x", "y"}, {"x", "y", "y"}, {"y", "y", "y"}};
    for (const JetIndex& j : order) {
        JetIndex parent = j;
        const std::string last = parent.back();
        parent.pop_back();
        dq[j] = total_d(dq.at(parent), last);
        out[j] = dq[j] + v.xi * jet(extended(j, "x")) + v.eta * jet(extended(j, "y"));
    }
    return out;
}

NormalForm symmetry_residual(const VectorField& v) {
    auto p = prolong3(v);
    NormalForm r = p.at({"x", "x", "x"}) * jet({"y", "y", "y"}) + jet({"x", "x", "x"}) * p.at({"y", "y", "y"}) -
                   p.at({"x", "x", "y"}) * jet({"x", "y", "y"}) - jet({"x", "x", "y"}) * p.at({"x", "y", "y"});
    Bindings shell{{fx_base({"y", "y", "y"}), normalize(ferapontov_pde().on_shell_value)}};
    return substitute(r, shell);
}

NormalForm apply(const VectorField& v, const NormalForm& g) {
    NormalForm r;
    if (!v.xi.is_zero()) r += v.xi * partial_d(g, variable_base("x"));
    if (!v.eta.is_zero()) r += v.eta * partial_d(g, variable_base("y"));
    if (!v.phi.is_zero()) r += v.phi * partial_d(g, fx_base({}));
    return r;
}

VectorField commutator(const VectorField& v, const VectorField& w) {
    return {apply(v, w.xi) - apply(w, v.xi), apply(v, w.eta) - apply(w, v.eta), apply(v, w.phi) - apply(w, v.phi)};
}

std::optional<Vec> express(const VectorField& v, const std::vector<VectorField>& basis) {
    std::vector<std::vector<NormalForm>> b;
    for (const auto& e : basis) b.push_back(e.components());
    return express_in(b, v.components());
}

ClosureError::ClosureError(std::size_t i_, std::size_t j_)
    : std::runtime_error("bracket of basis elements " + std::to_string(i_ + 1) + " and " + std::to_string(j_ + 1) +
                         " leaves the span"),
      i(i_), j(j_) {}

LieAlgebra structure_constants(const std::vector<VectorField>& basis) {
    LieAlgebra g;
    g.basis = basis;
    const std::size_t n = basis.size();
    g.c.assign(n, std::vector<Vec>(n, Vec(n)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto e = express(commutator(basis[i], basis[j]), basis);
            if (!e) throw ClosureError(i, j);
            g.c[i][j] = *e;
            for (std::size_t k = 0; k < n; ++k) g.c[j][i][k] = -(*e)[k];
        }
    return g;
}

bool LieAlgebra::antisymmetric() const {
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j)
            for (std::size_t k = 0; k < dim(); ++k)
                if (c[i][j][k] != -c[j][i][k]) return false;
    return true;
}

std::vector<std::array<std::size_t, 3>> LieAlgebra::jacobi_failures() const {
    std::vector<std::array<std::size_t, 3>> bad;
    const std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Vec acc(n);
                for (std::size_t m = 0; m < n; ++m) {
                    const Coefficient &a = c[j][k][m], &b = c[k][i][m], &d = c[i][j][m];
                    for (std::size_t l = 0; l < n; ++l) {
                        if (!a.is_zero()) acc[l] += a * c[i][m][l];
                        if (!b.is_zero()) acc[l] += b * c[j][m][l];
                        if (!d.is_zero()) acc[l] += d * c[k][m][l];
                    }
                }
                if (std::any_of(acc.begin(), acc.end(), [](const Coefficient& x) { return !x.is_zero(); }))
                    bad.push_back({i, j, k});
            }
    return bad;
}

DeterminingResult solve_determining(int max_degree) {
    if (max_degree < 0) throw std::invalid_argument("degree must be non-negative");
    DeterminingResult r;
    r.max_degree = max_degree;
    const NormalForm x = NormalForm::variable("x"), y = NormalForm::variable("y"), f = jet({});
    std::vector<NormalForm> monos;
    for (int a = 0; a <= max_degree; ++a)
        for (int b = 0; a + b <= max_degree; ++b)
            for (int c = 0; a + b + c <= max_degree; ++c) monos.push_back(pow(x, a) * pow(y, b) * pow(f, c));
    std::vector<VectorField> fields;
    for (int comp = 0; comp < 3; ++comp)
        for (const NormalForm& m : monos) {
            VectorField v;
            (comp == 0 ? v.xi : comp == 1 ? v.eta : v.phi) = m;
            fields.push_back(v);
        }
    r.unknowns = fields.size();
    std::vector<NormalForm> res;
    res.reserve(fields.size());
    for (const auto& v : fields) res.push_back(symmetry_residual(v));
    for (const Vec& c : linear_relations(res, &r.equations)) {
        VectorField v;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!c[i].is_zero()) v = v + fields[i].scaled(NormalForm(c[i]));
        r.solutions.push_back(v);
    }
    std::vector<VectorField> ref;
    for (std::size_t k = 0; k < reference_basis().size(); ++k)
        if (field_degree(reference_basis()[k]) <= max_degree) {
            r.reference_indices.push_back(k);
            ref.push_back(reference_basis()[k]);
        }
    bool ok = r.solutions.size() == ref.size();
    for (const auto& s : r.solutions) {
        auto e = express(s, ref);
        ok = ok && e.has_value();
        r.in_reference.push_back(e ? *e : Vec());
    }
    for (const auto& v : ref) ok = ok && express(v, r.solutions).has_value();
    r.span_equal = ok;
    return r;
}

// ---------------------------------------------------------------- eps functions

EpsFunction::EpsFunction(long c) {
    if (c != 0) t_[Exponent(0)] = {mpq_class(c)};
}

EpsFunction EpsFunction::constant(const mpq_class& c) {
    EpsFunction e;
    e.add(Exponent(0), 0, c);
    return e;
}

EpsFunction EpsFunction::eps() {
    EpsFunction e;
    e.add(Exponent(0), 1, mpq_class(1));
    return e;
}

EpsFunction EpsFunction::exp_rate(Exponent r) {
    EpsFunction e;
    e.add(r, 0, mpq_class(1));
    return e;
}

void EpsFunction::add(Exponent r, std::size_t k, const mpq_class& c) {
    if (sgn(c) == 0) return;
    auto& p = t_[r];
    if (p.size() <= k) p.resize(k + 1);
    p[k] += c;
    trim();
}

void EpsFunction::trim() {
    for (auto it = t_.begin(); it != t_.end();) {
        auto& p = it->second;
        while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
        if (p.empty())
            it = t_.erase(it);
        else
            ++it;
    }
}

EpsFunction operator+(const EpsFunction& a, const EpsFunction& b) {
    EpsFunction r = a;
    for (const auto& [rate, p] : b.t_)
        for (std::size_t k = 0; k < p.size(); ++k) r.add(rate, k, p[k]);
    return r;
}

EpsFunction EpsFunction::operator-() const {
    EpsFunction r = *this;
    for (auto& [rate, p] : r.t_)
        for (auto& c : p) c = -c;
    return r;
}

EpsFunction operator-(const EpsFunction& a, const EpsFunction& b) { return a + (-b); }

EpsFunction operator*(const EpsFunction& a, const EpsFunction& b) {
    EpsFunction r;
    for (const auto& [ra, pa] : a.t_)
        for (const auto& [rb, pb] : b.t_)
            for (std::size_t i = 0; i < pa.size(); ++i)
                for (std::size_t j = 0; j < pb.size(); ++j) r.add(ra + rb, i + j, pa[i] * pb[j]);
    return r;
}

EpsFunction EpsFunction::derivative() const {
    // (p e^{r e})' = (p' + r p) e^{r e}
    EpsFunction r;
    for (const auto& [rate, p] : t_) {
        const mpq_class rq(rate.num(), rate.den());
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (k > 0) r.add(rate, k - 1, p[k] * static_cast<long>(k));
            r.add(rate, k, p[k] * rq);
        }
    }
    return r;
}

mpq_class EpsFunction::at_zero() const {
    mpq_class s = 0;
    for (const auto& [rate, p] : t_) s += p[0];
    return s;
}

double EpsFunction::value(double e) const {
    double s = 0;
    for (const auto& [rate, p] : t_) {
        double poly = 0;
        for (std::size_t k = p.size(); k-- > 0;) poly = poly * e + p[k].get_d();
        s += poly * std::exp(static_cast<double>(rate.num()) / static_cast<double>(rate.den()) * e);
    }
    return s;
}

NormalForm EpsFunction::to_nf() const {
    const NormalForm e = NormalForm::variable("eps");
    NormalForm s;
    for (const auto& [rate, p] : t_) {
        NormalForm poly;
        for (std::size_t k = 0; k < p.size(); ++k)
            if (sgn(p[k]) != 0) poly += NormalForm(Coefficient(p[k])) * pow(e, static_cast<std::int64_t>(k));
        s += rate.is_zero() ? poly : poly * make_exp(NormalForm(Coefficient(mpq_class(rate.num(), rate.den()))) * e);
    }
    return s;
}

EpsFunction EpsFunction::from_nf(const NormalForm& a) {
    if (!a.is_polynomial()) throw AlgebraError("eps function with a denominator");
    const Base eps = variable_base("eps");
    const NormalForm e = NormalForm::variable("eps");
    EpsFunction out;
    for (const Term& t : a.num().terms()) {
        if (!t.coeff.is_real()) throw AlgebraError("eps function with a complex coefficient");
        Exponent rate(0);
        std::int64_t k = 0;
        for (const Power& p : t.mono.factors()) {
            if (p.base == eps && p.exp.is_integer() && p.exp.num() >= 0) {
                k = p.exp.num();
            } else if (p.base->kind == BaseKind::Exp && *p.base->arg == e) {
                rate = p.exp;
            } else {
                throw AlgebraError("not an eps function: " + debug_string(a));
            }
        }
        out.add(rate, static_cast<std::size_t>(k), t.coeff.re());
    }
    return out;
}

std::string EpsFunction::str() const { return render(to_nf()); }

// ---------------------------------------------------------------- adjoint action

Matrix ad_matrix(const LieAlgebra& g, std::size_t i) {
    const std::size_t n = g.dim();
    Matrix m(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) m(k, j) = g.c[j][i][k];
    return m;
}

namespace {

std::vector<mpq_class> char_poly(const Matrix& a) {
    // Faddeev-LeVerrier; returns c[0..n] with c[n] = 1
    const std::size_t n = a.rows();
    std::vector<mpq_class> c(n + 1);
    c[n] = 1;
    Matrix m(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        Matrix next = a * m;
        for (std::size_t i = 0; i < n; ++i) next(i, i) += Coefficient(c[n - k + 1]);
        m = next;
        Matrix am = a * m;
        Coefficient tr;
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        if (!tr.is_real()) throw AlgebraError("complex characteristic polynomial");
        c[n - k] = -tr.re() / static_cast<long>(k);
    }
    return c;
}

mpq_class horner(const std::vector<mpq_class>& p, const mpq_class& x) {
    mpq_class s = 0;
    for (std::size_t k = p.size(); k-- > 0;) s = s * x + p[k];
    return s;
}

std::vector<mpq_class> deflate(const std::vector<mpq_class>& p, const mpq_class& r) {
    const std::size_t n = p.size() - 1;
    std::vector<mpq_class> q(n);
    mpq_class carry = 0;
    for (std::size_t k = n; k-- > 0;) {
        carry = carry * r + p[k + 1];
        q[k] = carry;
    }
    return q;
}

std::vector<mpz_class> divisors(mpz_class v) {
    v = abs(v);
    std::vector<mpz_class> out;
    for (mpz_class d = 1; d * d <= v; ++d)
        if (v % d == 0) {
            out.push_back(d);
            if (d * d != v) out.push_back(v / d);
        }
    return out;
}

}  // namespace

std::vector<std::pair<mpq_class, int>> rational_eigenvalues(const Matrix& m) {
    std::vector<mpq_class> p = char_poly(m);
    std::vector<std::pair<mpq_class, int>> out;
    int zeros = 0;
    while (p.size() > 1 && sgn(p[0]) == 0) {
        p.erase(p.begin());
        ++zeros;
    }
    if (zeros) out.push_back({mpq_class(0), zeros});
    while (p.size() > 1) {
        mpz_class l = 1;
        for (const auto& c : p) l = lcm(l, c.get_den());
        const mpz_class a0 = mpz_class(p.front() * l), an = mpz_class(p.back() * l);
        bool found = false;
        for (const mpz_class& num : divisors(a0)) {
            for (const mpz_class& den : divisors(an)) {
                for (int s : {1, -1}) {
                    mpq_class r(num * s, den);
                    r.canonicalize();
                    if (sgn(horner(p, r)) != 0) continue;
                    int mult = 0;
                    while (p.size() > 1 && sgn(horner(p, r)) == 0) {
                        p = deflate(p, r);
                        ++mult;
                    }
                    out.push_back({r, mult});
                    found = true;
                    break;
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found) throw AlgebraError("characteristic polynomial does not split over the rationals");
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

EpsMatrix adjoint_matrix_exp(const LieAlgebra& g, std::size_t i) {
    const Matrix m = ad_matrix(g, i);
    const std::size_t n = m.rows();
    const auto eig = rational_eigenvalues(m);
    Matrix P(n, n);
    std::size_t col = 0;
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    for (const auto& [lam, mult] : eig) {
        Matrix shifted = m - Matrix::identity(n).scaled(Coefficient(lam));
        Matrix k = Matrix::identity(n);
        for (int t = 0; t < mult; ++t) k = k * shifted;
        auto ns = nullspace(k);
        if (ns.size() != static_cast<std::size_t>(mult)) throw AlgebraError("generalized eigenspace has the wrong dimension");
        ranges.push_back({col, col + ns.size()});
        for (const Vec& v : ns) {
            for (std::size_t r = 0; r < n; ++r) P(r, col) = v[r];
            ++col;
        }
    }
    auto Pinv = inverse(P);
    if (!Pinv) throw AlgebraError("generalized eigenvectors are dependent");
    EpsMatrix out(n, std::vector<EpsFunction>(n));
    for (std::size_t b = 0; b < eig.size(); ++b) {
        const auto& [lam, mult] = eig[b];
        Matrix E(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                Coefficient s;
                for (std::size_t a = ranges[b].first; a < ranges[b].second; ++a) s += P(r, a) * (*Pinv)(a, c);
                E(r, c) = s;
            }
        const Matrix shifted = m - Matrix::identity(n).scaled(Coefficient(lam));
        const Exponent rate(lam.get_num().get_si(), lam.get_den().get_si());
        Matrix term = E;
        mpq_class fact = 1;
        for (int k = 0; k < mult; ++k) {
            if (k > 0) {
                term = shifted * term;
                fact *= k;
            }
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c) {
                    if (term(r, c).is_zero()) continue;
                    EpsFunction piece = EpsFunction::exp_rate(rate) * EpsFunction::constant(term(r, c).re() / fact);
                    for (int p = 0; p < k; ++p) piece = piece * EpsFunction::eps();
                    out[r][c] = out[r][c] + piece;
                }
        }
    }
    return out;
}

std::vector<EpsFunction> adjoint_action(const LieAlgebra& g, std::size_t i, std::size_t j) {
    EpsMatrix m = adjoint_matrix_exp(g, i);
    std::vector<EpsFunction> col(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) col[k] = m[k][j];
    return col;
}

// ---------------------------------------------------------------- subalgebra families

std::optional<std::vector<NormalForm>> combination_coefficients(const std::string& text) {
    NormalForm a = nf(text);
    if (!a.is_polynomial()) return std::nullopt;
    std::vector<NormalForm> coeff(10);
    NormalForm rebuilt;
    for (int k = 0; k < 10; ++k) {
        const Base vk = variable_base("v" + std::to_string(k + 1));
        coeff[k] = NormalForm::from_poly(a.num().coefficient(vk, Exponent(1)));
        rebuilt += coeff[k] * NormalForm::from_base(vk);
    }
    if (rebuilt != a) return std::nullopt;
    return coeff;
}

FamilyCheck check_family(const std::string& combination) {
    FamilyCheck r;
    r.expr = combination;
    auto c = combination_coefficients(combination);
    if (!c) return r;
    r.coefficients = *c;
    r.in_span = true;
    VectorField v;
    for (std::size_t k = 0; k < 10; ++k)
        if (!(*c)[k].is_zero()) v = v + reference_basis()[k].scaled((*c)[k]);
    r.is_symmetry = !v.is_zero() && symmetry_residual(v).is_zero();
    return r;
}

ClaimResult check_claim(const LieAlgebra& g, const NormalizationClaim& claim) {
    ClaimResult r;
    r.id = claim.id;
    auto e = combination_coefficients(claim.element);
    if (!e) {
        r.detail = "element is not a combination of the basis";
        return r;
    }
    const EpsMatrix m = adjoint_matrix_exp(g, claim.generator);
    const std::size_t n = m.size();
    r.transformed.assign(n, NormalForm());
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            if (!(*e)[j].is_zero() && !m[k][j].is_zero()) r.transformed[k] += m[k][j].to_nf() * (*e)[j];
    bool others_same = true;
    for (std::size_t k = 0; k < n; ++k)
        if (k != claim.target && r.transformed[k] != (*e)[k]) others_same = false;
    switch (claim.kind) {
        case ClaimKind::Cancel: {
            Bindings b{{variable_base("eps"), nf(claim.value)}};
            const NormalForm left = substitute(r.transformed[claim.target], b);
            r.holds = others_same && left.is_zero() && !(*e)[claim.target].is_zero();
            r.detail = "target coefficient " + render(r.transformed[claim.target]) + " vanishes at eps = " + claim.value;
            break;
        }
        case ClaimKind::Scale:
            r.holds = others_same && r.transformed[claim.target] == nf(claim.value) * (*e)[claim.target];
            r.detail = "target coefficient becomes " + render(r.transformed[claim.target]);
            break;
        case ClaimKind::Invariant:
            r.holds = others_same && r.transformed[claim.target] == (*e)[claim.target];
            r.detail = "element unchanged";
            break;
    }
    return r;
}

}  // namespace wdvv

namespace wdvv {

namespace {

std::size_t basis_index(const std::string& name, const Record& r) {
    if (name.size() < 2 || name[0] != 'v') throw FixtureError(r.file, r.line, "bad basis name '" + name + "'");
    const int k = std::stoi(name.substr(1));
    if (k < 1 || k > 10) throw FixtureError(r.file, r.line, "basis index out of range: " + name);
    return static_cast<std::size_t>(k - 1);
}

std::string render_combination(const std::vector<NormalForm>& c) {
    NormalForm s;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * NormalForm::variable("v" + std::to_string(k + 1));
    return render(s);
}

}  // namespace

std::vector<VectorField> basis_from_records(const std::vector<Record>& rs) {
    std::vector<VectorField> out;
    for (const Record* r : of_kind(rs, "generator")) out.push_back(make_field(r->at("xi"), r->at("eta"), r->at("phi")));
    return out;
}

std::vector<TableEntryCheck> check_commutator_table(const LieAlgebra& g, const std::vector<Record>& rs) {
    std::vector<TableEntryCheck> out;
    for (const Record* r : of_kind(rs, "commutator")) {
        const std::size_t i = basis_index(r->name, *r);
        for (const auto& [key, text] : r->fields) {
            TableEntryCheck c;
            c.i = i;
            c.j = basis_index(key, *r);
            c.expected = text;
            std::vector<NormalForm> got(g.dim());
            for (std::size_t k = 0; k < g.dim(); ++k) got[k] = NormalForm(g.c[c.i][c.j][k]);
            c.computed = render_combination(got);
            auto want = combination_coefficients(text);
            c.match = want && *want == got;
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::vector<TableEntryCheck> check_adjoint_table(const LieAlgebra& g, const std::vector<Record>& rs) {
    std::vector<TableEntryCheck> out;
    for (const Record* r : of_kind(rs, "adjoint")) {
        const std::size_t i = basis_index(r->name, *r);
        const EpsMatrix m = adjoint_matrix_exp(g, i);
        for (const auto& [key, text] : r->fields) {
            TableEntryCheck c;
            c.i = i;
            c.j = basis_index(key, *r);
            c.expected = text;
            std::vector<NormalForm> got(g.dim());
            for (std::size_t k = 0; k < g.dim(); ++k) got[k] = m[k][c.j].to_nf();
            c.computed = render_combination(got);
            auto want = combination_coefficients(text);
            c.match = false;
            if (want) {
                c.match = true;
                for (std::size_t k = 0; k < g.dim(); ++k)
                    if (EpsFunction::from_nf((*want)[k]) != m[k][c.j]) c.match = false;
            }
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::vector<NormalizationClaim> claims_from_records(const std::vector<Record>& rs) {
    std::vector<NormalizationClaim> out;
    for (const Record* r : of_kind(rs, "claim")) {
        NormalizationClaim c;
        c.id = r->name;
        c.generator = basis_index(r->at("generator"), *r);
        c.element = r->at("element");
        const std::string& kind = r->at("kind");
        if (kind == "cancel")
            c.kind = ClaimKind::Cancel;
        else if (kind == "scale")
            c.kind = ClaimKind::Scale;
        else if (kind == "invariant")
            c.kind = ClaimKind::Invariant;
        else
            throw FixtureError(r->file, r->line, "unknown claim kind '" + kind + "'");
        c.target = basis_index(r->at("target"), *r);
        c.value = r->get("value", "");
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace wdvv
