#include "wdvv/pde.hpp"

namespace wdvv {

namespace {

NormalForm var(const std::string& n) { return NormalForm::variable(n); }

NormalForm d(const NormalForm& g, const std::string& v, const DiffRules& rules) {
    return diff(g, variable_base(v), rules);
}

}  // namespace

Context PdeResidual::context() const {
    Context c;
    c.declare_function(func, {vars[0], vars[1]});
    return c;
}

const PdeResidual& ferapontov_pde() {
    static const PdeResidual p = [] {
        PdeResidual r;
        r.func = "f";
        r.vars = {"x", "y"};
        Context c = r.context();
        r.residual = parse("f_xxx*f_yyy - f_xxy*f_xyy - 1", c);
        r.on_shell_jet = parse("f_yyy", c);
        r.on_shell_value = parse("(1 + f_xxy*f_xyy)/f_xxx", c);
        return r;
    }();
    return p;
}

const PdeResidual& dubrovin_pde() {
    static const PdeResidual p = [] {
        PdeResidual r;
        r.func = "F";
        r.vars = {"y", "t"};
        Context c = r.context();
        r.residual = parse("F_tyy^2 - F_ttt - F_tty*F_yyy", c);
        r.on_shell_jet = parse("F_ttt", c);
        r.on_shell_value = parse("F_tyy^2 - F_tty*F_yyy", c);
        return r;
    }();
    return p;
}

std::map<int, NormalForm> third_partials(const NormalForm& g, const std::string& a, const std::string& b,
                                         const DiffRules& rules) {
    const NormalForm ga = d(g, a, rules), gb = d(g, b, rules);
    const NormalForm gaa = d(ga, a, rules), gab = d(ga, b, rules), gbb = d(gb, b, rules);
    return {{3, d(gaa, a, rules)}, {2, d(gaa, b, rules)}, {1, d(gab, b, rules)}, {0, d(gbb, b, rules)}};
}

NormalForm ferapontov_residual(const NormalForm& f, const DiffRules& rules) {
    auto p = third_partials(f, "x", "y", rules);
    return p[3] * p[0] - p[2] * p[1] - NormalForm(1);
}

NormalForm dubrovin_residual(const NormalForm& F, const DiffRules& rules) {
    auto p = third_partials(F, "y", "t", rules);
    // i counts y-derivatives: F_tyy = p[2], F_ttt = p[0], F_tty = p[1], F_yyy = p[3]
    return p[2] * p[2] - p[0] - p[1] * p[3];
}

namespace {

Expr tree_d(const Expr& e, const std::string& v, int n) {
    Expr r = e;
    for (int i = 0; i < n; ++i) r = differentiate(r, v);
    return r;
}

Expr tree_partial(const Expr& e, const std::string& a, int i, const std::string& b, int j) {
    return tree_d(tree_d(e, a, i), b, j);
}

}  // namespace

Expr ferapontov_residual(const Expr& f) {
    auto p = [&](int i) { return tree_partial(f, "x", i, "y", 3 - i); };
    return p(3) * p(0) - p(2) * p(1) - Expr(1);
}

Expr dubrovin_residual(const Expr& F) {
    auto p = [&](int i) { return tree_partial(F, "y", i, "t", 3 - i); };
    return p(2) * p(2) - p(0) - p(1) * p(3);
}

// ---------------------------------------------------------------- hodograph

Context hodograph_context() {
    Context c;
    c.declare_function("f", {"x", "y"});
    c.declare_function("F", {"y", "t"});
    return c;
}

std::vector<std::pair<Expr, Expr>> forward_relations() {
    const Context c = hodograph_context();
    auto p = [&](const char* a, const char* b) { return std::make_pair(parse(a, c), parse(b, c)); };
    return {p("t", "f_xx"), p("F_yyy", "f_xxy^2/f_xxx - f_xyy"), p("F_tyy", "-f_xxy/f_xxx"), p("F_tty", "1/f_xxx"),
            p("F_ttt", "f_xyy/f_xxx")};
}

std::vector<std::pair<Expr, Expr>> inverse_relations() {
    const Context c = hodograph_context();
    auto p = [&](const char* a, const char* b) { return std::make_pair(parse(a, c), parse(b, c)); };
    return {p("f_xx", "t"), p("f_xy", "-F_yy"), p("f_yy", "F_tt"), p("x", "F_ty")};
}

HodographLink make_link(HodographDirection dir, ExprBindings link) {
    HodographLink h;
    h.direction = dir;
    h.relations = dir == HodographDirection::FToCapitalF ? forward_relations() : inverse_relations();
    h.link = std::move(link);
    return h;
}

std::map<std::pair<int, int>, NormalForm> partials_upto3(const NormalForm& g, const std::string& a,
                                                         const std::string& b) {
    std::map<std::pair<int, int>, NormalForm> out;
    const DiffRules none;
    out[{0, 0}] = g;
    for (int n = 1; n <= 3; ++n)
        for (int i = n; i >= 0; --i) {
            const int j = n - i;
            out[{i, j}] = i > 0 ? d(out.at({i - 1, j}), a, none) : d(out.at({i, j - 1}), b, none);
        }
    return out;
}

namespace {

Base jet_of(const std::string& f, const std::string& a, int i, const std::string& b, int j) {
    std::vector<std::string> idx(static_cast<std::size_t>(i), a);
    idx.insert(idx.end(), static_cast<std::size_t>(j), b);
    return jet_base(f, idx);
}

}  // namespace

std::vector<RelationCheck> check_relations(const std::vector<std::pair<Expr, Expr>>& relations,
                                           const HodographData& data) {
    Bindings b;
    for (const auto& [k, v] : data.f) b[jet_of("f", "x", k.first, "y", k.second)] = v;
    for (const auto& [k, v] : data.F) b[jet_of("F", "y", k.first, "t", k.second)] = v;
    b[variable_base("x")] = data.x;
    b[variable_base("y")] = data.y;
    b[variable_base("t")] = data.t;
    std::vector<RelationCheck> out;
    for (const auto& [lhs, rhs] : relations) {
        RelationCheck r;
        r.name = render(lhs) + " = " + render(rhs);
        r.residual = substitute(normalize(lhs - rhs), b);
        r.holds = r.residual.is_zero();
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RelationCheck> hodograph_check(const NormalForm& f, const NormalForm& F, const HodographLink& link) {
    if (link.link.empty()) throw std::invalid_argument("hodograph check needs a link between (t, x, y)");
    Bindings lb;
    for (const auto& [k, v] : link.link) {
        if (k.kind() != ExprKind::Var) throw std::invalid_argument("link keys must be coordinates");
        lb[variable_base(k.node().name)] = normalize(v);
    }
    HodographData data;
    for (auto& [k, v] : partials_upto3(f, "x", "y")) data.f[k] = substitute(v, lb);
    for (auto& [k, v] : partials_upto3(F, "y", "t")) data.F[k] = substitute(v, lb);
    data.x = substitute(var("x"), lb);
    data.y = substitute(var("y"), lb);
    data.t = substitute(var("t"), lb);
    return check_relations(link.relations, data);
}

// ---------------------------------------------------------------- Lax pair

const LaxPair& lax_pair() {
    static const LaxPair lp = [] {
        Context c = ferapontov_pde().context();
        auto m = [&](std::array<const char*, 9> s) {
            ExprMatrix3 r;
            for (int i = 0; i < 9; ++i) r[i / 3][i % 3] = parse(s[i], c);
            return r;
        };
        LaxPair p;
        p.A = m({"0", "1", "0", "0", "f_xxy", "f_xxx", "1", "f_xyy", "f_xxy"});
        p.B = m({"0", "0", "1", "1", "f_xyy", "f_xxy", "0", "f_yyy", "f_xyy"});
        return p;
    }();
    return lp;
}

Matrix3 mat_mul(const Matrix3& a, const Matrix3& b) {
    Matrix3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

LaxReport lax_compatibility() {
    const LaxPair& lp = lax_pair();
    const DiffRules rules = ferapontov_pde().context().diff_rules();
    Matrix3 A, B;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            A[i][j] = normalize(lp.A[i][j]);
            B[i][j] = normalize(lp.B[i][j]);
        }
    LaxReport r;
    r.curl_zero = true;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            r.curl[i][j] = d(A[i][j], "y", rules) - d(B[i][j], "x", rules);
            r.curl_zero = r.curl_zero && r.curl[i][j].is_zero();
        }
    const Matrix3 ab = mat_mul(A, B), ba = mat_mul(B, A);
    Bindings shell{{jet_base("f", {"y", "y", "y"}), normalize(ferapontov_pde().on_shell_value)}};
    r.commutator_zero = true;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            r.commutator_off_shell[i][j] = ab[i][j] - ba[i][j];
            r.commutator[i][j] = substitute(r.commutator_off_shell[i][j], shell);
            r.commutator_zero = r.commutator_zero && r.commutator[i][j].is_zero();
        }
    return r;
}

LaxTrees lax_trees(const Expr& f) {
    const Expr fxxx = tree_partial(f, "x", 3, "y", 0), fxxy = tree_partial(f, "x", 2, "y", 1),
               fxyy = tree_partial(f, "x", 1, "y", 2), fyyy = tree_partial(f, "x", 0, "y", 3);
    const ExprMatrix3 A{{{Expr(0), Expr(1), Expr(0)}, {Expr(0), fxxy, fxxx}, {Expr(1), fxyy, fxxy}}};
    const ExprMatrix3 B{{{Expr(0), Expr(0), Expr(1)}, {Expr(1), fxyy, fxxy}, {Expr(0), fyyy, fxyy}}};
    LaxTrees t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            t.curl[i][j] = differentiate(A[i][j], "y") - differentiate(B[i][j], "x");
            std::vector<Expr> terms;
            for (int k = 0; k < 3; ++k) {
                terms.push_back(A[i][k] * B[k][j]);
                terms.push_back(-(B[i][k] * A[k][j]));
            }
            t.commutator[i][j] = Expr::sum(std::move(terms));
        }
    return t;
}

// ---------------------------------------------------------------- WDVV

WdvvReport wdvv1_check(Embedding e, const NormalForm& g) {
    WdvvReport r;
    r.embedding = e;
    const NormalForm t1 = var("t1"), t2 = var("t2"), t3 = var("t3");
    const NormalForm half(Coefficient(mpq_class(1, 2)));
    NormalForm pde;
    if (e == Embedding::Eta11Nonzero) {
        Bindings b{{variable_base("x"), t2}, {variable_base("y"), t3}};
        r.prepotential = NormalForm(Coefficient(mpq_class(1, 6))) * t1 * t1 * t1 + t1 * t2 * t3 + substitute(g, b);
        pde = substitute(ferapontov_residual(g), b);
    } else {
        Bindings b{{variable_base("y"), t2}, {variable_base("t"), t3}};
        r.prepotential = half * t1 * t1 * t3 + half * t1 * t2 * t2 + substitute(g, b);
        pde = substitute(dubrovin_residual(g), b);
    }
    const DiffRules none;
    const std::array<std::string, 3> names{"t1", "t2", "t3"};
    std::array<NormalForm, 3> d1;
    std::array<std::array<NormalForm, 3>, 3> d2;
    std::array<std::array<std::array<NormalForm, 3>, 3>, 3> c;
    for (int a = 0; a < 3; ++a) d1[a] = d(r.prepotential, names[a], none);
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) d2[a][b] = d2[b][a] = d(d1[a], names[b], none);
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b)
            for (int k = b; k < 3; ++k) {
                NormalForm v = d(d2[a][b], names[k], none);
                c[a][b][k] = c[a][k][b] = c[b][a][k] = c[b][k][a] = c[k][a][b] = c[k][b][a] = v;
            }
    r.eta_constant = true;
    Matrix eta(3, 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            r.eta[a][b] = c[0][a][b];
            auto k = r.eta[a][b].constant();
            if (!k) r.eta_constant = false;
            else eta(a, b) = *k;
        }
    if (!r.eta_constant) return r;
    auto inv = inverse(eta);
    r.eta_nondegenerate = inv.has_value();
    if (!inv) return r;
    std::array<std::array<NormalForm, 3>, 3> up;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) up[a][b] = NormalForm((*inv)(a, b));
    // c_ab^m = c_abl eta^lm
    std::array<std::array<std::array<NormalForm, 3>, 3>, 3> raised;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int m = 0; m < 3; ++m)
                for (int l = 0; l < 3; ++l)
                    if (!up[l][m].is_zero()) raised[a][b][m] += c[a][b][l] * up[l][m];
    r.all_zero = true;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int g3 = 0; g3 < 3; ++g3)
                for (int dd = 0; dd < 3; ++dd) {
                    WdvvInstance w;
                    w.index = {a + 1, b + 1, g3 + 1, dd + 1};
                    for (int m = 0; m < 3; ++m)
                        w.residual += raised[a][b][m] * c[m][g3][dd] - raised[a][g3][m] * c[m][b][dd];
                    w.zero = w.residual.is_zero();
                    w.proportional_to_pde = false;
                    if (!w.zero) {
                        ++r.nonzero_count;
                        r.all_zero = false;
                        if (!pde.is_zero()) {
                            auto k = (w.residual / pde).constant();
                            w.proportional_to_pde = k.has_value() && !k->is_zero();
                        }
                        if (w.proportional_to_pde) ++r.proportional_count;
                    }
                    r.instances.push_back(std::move(w));
                }
    return r;
}

QuasiHomogeneity quasi_homogeneity(const NormalForm& F, const NormalForm& yFy, const NormalForm& tFt,
                                   const NormalForm& y, const NormalForm& t, bool allow_affine) {
    std::vector<NormalForm> items{yFy, tFt, -F};
    if (allow_affine) {
        items.push_back(NormalForm(1));
        items.push_back(y);
        items.push_back(t);
        items.push_back(y * y);
        items.push_back(y * t);
        items.push_back(t * t);
    }
    Matrix proj(0, 3);
    for (const Vec& v : linear_relations(items)) proj.append_row({v[0], v[1], v[2]});
    QuasiHomogeneity q;
    rref(proj);
    for (std::size_t i = 0; i < proj.rows(); ++i) {
        std::array<Coefficient, 3> w{proj(i, 0), proj(i, 1), proj(i, 2)};
        if (w[0].is_zero() && w[1].is_zero() && w[2].is_zero()) continue;
        q.weights.push_back(w);
    }
    q.found = !q.weights.empty();
    return q;
}

QuasiHomogeneity quasi_homogeneity_check(const NormalForm& F, bool allow_affine) {
    const NormalForm y = var("y"), t = var("t");
    const DiffRules none;
    return quasi_homogeneity(F, y * d(F, "y", none), t * d(F, "t", none), y, t, allow_affine);
}

}  // namespace wdvv
