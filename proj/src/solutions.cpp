#include "wdvv/solutions.hpp"

#include "wdvv/linalg.hpp"
#include "wdvv/numeric.hpp"
#include "wdvv/reductions.hpp"

#include <cmath>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>
#include <set>
#include <sstream>

namespace wdvv {

namespace {

const std::set<std::string> kCoords{"x", "y", "t"};
const std::set<std::string> kParams{"k", "c", "alpha", "beta", "gamma", "delta"};

std::string strip(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!strip(cur).empty()) out.push_back(strip(cur));
    return out;
}

// "a: b, c: d"
std::map<std::string, std::string> parse_pairs(const Record& r, const std::string& key) {
    std::map<std::string, std::string> out;
    for (const auto& item : split(r.get(key, ""), ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw FixtureError(r.file, r.line, key + ": expected 'a: b' pairs");
        out[strip(item.substr(0, colon))] = strip(item.substr(colon + 1));
    }
    return out;
}

NormalForm var(const std::string& n) { return NormalForm::variable(n); }

NormalForm dvar(const NormalForm& g, const std::string& v) { return diff(g, variable_base(v), DiffRules{}, false); }

bool mentions_any(const NormalForm& a, const std::set<std::string>& names) {
    for (Base b : a.leaf_bases())
        if (b->kind == BaseKind::Variable && names.count(b->name)) return true;
    return false;
}

}  // namespace

Context SolutionEntry::context() const {
    Context c;
    if (!atom.empty()) c.roots[atom] = parse(atom_radicand);
    return c;
}

SolutionEntry solution_from_record(const Record& r) {
    SolutionEntry e;
    e.label = r.name;
    e.f = r.at("f");
    e.F = r.at("F");
    const auto chart = split(r.get("chart", "y, t"), ',');
    if (chart.size() != 2 || chart[0] == chart[1]) throw FixtureError(r.file, r.line, "chart needs two distinct coordinates");
    e.chart = {chart[0], chart[1]};
    for (const auto& c : chart)
        if (!kCoords.count(c)) e.parametric_vars.push_back(c);
    for (const char* c : {"x", "y", "t"})
        if (const std::string* v = r.find(c)) e.link[c] = *v;
    e.atom = r.get("root", "");
    e.atom_radicand = e.atom.empty() ? "" : r.at("radicand");
    e.constraint = r.get("constraint", "");
    e.solve_for = e.constraint.empty() ? "" : r.at("solve_for");
    e.reduction = r.get("reduction", "");
    for (const char* k : {"f", "F", "x", "y", "t"})
        if (const std::string* v = r.find(std::string("corrected_") + k)) e.corrected[k] = *v;
    e.prime_of = r.get("prime_of", "");
    if (!e.prime_of.empty()) {
        e.prime_map = parse_pairs(r, "prime_map");
        if (e.prime_map.empty()) e.prime_map = {{"x", "y"}, {"y", "x"}};
    }
    e.derived = r.get("derived", "");
    e.core = r.get("core", "false") == "true";
    e.quasi_homogeneous = r.get("quasi_homogeneous", "false") == "true";
    e.sample_scale = parse_pairs(r, "sample_scale");

    // symbols allowed in F and the link
    std::set<std::string> allowed = kCoords;
    allowed.insert(kParams.begin(), kParams.end());
    allowed.insert(e.parametric_vars.begin(), e.parametric_vars.end());
    if (e.derived == "f1") allowed.insert({"P4", "P8"});
    const Context ctx = e.context();
    std::vector<std::string> texts{e.F};
    for (const auto& [k, v] : e.link) texts.push_back(v);
    for (const auto& [k, v] : e.corrected) {
        if (k != "f" && !e.link.count(k) && k != "F") throw FixtureError(r.file, r.line, "corrected_" + k + " without a printed " + k);
        if (k != "f") texts.push_back(v);
    }
    for (const auto& text : texts) {
        Expr ex;
        try {
            ex = parse(text, ctx);
        } catch (const ParseError& err) {
            throw FixtureError(r.file, r.line, "[row " + r.name + "]: " + err.what());
        }
        for (const auto& s : free_variables(ex))
            if (!allowed.count(s)) throw FixtureError(r.file, r.line, "[row " + r.name + "]: unexpected symbol " + s);
    }
    return e;
}

std::vector<SolutionEntry> solutions_from_records(const std::vector<Record>& rs) {
    std::vector<SolutionEntry> out;
    for (const Record* r : of_kind(rs, "row")) out.push_back(solution_from_record(*r));
    return out;
}

// ---------------------------------------------------------------- charts

Partials chart_partials(const NormalForm& g, const NormalForm& a, const NormalForm& b,
                        const std::array<std::string, 2>& coords, int max_order, const Partials& shortcuts) {
    const NormalForm au = dvar(a, coords[0]), av = dvar(a, coords[1]);
    const NormalForm bu = dvar(b, coords[0]), bv = dvar(b, coords[1]);
    const NormalForm det = au * bv - av * bu;
    if (det.is_zero()) throw ChartError("singular Jacobian");
    const NormalForm inv = det.inverse();
    auto da = [&](const NormalForm& h) { return (dvar(h, coords[0]) * bv - dvar(h, coords[1]) * bu) * inv; };
    auto db = [&](const NormalForm& h) { return (au * dvar(h, coords[1]) - av * dvar(h, coords[0])) * inv; };
    Partials out;
    out[{0, 0}] = g;
    for (int n = 1; n <= max_order; ++n) {
        for (int i = n; i >= 0; --i) {
            const int j = n - i;
            out[{i, j}] = i > 0 ? da(out.at({i - 1, j})) : db(out.at({i, j - 1}));
        }
        // an equal but smaller expression keeps the next order cheap
        for (int i = 0; i <= n; ++i) {
            auto it = shortcuts.find({i, n - i});
            if (it != shortcuts.end() && (out.at({i, n - i}) - it->second).is_zero()) out[{i, n - i}] = it->second;
        }
    }
    return out;
}

namespace {

struct Coordinates {
    std::array<std::string, 2> chart;
    NormalForm x, y, t;
    Bindings to_chart;  // x, y, t that are not chart coordinates
};

Coordinates coordinates(const SolutionEntry& e, const std::map<std::string, NormalForm>& link) {
    Coordinates c;
    c.chart = e.chart;
    auto coord = [&](const std::string& n) {
        if (n == e.chart[0] || n == e.chart[1]) {
            if (link.count(n)) throw ChartError(e.label + ": " + n + " is a chart coordinate and also linked");
            return var(n);
        }
        auto it = link.find(n);
        if (it == link.end()) throw ChartError(e.label + ": missing link for " + n);
        for (Base b : it->second.leaf_bases())
            if (b->kind == BaseKind::Variable && kCoords.count(b->name) && b->name != e.chart[0] &&
                b->name != e.chart[1])
                throw ChartError(e.label + ": link for " + n + " uses " + b->name + ", not a chart coordinate");
        c.to_chart[variable_base(n)] = it->second;
        return it->second;
    };
    c.x = coord("x");
    c.y = coord("y");
    c.t = coord("t");
    return c;
}

}  // namespace

ImplicitChart build_chart(const SolutionEntry& e) {
    const ParsedEntry p = parse_entry(e);
    const Coordinates c = coordinates(e, p.link);
    ImplicitChart ch;
    ch.coords = e.chart;
    ch.x = c.x;
    ch.y = c.y;
    ch.t = c.t;
    ch.jacobian = {{{dvar(c.y, e.chart[0]), dvar(c.y, e.chart[1])}, {dvar(c.t, e.chart[0]), dvar(c.t, e.chart[1])}}};
    ch.det = ch.jacobian[0][0] * ch.jacobian[1][1] - ch.jacobian[0][1] * ch.jacobian[1][0];
    if (ch.det.is_zero()) throw ChartError(e.label + ": singular Jacobian of (y, t) in (" + e.chart[0] + ", " + e.chart[1] + ")");
    const NormalForm inv = ch.det.inverse();
    ch.inverse = {{{ch.jacobian[1][1] * inv, -ch.jacobian[0][1] * inv}, {-ch.jacobian[1][0] * inv, ch.jacobian[0][0] * inv}}};
    return ch;
}

// ---------------------------------------------------------------- parsing

namespace {

const F1Polynomials& f1_cache() {
    static const F1Polynomials p = derive_f1_polynomials();
    return p;
}

}  // namespace

ParsedTrees parse_entry_trees(const SolutionEntry& e, const EntryOptions& opt) {
    const Context ctx = e.context();
    ParsedTrees t;
    auto text = [&](const std::string& key, const std::string& printed) {
        auto it = opt.replace.find(key);
        return it == opt.replace.end() ? printed : it->second;
    };
    t.f = parse(text("f", e.f), ctx);
    t.F = parse(text("F", e.F), ctx);
    for (const auto& [k, v] : e.link) t.link[k] = parse(text(k, v), ctx);
    ExprBindings b;
    if (e.derived == "f1") {
        b.emplace_back(Expr::var("P4"), to_expr(f1_cache().P4));
        b.emplace_back(Expr::var("P8"), to_expr(f1_cache().P8));
    }
    if (!e.constraint.empty()) {
        const NormalForm sol = apply_constraint(var(e.solve_for), Constraint{e.constraint, e.solve_for});
        b.emplace_back(Expr::var(e.solve_for), to_expr(sol));
    }
    for (const auto& [k, v] : opt.fix) b.emplace_back(Expr::var(k), Expr::constant(v));
    if (!b.empty()) {
        t.f = substitute(t.f, b);
        t.F = substitute(t.F, b);
        for (auto& [k, v] : t.link) v = substitute(v, b);
    }
    return t;
}

ParsedEntry parse_entry(const SolutionEntry& e, const EntryOptions& opt) {
    const Context ctx = e.context();
    ParsedEntry p;
    auto text = [&](const std::string& key, const std::string& printed) {
        auto it = opt.replace.find(key);
        return it == opt.replace.end() ? printed : it->second;
    };
    p.f = nf(text("f", e.f), ctx);
    p.F = nf(text("F", e.F), ctx);
    for (const auto& [k, v] : e.link) p.link[k] = nf(text(k, v), ctx);
    Bindings b;
    if (e.derived == "f1") {
        b[variable_base("P4")] = f1_cache().P4;
        b[variable_base("P8")] = f1_cache().P8;
    }
    for (const auto& [k, v] : opt.fix) b[variable_base(k)] = NormalForm(v);
    auto apply = [&](NormalForm a) {
        if (!b.empty()) a = substitute(a, b);
        if (!e.constraint.empty()) a = apply_constraint(a, Constraint{e.constraint, e.solve_for});
        return a;
    };
    p.f = apply(p.f);
    p.F = apply(p.F);
    for (auto& [k, v] : p.link) v = apply(v);
    return p;
}

// ---------------------------------------------------------------- F1 polynomials

F1Polynomials derive_f1_polynomials() {
    SolutionEntry e;
    e.label = "F1";
    e.atom = "lambda";
    e.atom_radicand = "1 + alpha/x + beta/x^2 + gamma/x^3";
    const Context ctx = e.context();
    const NormalForm f = nf("2*I*sqrt(2)/3*(x*y)^(3/2)*lambda", ctx);
    const NormalForm t_shape = nf("I*sqrt(2)*y^(3/2)*x^(-9/2)*lambda^(-3)", ctx);
    const NormalForm F_shape = nf("I*sqrt(2)*y^(5/2)*x^(-15/2)*lambda^(-5)", ctx);
    const Partials fp = partials_upto3(f, "x", "y");

    F1Polynomials out;
    out.P4 = fp.at({2, 0}) / t_shape;
    if (!out.P4.is_polynomial() || mentions_any(out.P4, {"y"}) || find_root(out.P4))
        throw ChartError("F1: f_xx does not have the shape i sqrt(2) y^(3/2) x^(-9/2) lambda^(-3) P4(x)");
    for (const Term& term : out.P4.num().terms()) {
        const Exponent d = term.mono.degree(variable_base("x"));
        if (!d.is_integer() || d.num() < 0 || d.num() > 4) throw ChartError("F1: P4 is not a polynomial of degree <= 4 in x");
    }

    // F = F_shape * P8 with P8 = sum of weight-8 monomials x^a alpha^i beta^j gamma^l
    // (a + i + 2j + 3l = 8). At fixed t, F_y = x t - f_x (this gives
    // F_ty = x and F_yy = -f_xy at once); only first derivatives are needed.
    const NormalForm t = t_shape * out.P4;
    const NormalForm x_y = -dvar(t, "y") / dvar(t, "x");  // dx/dy at fixed t
    auto d_y_fixed_t = [&](const NormalForm& g) { return dvar(g, "y") + dvar(g, "x") * x_y; };
    std::vector<NormalForm> xa;
    for (int a = 0; a <= 8; ++a) xa.push_back(d_y_fixed_t(F_shape * pow(var("x"), Exponent(a))));
    std::vector<std::vector<NormalForm>> basis;
    std::vector<NormalForm> monos;
    for (int l = 0; 3 * l <= 8; ++l)
        for (int j = 0; 3 * l + 2 * j <= 8; ++j)
            for (int i = 0; 3 * l + 2 * j + i <= 8; ++i) {
                const int a = 8 - 3 * l - 2 * j - i;
                const NormalForm m = pow(var("alpha"), Exponent(i)) * pow(var("beta"), Exponent(j)) *
                                     pow(var("gamma"), Exponent(l));
                basis.push_back({m * xa[static_cast<std::size_t>(a)]});
                monos.push_back(m * pow(var("x"), Exponent(a)));
            }
    const std::vector<NormalForm> target{var("x") * t - fp.at({1, 0})};
    const auto c = express_in(basis, target);
    if (!c) throw ChartError("F1: no weight-8 polynomial P8 satisfies the inverse relations");
    NormalForm P8;
    for (std::size_t n = 0; n < monos.size(); ++n)
        if (!(*c)[n].is_zero()) P8 += NormalForm((*c)[n]) * monos[n];
    out.P8 = P8;
    return out;
}

std::vector<Record> f1_polynomial_records(const F1Polynomials& p) {
    Record r4;
    r4.kind = "derived";
    r4.name = "P4";
    r4.fields = {{"value", render(p.P4)},
                 {"shape", "t = I*sqrt(2)*y^(3/2)*x^(-9/2)*lambda^(-3)*P4"},
                 {"method", "exact division of f_xx by the shape factor"}};
    Record r8;
    r8.kind = "derived";
    r8.name = "P8";
    r8.fields = {{"value", render(p.P8)},
                 {"shape", "F = I*sqrt(2)*y^(5/2)*x^(-15/2)*lambda^(-5)*P8"},
                 {"method", "linear solve of F_y = x t - f_x at fixed t over weight-8 monomials"}};
    return {r4, r8};
}

// ---------------------------------------------------------------- verification

bool RowResult::relations_ok() const {
    for (const auto& r : relations)
        if (!r.holds) return false;
    return true;
}

namespace {

struct RowData {
    HodographData data;
    Coordinates coords;
    bool f_chart = false, F_chart = false;
    NormalForm F_in_chart;
};

RowData row_data(const SolutionEntry& e, const EntryOptions& opt) {
    const ParsedEntry p = parse_entry(e, opt);
    const ParsedTrees tr = parse_entry_trees(e, opt);
    RowData r;
    r.coords = coordinates(e, p.link);
    const Coordinates& c = r.coords;
    std::set<std::string> foreign{"t"};
    foreign.insert(e.parametric_vars.begin(), e.parametric_vars.end());
    auto to_chart = [&](const NormalForm& a) { return c.to_chart.empty() ? a : substitute(a, c.to_chart); };
    // composing trees before normalizing: radicands that collapse under the
    // link (x/y - k y = 4 k^2 t^2) never become sign-split root atoms
    ExprBindings link_trees;
    for (const auto& [k, v] : tr.link) link_trees.emplace_back(Expr::var(k), v);
    auto tree_in_chart = [&](const Expr& a) { return normalize(substitute(a, link_trees)); };

    auto natural = [&](const char* a, const char* b) {
        return std::set<std::string>{e.chart[0], e.chart[1]} == std::set<std::string>{a, b};
    };
    r.f_chart = !natural("x", "y") || mentions_any(p.f, foreign);
    if (!r.f_chart) {
        for (auto& [k, v] : partials_upto3(p.f, "x", "y")) r.data.f[k] = to_chart(v);
    } else {
        r.data.f = chart_partials(tree_in_chart(tr.f), c.x, c.y, c.chart);
    }
    foreign = {"x"};
    foreign.insert(e.parametric_vars.begin(), e.parametric_vars.end());
    r.F_chart = !natural("y", "t") || mentions_any(p.F, foreign);
    r.F_in_chart = tree_in_chart(tr.F);
    if (!r.F_chart) {
        for (auto& [k, v] : partials_upto3(p.F, "y", "t")) r.data.F[k] = to_chart(v);
    } else {
        // F_y = x t - f_x and the inverse relations at second order, each
        // used only once proven equal
        const Partials shortcuts{{{1, 0}, c.x * c.t - r.data.f.at({1, 0})},
                                 {{2, 0}, -r.data.f.at({1, 1})},
                                 {{1, 1}, c.x},
                                 {{0, 2}, r.data.f.at({0, 2})}};
        r.data.F = chart_partials(r.F_in_chart, c.y, c.t, c.chart, 3, shortcuts);
    }
    r.data.x = c.x;
    r.data.y = c.y;
    r.data.t = c.t;
    return r;
}

}  // namespace

RowResult verify_entry(const SolutionEntry& e, const EntryOptions& opt) {
    const RowData r = row_data(e, opt);
    const auto& f = r.data.f;
    const auto& F = r.data.F;
    RowResult out;
    out.label = e.label;
    out.f_residual = f.at({3, 0}) * f.at({0, 3}) - f.at({2, 1}) * f.at({1, 2}) - NormalForm(1);
    out.F_residual = F.at({2, 1}) * F.at({2, 1}) - F.at({0, 3}) - F.at({1, 2}) * F.at({3, 0});
    out.relations = check_relations(forward_relations(), r.data);
    for (auto& rc : check_relations(inverse_relations(), r.data)) out.relations.push_back(std::move(rc));
    out.chart_used = r.f_chart || r.F_chart;
    if (r.F_chart) {
        const auto& c = r.coords;
        const NormalForm yu = dvar(c.y, c.chart[0]), yv = dvar(c.y, c.chart[1]);
        const NormalForm tu = dvar(c.t, c.chart[0]), tv = dvar(c.t, c.chart[1]);
        const NormalForm det = yu * tv - yv * tu;
        out.det_nonzero = !det.is_zero();
        // F_ty both ways: d/dt of F_y against d/dy of F_t
        const Partials Fy = chart_partials(F.at({1, 0}), c.y, c.t, c.chart, 1);
        const Partials Ft = chart_partials(F.at({0, 1}), c.y, c.t, c.chart, 1);
        out.mixed_symmetric = (Fy.at({0, 1}) - Ft.at({1, 0})).is_zero();
    }
    return out;
}

RowResult verify_explicit_entry(const SolutionEntry& e) {
    if (!e.parametric_vars.empty()) throw std::invalid_argument(e.label + ": row has parametric coordinates");
    return verify_entry(e);
}

RowResult verify_parametric_entry(const SolutionEntry& e) {
    build_chart(e);
    return verify_entry(e);
}

QuasiHomogeneity entry_quasi_homogeneity(const SolutionEntry& e) {
    const RowData r = row_data(e, {});
    const NormalForm F = r.F_in_chart;
    return quasi_homogeneity(F, r.data.y * r.data.F.at({1, 0}), r.data.t * r.data.F.at({0, 1}), r.data.y, r.data.t,
                             true);
}

bool prime_matches(const SolutionEntry& prime, const SolutionEntry& partner, const EntryOptions& opt,
                   const EntryOptions& partner_opt) {
    const NormalForm mine = parse_entry(prime, opt).f;
    Bindings b;
    for (const auto& [from, to] : prime.prime_map) b[variable_base(from)] = var(to);
    const ParsedEntry theirs = parse_entry(partner, partner_opt);
    if ((substitute(theirs.f, b) - mine).is_zero() == false) return false;
    // when t itself is renamed (a parameter of the primed row) the renamed
    // links must agree too; otherwise t is the primed row's own coordinate
    if (!prime.prime_map.count("t")) return true;
    const ParsedEntry own = parse_entry(prime, opt);
    for (const auto& [k, v] : theirs.link) {
        auto m = prime.prime_map.find(k);
        if (m == prime.prime_map.end()) continue;
        auto it = own.link.find(m->second);
        if (it == own.link.end()) continue;
        if (!(substitute(v, b) - it->second).is_zero()) return false;
    }
    return true;
}

// ---------------------------------------------------------------- differentiated rows

DifferentiatedRow differentiated_from_record(const Record& r) {
    DifferentiatedRow d;
    d.label = r.name;
    d.f = r.at("f");
    d.z = r.at("z");
    d.dz_dx = r.at("dz_dx");
    d.dz_dy = r.at("dz_dy");
    d.eliminate = r.get("eliminate", "");
    d.phi_zz = r.all("phi_zz");
    if (d.phi_zz.empty()) throw FixtureError(r.file, r.line, "[differentiated " + r.name + "] lacks phi_zz");
    d.corrected_f = r.get("corrected_f", "");
    return d;
}

std::vector<NormalForm> verify_differentiated(const DifferentiatedRow& r, const std::string& f) {
    Reduction red;
    red.id = r.label;
    red.z = r.z;
    red.dz_dx = r.dz_dx;
    red.dz_dy = r.dz_dy;
    red.ansatz = f;
    red.eliminate = r.eliminate;
    const OdeResidual ode = apply_reduction(red);
    const Base z = variable_base("z");
    std::vector<NormalForm> out;
    for (const auto& text : r.phi_zz) {
        const NormalForm s = nf(text);
        const NormalForm ds = diff(s, z, DiffRules{}, false);
        NormalForm res = substitute(ode.residual, Bindings{{ode_jet("phi", "z", 2), s}, {ode_jet("phi", "z", 3), ds}});
        // lower jets must not survive
        for (int n = 0; n < 2; ++n)
            if (res.depends_on(ode_jet("phi", "z", n)))
                throw ReductionError(r.label + ": reduced equation involves phi derivatives below second order");
        out.push_back(res);
    }
    return out;
}

// ---------------------------------------------------------------- numeric sampling

namespace {

std::string f_name(int i, int j) {
    return i + j == 0 ? "f" : "f_" + std::string(static_cast<std::size_t>(i), 'x') + std::string(static_cast<std::size_t>(j), 'y');
}
std::string F_name(int i, int j) {  // i y-derivatives, j t-derivatives; index sorted t < y
    return i + j == 0 ? "F" : "F_" + std::string(static_cast<std::size_t>(j), 't') + std::string(static_cast<std::size_t>(i), 'y');
}

double to_double_abs(const Complex& z) { return abs(z).to_double(); }

}  // namespace

std::map<std::string, double> sample_entry(const SolutionEntry& e, std::uint64_t seed, int count, long digits,
                                           const EntryOptions& opt) {
    const ParsedTrees tr = parse_entry_trees(e, opt);
    const long bits = digits_to_bits(digits);
    std::set<std::string> names;
    for (const Expr* x : {&tr.f, &tr.F})
        for (const auto& s : free_variables(*x)) names.insert(s);
    for (const auto& [k, v] : tr.link)
        for (const auto& s : free_variables(v)) names.insert(s);
    names.insert(e.chart[0]);
    names.insert(e.chart[1]);
    std::set<std::string> params;
    for (const auto& n : names)
        if (!kCoords.count(n) && n != e.chart[0] && n != e.chart[1]) params.insert(n);

    std::vector<std::pair<std::string, Expr>> relations;
    for (const auto& [l, r] : forward_relations()) relations.emplace_back(render(l) + " = " + render(r), l - r);
    for (const auto& [l, r] : inverse_relations()) relations.emplace_back(render(l) + " = " + render(r), l - r);

    std::map<std::string, double> worst;
    auto note = [&](const std::string& k, double v) {
        auto& w = worst[k];
        if (std::isnan(v) || v > w) w = v;
    };
    std::set<std::string> foreign_f{"t"}, foreign_F{"x"};
    foreign_f.insert(e.parametric_vars.begin(), e.parametric_vars.end());
    foreign_F.insert(e.parametric_vars.begin(), e.parametric_vars.end());
    auto uses = [](const Expr& a, const std::set<std::string>& s) {
        for (const auto& n : free_variables(a))
            if (s.count(n)) return true;
        return false;
    };
    const bool f_chart = uses(tr.f, foreign_f), F_chart = uses(tr.F, foreign_F);

    std::vector<std::string> sample_names(params.begin(), params.end());
    sample_names.push_back(e.chart[0]);
    sample_names.push_back(e.chart[1]);
    for (int n = 0; n < count; ++n) {
        const Point pt = sample_point(sample_names, seed + static_cast<std::uint64_t>(n));
        std::map<std::string, Complex> values;
        for (const auto& [k, v] : pt) {
            Complex c = Complex::from(Coefficient(v), bits);
            if (auto s = e.sample_scale.find(k); s != e.sample_scale.end())
                c = c * eval_complex(parse(s->second), {}, bits, false);
            values.emplace(k, c);
        }
        // series in the chart coordinates
        std::function<Taylor2(const Coefficient&)> konst = [bits](const Coefficient& c) {
            return Taylor2::constant(Complex::from(c, bits));
        };
        auto series_in = [&](const std::map<std::string, Taylor2>& leaves) {
            return [&, leaves](const Expr& ex) {
                std::function<Taylor2(const ExprNode&)> leaf = [&](const ExprNode& nd) {
                    const std::string s = symbol_name(nd);
                    if (auto it = leaves.find(s); it != leaves.end()) return it->second;
                    if (auto it = values.find(s); it != values.end()) return Taylor2::constant(it->second);
                    throw UnboundSymbolError("unbound symbol " + s);
                };
                return evaluate<Taylor2>(ex, leaf, konst, false);
            };
        };
        std::map<std::string, Taylor2> chart_leaves{
            {e.chart[0], Taylor2::coordinate(values.at(e.chart[0]), 0)},
            {e.chart[1], Taylor2::coordinate(values.at(e.chart[1]), 1)}};
        auto in_chart = series_in(chart_leaves);
        std::map<std::string, Taylor2> coord;
        for (const char* c : {"x", "y", "t"}) {
            if (c == e.chart[0] || c == e.chart[1]) coord.emplace(c, chart_leaves.at(c));
            else coord.emplace(c, in_chart(tr.link.at(c)));
        }
        // f partials in (x, y)
        Taylor2 fs, Fs;
        if (!f_chart) {
            fs = series_in({{"x", Taylor2::coordinate(coord.at("x").value(), 0)},
                            {"y", Taylor2::coordinate(coord.at("y").value(), 1)}})(tr.f);
        } else {
            ExprBindings b;
            for (const auto& [k, v] : tr.link) b.emplace_back(Expr::var(k), v);
            fs = reexpand(in_chart(substitute(tr.f, b)), coord.at("x"), coord.at("y"));
        }
        if (!F_chart) {
            Fs = series_in({{"y", Taylor2::coordinate(coord.at("y").value(), 0)},
                            {"t", Taylor2::coordinate(coord.at("t").value(), 1)}})(tr.F);
        } else {
            ExprBindings b;
            for (const auto& [k, v] : tr.link) b.emplace_back(Expr::var(k), v);
            Fs = reexpand(in_chart(substitute(tr.F, b)), coord.at("y"), coord.at("t"));
        }
        std::map<std::string, Complex> point;
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; i + j <= 3; ++j) {
                point.emplace(f_name(i, j), fs.derivative(i, j));
                point.emplace(F_name(i, j), Fs.derivative(i, j));
            }
        for (const char* c : {"x", "y", "t"}) point.emplace(c, coord.at(c).value());
        const Complex one = Complex::from(Coefficient(1), bits);
        note("f_pde", to_double_abs(point.at("f_xxx") * point.at("f_yyy") - point.at("f_xxy") * point.at("f_xyy") - one));
        note("F_pde", to_double_abs(point.at("F_tyy") * point.at("F_tyy") - point.at("F_ttt") -
                                    point.at("F_tty") * point.at("F_yyy")));
        for (const auto& [name, ex] : relations) note(name, to_double_abs(eval_complex(ex, point, bits, false)));
    }
    return worst;
}

// ---------------------------------------------------------------- driver

namespace {

std::string relation_summary(const RowResult& r) {
    std::string s;
    for (const auto& rc : r.relations)
        if (!rc.holds) s += (s.empty() ? "" : "; ") + rc.name + " residual " + render(rc.residual);
    return s;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::vector<Check> verify_solutions(const std::vector<Record>& rs, std::uint64_t seed, long digits, int jobs) {
    std::vector<Check> out;
    const std::vector<SolutionEntry> entries = solutions_from_records(rs);
    std::map<std::string, const SolutionEntry*> by_label;
    for (const auto& e : entries) by_label[e.label] = &e;
    const double tol = 1e-30;
    auto add = [&](const std::string& id, Status s, std::string detail) {
        out.push_back(Check{"solutions." + id, "solutions_table", s, clip(std::move(detail))});
    };

    auto row_checks = [&](const SolutionEntry& e) {
    std::vector<Check> out;
    auto add = [&](const std::string& id, Status s, std::string detail) {
        out.push_back(Check{"solutions." + id, "solutions_table", s, clip(std::move(detail))});
    };
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const RowResult printed = verify_entry(e);
        const auto num = sample_entry(e, seed, 20, digits);
        std::optional<RowResult> corrected;
        std::map<std::string, double> num_corrected;
        const EntryOptions fixed_text{e.corrected, {}};
        if (!e.corrected.empty()) {
            corrected = verify_entry(e, fixed_text);
            num_corrected = sample_entry(e, seed, 20, digits, fixed_text);
        }
        auto max_of = [](const std::map<std::string, double>& m, const std::vector<std::string>& keys) {
            double v = 0;
            for (const auto& k : keys)
                if (auto it = m.find(k); it != m.end()) v = std::max(v, it->second);
            return v;
        };
        std::vector<std::string> rel_keys;
        for (const auto& rc : printed.relations) rel_keys.push_back(rc.name);

        // printed passes -> pass; printed fails with a numeric witness and the
        // correction passes -> discrepancy; otherwise fail
        auto judge = [&](const std::string& id, bool sym_ok, double witness, std::optional<bool> corr_ok,
                         double corr_witness, const std::string& detail) {
            std::string d = detail + (detail.empty() ? "" : "; ") + "numeric max " + fmt(witness);
            if (sym_ok) {
                add(id, witness < tol ? Status::Pass : Status::Fail,
                    witness < tol ? d : d + " (symbolic zero not reproduced numerically)");
                return;
            }
            if (witness <= tol) {
                add(id, Status::Fail, d + " (symbolic failure not reproduced numerically)");
                return;
            }
            if (corr_ok && *corr_ok && corr_witness < tol) {
                add(id, Status::Discrepancy, d + "; corrected form passes (numeric max " + fmt(corr_witness) + ")");
                return;
            }
            add(id, Status::Fail, d);
        };
        std::optional<bool> cf, cF, cr;
        if (corrected) {
            cf = corrected->f_ok();
            cF = corrected->F_ok();
            cr = corrected->relations_ok();
        }
        judge(e.label + ".f_pde", printed.f_ok(), max_of(num, {"f_pde"}), cf, max_of(num_corrected, {"f_pde"}),
              printed.f_ok() ? "" : "residual " + render(printed.f_residual));
        judge(e.label + ".F_pde", printed.F_ok(), max_of(num, {"F_pde"}), cF, max_of(num_corrected, {"F_pde"}),
              printed.F_ok() ? "" : "residual " + render(printed.F_residual));
        judge(e.label + ".hodograph", printed.relations_ok(), max_of(num, rel_keys), cr, max_of(num_corrected, rel_keys),
              relation_summary(printed));
        if (printed.chart_used)
            add(e.label + ".chart", from_bool(printed.det_nonzero && printed.mixed_symmetric),
                std::string("jacobian ") + (printed.det_nonzero ? "nonsingular" : "singular") + ", F_ty " +
                    (printed.mixed_symmetric ? "symmetric" : "asymmetric"));

        // k pinned to 1
        {
            const ParsedEntry p = parse_entry(e);
            bool has_k = false;
            for (const NormalForm* a : {&p.f, &p.F}) has_k = has_k || mentions_any(*a, {"k"});
            for (const auto& [kk, v] : p.link) has_k = has_k || mentions_any(v, {"k"});
            if (has_k) {
                EntryOptions o;
                o.fix["k"] = Coefficient(1);
                o.replace = e.corrected;
                const RowResult r1 = verify_entry(e, o);
                add(e.label + ".k_equals_1", from_bool(r1.ok() == (corrected ? corrected->ok() : printed.ok())),
                    r1.ok() ? "all checks hold at k = 1" : "checks differ at k = 1");
            }
        }
        if (!e.prime_of.empty()) {
            auto it = by_label.find(e.prime_of);
            if (it == by_label.end()) {
                add(e.label + ".prime", Status::Inconclusive, "partner " + e.prime_of + " not loaded");
            } else {
                const bool ok = prime_matches(e, *it->second);
                if (ok) {
                    add(e.label + ".prime", Status::Pass, "f equals the renamed f of " + e.prime_of);
                } else if (prime_matches(e, *it->second, fixed_text, EntryOptions{it->second->corrected, {}})) {
                    add(e.label + ".prime", Status::Discrepancy,
                        "printed f is not the renamed f of " + e.prime_of + "; corrected f is");
                } else {
                    add(e.label + ".prime", Status::Fail, "f differs from the renamed f of " + e.prime_of);
                }
            }
        }
        if (e.quasi_homogeneous) {
            const QuasiHomogeneity q = entry_quasi_homogeneity(e);
            std::string d;
            for (const auto& w : q.weights) d += (d.empty() ? "" : "; ") + w[0].str() + ", " + w[1].str() + ", " + w[2].str();
            add(e.label + ".quasi_homogeneity", from_bool(q.found), q.found ? "weights (y, t, F): " + d : "no weights");
        }
        // cross-reference only when the reductions are loaded alongside
        const auto reds = of_kind(rs, "reduction");
        if (!e.reduction.empty() && !reds.empty()) {
            bool found = false;
            for (const Record* r : reds) found = found || r->name == e.reduction;
            add(e.label + ".reduction", from_bool(found), "from reduction " + e.reduction);
        }
    } catch (const std::exception& ex) {
        add(e.label + ".error", Status::Fail, ex.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (auto& c : out) c.seconds = secs;
    return out;
    };

    // rows are independent
    std::vector<std::vector<Check>> per_row(entries.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < entries.size();) per_row[i] = row_checks(entries[i]);
    };
    std::vector<std::thread> pool;
    for (int n = 1; n < std::max(1, jobs); ++n) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (auto& v : per_row)
        for (auto& c : v) out.push_back(std::move(c));

    for (const Record* r : of_kind(rs, "differentiated")) {
        const DifferentiatedRow d = differentiated_from_record(*r);
        auto all_zero = [](const std::vector<NormalForm>& v) {
            for (const auto& a : v)
                if (!a.is_zero()) return false;
            return true;
        };
        add(d.label + ".closed_form", Status::OutOfScope,
            "phi is a double quadrature of the given phi_zz; only the differentiated level is checked");
        const auto printed = verify_differentiated(d, d.f);
        if (all_zero(printed)) {
            add(d.label + ".differentiated", Status::Pass, "verified at the differentiated level");
            continue;
        }
        const bool corr = !d.corrected_f.empty() && all_zero(verify_differentiated(d, d.corrected_f));
        // numeric witness: the printed residual at a sample point
        const NormalForm& res = printed.front().is_zero() ? printed.back() : printed.front();
        double witness = 0;
        const Expr tree = to_expr(res);
        for (int n = 0; n < 5; ++n) {
            const Point pt = sample_point(point_names(res), seed + static_cast<std::uint64_t>(n));
            witness = std::max(witness, abs(eval_numeric(tree, pt, digits)).to_double());
        }
        add(d.label + ".differentiated", corr && witness > tol ? Status::Discrepancy : Status::Fail,
            "printed residual " + render(res) + "; numeric " + fmt(witness) +
                (corr ? "; corrected form verified at the differentiated level" : ""));
    }
    return out;
}

}  // namespace wdvv
