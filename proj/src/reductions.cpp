#include "wdvv/reductions.hpp"

#include "wdvv/lie.hpp"
#include "wdvv/numeric.hpp"
#include "wdvv/pde.hpp"

#include <map>

namespace wdvv {

namespace {

std::string strip(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::pair<std::string, std::string> split_binding(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ReductionError("expected 'name = expression': " + text);
    return {strip(text.substr(0, eq)), strip(text.substr(eq + 1))};
}

bool has_jet(const NormalForm& a) {
    for (Base b : a.leaf_bases())
        if (b->kind == BaseKind::Jet) return true;
    return false;
}

DiffRules ode_rules(const std::string& func, const std::string& var) {
    DiffRules d;
    d.declare_function(func, {var});
    return d;
}

}  // namespace

Context Reduction::context() const {
    Context c;
    c.declare_function(func, {"z"});
    return c;
}

DiffRules Reduction::rules() const {
    DiffRules d = context().diff_rules();
    const Context c = context();
    d.set_chain("z", "x", nf(dz_dx, c));
    d.set_chain("z", "y", nf(dz_dy, c));
    return d;
}

NormalForm Reduction::ode(const std::string& text) const {
    const Context c = context();
    NormalForm a = nf(text, c);
    // later lets may use earlier ones, so apply in reverse
    for (auto it = lets.rbegin(); it != lets.rend(); ++it)
        a = substitute(a, Bindings{{variable_base(it->first), nf(it->second, c)}});
    return a;
}

Reduction Reduction::effective() const {
    Reduction e = *this;
    if (has_corrected_geometry()) {
        e.z = corrected_z;
        e.dz_dx = corrected_dz_dx;
        e.dz_dy = corrected_dz_dy;
        e.corrected_z.clear();
    }
    return e;
}

Reduction reduction_from_record(const Record& r) {
    Reduction out;
    out.id = r.name;
    out.generator = r.get("generator", "");
    out.z = r.get("z", "");
    out.dz_dx = r.at("dz_dx");
    out.dz_dy = r.at("dz_dy");
    out.ansatz = r.at("ansatz");
    out.func = r.get("func", "phi");
    out.eliminate = r.get("eliminate", "");
    for (const std::string& l : r.all("let")) out.lets.push_back(split_binding(l));
    out.target = r.get("target", "");
    out.corrected = r.get("corrected", "");
    out.mirror_of = r.get("mirror_of", "");
    out.corrected_z = r.get("corrected_z", "");
    if (out.has_corrected_geometry()) {
        out.corrected_dz_dx = r.at("corrected_dz_dx");
        out.corrected_dz_dy = r.at("corrected_dz_dy");
    }
    return out;
}

std::vector<Reduction> reductions_from_records(const std::vector<Record>& rs) {
    std::vector<Reduction> out;
    for (const Record* r : of_kind(rs, "reduction")) out.push_back(reduction_from_record(*r));
    return out;
}

Base ode_jet(const std::string& func, const std::string& var, int order) {
    return jet_base(func, std::vector<std::string>(static_cast<std::size_t>(order), var));
}

int ode_order(const NormalForm& a, const std::string& func, const std::string& var) {
    int order = -1;
    for (Base b : a.leaf_bases())
        if (b->kind == BaseKind::Jet && b->name == func) {
            bool pure = true;
            for (const auto& i : b->index) pure = pure && i == var;
            if (pure) order = std::max(order, static_cast<int>(b->index.size()));
        }
    return order;
}

OdeResidual apply_reduction(const Reduction& r) {
    const Context c = r.context();
    NormalForm res = ferapontov_residual(nf(r.ansatz, c), r.rules());
    if (!r.eliminate.empty()) {
        auto [name, value] = split_binding(r.eliminate);
        res = substitute(res, Bindings{{variable_base(name), nf(value, c)}});
    }
    for (Base b : res.leaf_bases())
        if (b->kind == BaseKind::Variable && (b->name == "x" || b->name == "y"))
            throw ReductionError("reduction " + r.id + ": " + b->name + " does not cancel");
    OdeResidual out;
    out.func = r.func;
    out.residual = res;
    out.order = ode_order(res, r.func, "z");
    return out;
}

bool verify_invariant_surface(const Reduction& r) {
    auto coeffs = combination_coefficients(r.generator);
    if (!coeffs) throw ReductionError("generator is not a combination: " + r.generator);
    VectorField v;
    for (std::size_t k = 0; k < coeffs->size(); ++k)
        if (!(*coeffs)[k].is_zero()) v = v + reference_basis()[k].scaled((*coeffs)[k]);
    const NormalForm f = nf(r.ansatz, r.context());
    const DiffRules rules = r.rules();
    const NormalForm fx = diff(f, variable_base("x"), rules, true);
    const NormalForm fy = diff(f, variable_base("y"), rules, true);
    const NormalForm phi = substitute(v.phi, Bindings{{jet_base("f", {}), f}});
    NormalForm cond = v.xi * fx + v.eta * fy - phi;
    if (cond.is_zero()) return true;
    // z may still appear beside x and y; rewrite it where z(x, y) is explicit
    std::optional<NormalForm> zxy;
    try {
        zxy = nf(r.z);
    } catch (const std::exception&) {
    }
    if (!zxy) return false;
    return substitute(cond, Bindings{{variable_base("z"), *zxy}}).is_zero();
}

std::optional<NormalForm> match_ode(const NormalForm& computed, const NormalForm& target) {
    if (computed.is_zero() || target.is_zero()) return std::nullopt;
    const Poly p = computed.num() * target.den_poly();
    const Poly q = target.num() * computed.den_poly();
    const NormalForm q_lead = NormalForm::from_poly(Poly(q.leading().mono, q.leading().coeff));
    auto candidate = [&](const Term& t) -> std::optional<NormalForm> {
        NormalForm m = NormalForm::from_poly(Poly(t.mono, t.coeff)) / q_lead;
        if (has_jet(m)) return std::nullopt;
        if (computed == m * target) return m;
        return std::nullopt;
    };
    if (auto m = candidate(p.leading())) return m;
    for (const Term& t : p.terms())
        if (auto m = candidate(t)) return m;
    return std::nullopt;
}

NormalForm ode_derivative(const NormalForm& a, const std::string& func, const std::string& var) {
    return diff(a, variable_base(var), ode_rules(func, var), true);
}

namespace {

// Top jet value from an ODE linear in it, if it is.
std::optional<NormalForm> solve_top(const OdeResidual& ode) {
    const Base top = ode_jet(ode.func, ode.var, ode.order);
    const DiffRules none;
    const NormalForm d1 = diff(ode.residual, top, none, false);
    if (d1.is_zero() || !diff(d1, top, none, false).is_zero()) return std::nullopt;
    return -substitute(ode.residual, Bindings{{top, NormalForm()}}) / d1;
}

}  // namespace

Status verify_first_integral(const NormalForm& k, const OdeResidual& ode) {
    const NormalForm dk = ode_derivative(k, ode.func, ode.var);
    if (dk.is_zero()) return Status::Pass;
    if (auto top = solve_top(ode)) {
        const NormalForm on_shell = substitute(dk, Bindings{{ode_jet(ode.func, ode.var, ode.order), *top}});
        return from_bool(on_shell.is_zero());
    }
    if (match_ode(dk, ode.residual)) return Status::Pass;
    return Status::Inconclusive;
}

NormalForm apply_constraint(const NormalForm& a, const Constraint& c) {
    const Base p = variable_base(c.solve_for);
    const NormalForm rel = nf(c.relation);
    const DiffRules none;
    const NormalForm slope = diff(rel, p, none, false);
    if (slope.is_zero() || slope.depends_on(p)) throw ReductionError("constraint is not linear in " + c.solve_for);
    return substitute(a, Bindings{{p, -substitute(rel, Bindings{{p, NormalForm()}}) / slope}});
}

NormalForm ode_on_solution(const NormalForm& sol, const OdeResidual& ode, const std::optional<Constraint>& c) {
    Bindings b;
    NormalForm d = sol;
    const Base var = variable_base(ode.var);
    const DiffRules none;
    for (int n = 0; n <= std::max(ode.order, 0); ++n) {
        b[ode_jet(ode.func, ode.var, n)] = d;
        d = diff(d, var, none, false);
    }
    NormalForm res = substitute(ode.residual, b);
    return c ? apply_constraint(res, *c) : res;
}

bool verify_ode_solution(const NormalForm& sol, const OdeResidual& ode, const std::optional<Constraint>& c) {
    return ode_on_solution(sol, ode, c).is_zero();
}

NormalForm transform_ode(const OdeResidual& ode, const NormalForm& z_of_w, const NormalForm& phi_of_w) {
    const DiffRules rules = ode_rules("psi", "w");
    const Base w = variable_base("w");
    const NormalForm dz = diff(z_of_w, w, rules, true);
    if (dz.is_zero()) throw ReductionError("z(w) is constant");
    Bindings b{{variable_base(ode.var), z_of_w}};
    NormalForm d = phi_of_w;
    for (int n = 0; n <= ode.order; ++n) {
        b[ode_jet(ode.func, ode.var, n)] = d;
        d = diff(d, w, rules, true) / dz;
    }
    NormalForm out = substitute(ode.residual, b);
    Bindings back{{w, NormalForm::variable(ode.var)}};
    for (int n = 0; n <= ode.order; ++n)
        back[ode_jet("psi", "w", n)] = NormalForm::from_base(ode_jet(ode.func, ode.var, n));
    return substitute(out, back);
}

bool verify_derivative_factor(const OdeResidual& ode, const NormalForm& expected) {
    const NormalForm d = ode_derivative(ode.residual, ode.func, ode.var);
    return d == expected * NormalForm::from_base(ode_jet(ode.func, ode.var, ode.order + 1));
}

// ---------------------------------------------------------------- fixture driver

namespace {

Bindings at_bindings(const Record& r, const Context& c) {
    Bindings b;
    for (const std::string& s : r.all("at")) {
        auto [name, value] = split_binding(s);
        b[variable_base(name)] = nf(value, c);
    }
    return b;
}

OdeResidual specialise(OdeResidual o, const Bindings& b) {
    if (!b.empty()) {
        o.residual = substitute(o.residual, b);
        o.order = ode_order(o.residual, o.func, o.var);
    }
    return o;
}

// Nonzero value of computed - m * printed at a sample point, as a witness
// that the printed form is not the reduced equation.
double numeric_gap(const NormalForm& diff_expr) {
    const Point p = sample_point(point_names(diff_expr), 20240501);
    const Complex v = eval_numeric(to_expr(diff_expr), p, 50);
    return abs(v).to_double();
}

struct ReductionRun {
    Reduction red;
    std::optional<OdeResidual> ode;
    std::string error;
};

std::string id_of(const std::string& kind, const std::string& name) { return kind + "." + name; }

}  // namespace

std::vector<Check> verify_reductions(const std::vector<Record>& rs) {
    std::vector<Check> out;
    auto add = [&](std::string id, Status s, std::string detail) {
        out.push_back({std::move(id), "reductions", s, clip(std::move(detail))});
    };

    std::map<std::string, ReductionRun> runs;
    for (const Reduction& printed : reductions_from_records(rs)) {
        const Reduction r = printed.effective();
        if (printed.has_corrected_geometry()) {
            bool printed_ok = false, corrected_ok = false;
            try {
                printed_ok = verify_invariant_surface(printed);
                corrected_ok = verify_invariant_surface(r);
            } catch (const std::exception&) {
            }
            const Status s = printed_ok ? Status::Pass : corrected_ok ? Status::Discrepancy : Status::Fail;
            add(id_of(r.id, "printed_variable"), s,
                printed_ok ? "printed z = " + printed.z + " is invariant"
                           : "printed z = " + printed.z + " is not invariant under " + r.generator + "; z = " + r.z +
                                 (corrected_ok ? " is" : " is not either"));
        }
        ReductionRun run{r, std::nullopt, ""};
        try {
            run.ode = apply_reduction(r);
        } catch (const std::exception& e) {
            run.error = e.what();
        }
        runs.emplace(r.id, std::move(run));
    }
    auto ode_of = [&](const std::string& id) -> const OdeResidual& {
        auto it = runs.find(id);
        if (it == runs.end()) throw ReductionError("unknown reduction " + id);
        if (!it->second.ode) throw ReductionError("reduction " + id + " failed: " + it->second.error);
        return *it->second.ode;
    };

    for (const auto& [id, run] : runs) {
        const Reduction& r = run.red;
        if (!r.generator.empty()) {
            bool ok = false;
            std::string detail;
            try {
                ok = verify_invariant_surface(r);
                detail = ok ? "xi f_x + eta f_y - phi vanishes" : "invariant surface condition fails";
            } catch (const std::exception& e) {
                detail = e.what();
            }
            add(id_of(id, "invariant_surface"), from_bool(ok), detail);
        }
        if (!run.ode) {
            add(id_of(id, "reduce"), Status::Fail, run.error);
            continue;
        }
        const NormalForm& computed = run.ode->residual;
        if (r.target.empty()) {
            add(id_of(id, "reduce"), from_bool(run.ode->order == 3),
                "order " + std::to_string(run.ode->order) + " residual in (z, jets)");
        } else {
            const NormalForm printed = r.ode(r.target);
            if (auto m = match_ode(computed, printed)) {
                add(id_of(id, "reduce"), Status::Pass, "multiplier " + render(*m));
            } else if (!r.corrected.empty()) {
                auto mc = match_ode(computed, r.ode(r.corrected));
                if (!mc) {
                    add(id_of(id, "reduce"), Status::Fail, "matches neither the printed nor the corrected form");
                } else {
                    const double gap = numeric_gap(computed - *mc * printed);
                    add(id_of(id, "reduce"), gap > 1e-30 ? Status::Discrepancy : Status::Fail,
                        "printed form differs (sampled gap " + std::to_string(gap) + "); corrected form matches with multiplier " +
                            render(*mc));
                }
            } else {
                add(id_of(id, "reduce"), Status::Fail, "no monomial multiplier; computed " + render(computed));
            }
        }
        if (!r.mirror_of.empty()) {
            bool same = false;
            std::string detail;
            try {
                same = ode_of(r.mirror_of).residual == computed;
                detail = same ? "identical to " + r.mirror_of : "differs from " + r.mirror_of;
            } catch (const std::exception& e) {
                detail = e.what();
            }
            add(id_of(id, "mirror"), from_bool(same), detail);
        }
    }

    for (const Record* rec : of_kind(rs, "first_integral")) {
        Status s = Status::Fail;
        std::string detail;
        try {
            const Reduction& red = runs.at(rec->at("reduction")).red;
            const Context c = red.context();
            const OdeResidual ode = specialise(ode_of(red.id), at_bindings(*rec, c));
            const NormalForm k = substitute(nf(rec->at("k"), c), at_bindings(*rec, c));
            const Status got = verify_first_integral(k, ode);
            const bool expect = rec->get("expect", "holds") == "holds";
            s = got == Status::Inconclusive ? got : from_bool((got == Status::Pass) == expect);
            detail = std::string("dK/dz on shell: ") + status_name(got) + (expect ? "" : " (expected to fail)");
            if (s == Status::Pass && rec->find("equals")) {
                // K equals the given expression on solutions
                auto top = solve_top(ode);
                const NormalForm gap = nf(rec->at("equals"), c) - k;
                const bool eq = top && substitute(gap, Bindings{{ode_jet(ode.func, ode.var, ode.order), *top}}).is_zero();
                s = from_bool(eq);
                detail += eq ? "; equals " + rec->at("equals") + " on shell" : "; on-shell value mismatch";
            }
        } catch (const std::exception& e) {
            detail = e.what();
        }
        add(id_of("first_integral", rec->name), s, detail);
    }

    for (const Record* rec : of_kind(rs, "solution")) {
        Status s = Status::Fail;
        std::string detail;
        try {
            const Reduction& red = runs.at(rec->at("reduction")).red;
            const Context c = red.context();
            const OdeResidual ode = specialise(ode_of(red.id), at_bindings(*rec, c));
            std::optional<Constraint> con;
            if (rec->find("constraint")) con = Constraint{rec->at("constraint"), rec->at("solve_for")};
            const NormalForm res = ode_on_solution(nf(rec->at("phi"), c), ode, con);
            s = from_bool(res.is_zero());
            detail = res.is_zero() ? "residual vanishes" : "residual " + render(res);
            if (s == Status::Pass && rec->find("f")) {
                NormalForm fres = ferapontov_residual(nf(rec->at("f")));
                if (con) fres = apply_constraint(fres, *con);
                const bool f_ok = fres.is_zero();
                s = from_bool(f_ok);
                detail += f_ok ? "; f solves the PDE" : "; f does not solve the PDE";
            }
        } catch (const std::exception& e) {
            detail = e.what();
        }
        add(id_of("solution", rec->name), s, detail);
    }

    for (const Record* rec : of_kind(rs, "derivative_factor")) {
        Status s = Status::Fail;
        std::string detail;
        try {
            const Reduction& red = runs.at(rec->at("reduction")).red;
            const Context c = red.context();
            const OdeResidual ode = specialise(ode_of(red.id), at_bindings(*rec, c));
            const NormalForm target = rec->find("residual") ? red.ode(rec->at("residual")) : ode.residual;
            const bool ok = verify_derivative_factor({ode.func, ode.var, target, ode.order}, nf(rec->at("factor"), c));
            s = from_bool(ok);
            detail = ok ? "derivative factorises" : "derivative does not factorise as stated";
        } catch (const std::exception& e) {
            detail = e.what();
        }
        add(id_of("derivative_factor", rec->name), s, detail);
    }

    for (const Record* rec : of_kind(rs, "transform")) {
        Status s = Status::Fail;
        std::string detail;
        try {
            const Reduction& from = runs.at(rec->at("from")).red;
            const Reduction& to = runs.at(rec->at("to")).red;
            Context c = from.context();
            c.declare_function("psi", {"w"});
            Bindings from_at, to_at;
            for (const std::string& a : rec->all("from_at")) {
                auto [n, v] = split_binding(a);
                from_at[variable_base(n)] = nf(v, c);
            }
            for (const std::string& a : rec->all("to_at")) {
                auto [n, v] = split_binding(a);
                to_at[variable_base(n)] = nf(v, c);
            }
            const OdeResidual src = specialise(ode_of(from.id), from_at);
            const NormalForm moved = transform_ode(src, nf(rec->at("z_of_w"), c), nf(rec->at("phi_of_w"), c));
            const NormalForm dest = specialise(ode_of(to.id), to_at).residual;
            auto m = match_ode(moved, dest);
            const bool expect = rec->get("expect", "match") == "match";
            if (m) {
                s = expect ? Status::Pass : Status::Fail;
                detail = "transformed equation matches with multiplier " + render(*m);
            } else {
                const double gap = numeric_gap(moved * NormalForm::from_poly(dest.den_poly()) -
                                               dest * NormalForm::from_poly(moved.den_poly()));
                s = expect ? Status::Fail : Status::Discrepancy;
                detail = "no monomial multiplier between the transformed and target equations (sampled gap " +
                         std::to_string(gap) + ")";
            }
        } catch (const std::exception& e) {
            detail = e.what();
        }
        add(id_of("transform", rec->name), s, detail);
    }

    for (const Record* rec : of_kind(rs, "independence")) {
        Status s = Status::Fail;
        std::string detail;
        try {
            const OdeResidual& ode = ode_of(rec->at("reduction"));
            const std::string p = rec->at("parameter");
            const bool free = !ode.residual.depends_on(variable_base(p));
            s = from_bool(free);
            detail = free ? "residual does not involve " + p : "residual depends on " + p;
        } catch (const std::exception& e) {
            detail = e.what();
        }
        add(id_of("independence", rec->name), s, detail);
    }

    for (const Record* rec : of_kind(rs, "quadrature")) {
        const Reduction& red = runs.at(rec->at("reduction")).red;
        const Context c = red.context();
        // (i) derivative of the integrated relation against the reduction
        {
            Status s = Status::Fail;
            std::string detail;
            try {
                const NormalForm rel = red.ode(rec->at("relation"));
                const NormalForm d = ode_derivative(rel, red.func, "z");
                auto m = match_ode(ode_of(red.id).residual, d);
                s = from_bool(m.has_value());
                detail = m ? "reduced residual = " + render(*m) + " * d/dz(relation)" : "no monomial multiplier";
            } catch (const std::exception& e) {
                detail = e.what();
            }
            add(id_of("quadrature", rec->name + ".derivative"), s, detail);
        }
        // (ii) particular solution of the PDE
        if (rec->find("particular_f")) {
            const NormalForm res = ferapontov_residual(nf(rec->at("particular_f")));
            add(id_of("quadrature", rec->name + ".particular"), from_bool(res.is_zero()),
                res.is_zero() ? "f solves the PDE" : "residual " + render(res));
        }
        // (iii) integration constant on a particular phi
        if (rec->find("constant_phi")) {
            Status s = Status::Fail;
            std::string detail;
            try {
                NormalForm rel = substitute(red.ode(rec->at("relation")), at_bindings(*rec, c));
                const OdeResidual as_ode{red.func, "z", rel, ode_order(rel, red.func, "z")};
                const NormalForm on = ode_on_solution(nf(rec->at("constant_phi"), c), as_ode);
                const Base k = variable_base(rec->at("constant"));
                const DiffRules none;
                const NormalForm a = diff(on, k, none, false);
                if (a.is_zero() || a.depends_on(k)) throw ReductionError("relation is not linear in the constant");
                const NormalForm value = -substitute(on, Bindings{{k, NormalForm()}}) / a;
                const bool constant = !value.depends_on(variable_base("z"));
                const bool expected = !rec->find("constant_value") || value == nf(rec->at("constant_value"));
                s = from_bool(constant && expected);
                detail = rec->at("constant") + " = " + render(value);
            } catch (const std::exception& e) {
                detail = e.what();
            }
            add(id_of("quadrature", rec->name + ".constant"), s, detail);
        }
    }
    return out;
}

}  // namespace wdvv
