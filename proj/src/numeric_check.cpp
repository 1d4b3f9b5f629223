#include "wdvv/numeric_check.hpp"

#include "wdvv/pde.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace wdvv {

void SampleConfig::validate() const {
    if (count < 1) throw std::invalid_argument("sample count must be at least 1");
    if (digits < 30) throw std::invalid_argument("sampling needs at least 30 digits");
    if (sgn(lo) <= 0 || lo >= hi) throw std::invalid_argument("sampling box must satisfy 0 < lo < hi");
}

Point sample_in_box(const std::vector<std::string>& names, const SampleConfig& cfg, std::uint64_t index) {
    // independent stream per point: seed and index mixed through seed_seq
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<int> k(1, 255);
    Point p;
    for (const auto& n : names) {
        if (auto it = cfg.parameters.find(n); it != cfg.parameters.end()) {
            p[n] = it->second;
            continue;
        }
        mpq_class v = cfg.lo + (cfg.hi - cfg.lo) * mpq_class(k(rng), 256);
        v.canonicalize();
        p[n] = v;
    }
    return p;
}

double numeric_residual_sample(const Expr& residual, const SampleConfig& cfg) {
    cfg.validate();
    const std::set<std::string> free = free_variables(residual);
    const std::vector<std::string> names(free.begin(), free.end());
    double worst = 0;
    std::uint64_t index = 0;
    for (int n = 0; n < cfg.count; ++n) {
        for (int attempt = 0;; ++attempt) {
            try {
                const Point p = sample_in_box(names, cfg, index++);
                worst = std::max(worst, abs(eval_numeric(residual, p, cfg.digits)).to_double());
                break;
            } catch (const BranchError&) {
                if (attempt == 7) throw;
            }
        }
    }
    return worst;
}

double numeric_residual_sample(const SolutionEntry& e, const SampleConfig& cfg, const EntryOptions& opt) {
    cfg.validate();
    double worst = 0;
    for (const auto& [k, v] : sample_entry(e, cfg.seed, cfg.count, cfg.digits, opt)) {
        if (std::isnan(v)) return v;
        worst = std::max(worst, v);
    }
    return worst;
}

// ---------------------------------------------------------------- ODEs

ExplicitOde explicit_ode(const OdeResidual& ode) {
    if (ode.order != 3) throw OdeError("ODE is not third order", 0);
    const Base top = ode_jet(ode.func, ode.var, 3);
    const DiffRules none;
    const NormalForm lead = diff(ode.residual, top, none, false);
    if (lead.is_zero() || !diff(lead, top, none, false).is_zero())
        throw OdeError("ODE is not linear in the third derivative", 0);
    ExplicitOde out;
    out.func = ode.func;
    out.var = ode.var;
    out.lead = to_expr(lead);
    out.rest = to_expr(substitute(ode.residual, Bindings{{top, NormalForm()}}));
    return out;
}

namespace {

std::string jet_name(const std::string& func, const std::string& var, int order) {
    return order == 0 ? func : func + "_" + std::string(static_cast<std::size_t>(order), var[0]);
}

std::map<std::string, LongComplex> state_point(const ExplicitOde& ode, long double z, const OdeState& s) {
    return {{ode.var, LongComplex(z, 0)},
            {jet_name(ode.func, ode.var, 0), s[0]},
            {jet_name(ode.func, ode.var, 1), s[1]},
            {jet_name(ode.func, ode.var, 2), s[2]}};
}

OdeState rhs(const ExplicitOde& ode, long double z, const OdeState& s) {
    const auto pt = state_point(ode, z, s);
    const LongComplex lead = eval_long(ode.lead, pt);
    if (std::abs(lead) < 1e-14L) throw OdeError("leading coefficient vanishes", static_cast<double>(z));
    return {s[1], s[2], -eval_long(ode.rest, pt) / lead};
}

OdeState axpy(const OdeState& s, long double h, const OdeState& k) {
    return {s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]};
}

}  // namespace

OdeState initial_state(const NormalForm& solution, const std::string& var, long double z0) {
    const Base v = variable_base(var);
    const DiffRules none;
    OdeState s;
    NormalForm d = solution;
    for (int i = 0; i < 3; ++i) {
        s[static_cast<std::size_t>(i)] = eval_long(to_expr(d), {{var, LongComplex(z0, 0)}});
        d = diff(d, v, none);
    }
    return s;
}

DriftResult integrate_ode_check(const ExplicitOde& ode, const OdeState& init, const std::vector<NormalForm>& integrals,
                                long double z0, long double z1, int steps) {
    if (steps < 1) throw std::invalid_argument("steps must be positive");
    std::vector<Expr> ks;
    for (const auto& k : integrals) ks.push_back(to_expr(k));
    std::vector<LongComplex> k0;
    for (const auto& k : ks) k0.push_back(eval_long(k, state_point(ode, z0, init)));

    DriftResult out;
    out.drift.assign(ks.size(), 0);
    OdeState s = init;
    const long double h = (z1 - z0) / steps;
    std::optional<LongComplex> prev_lead;
    for (int n = 0; n < steps; ++n) {
        const long double z = z0 + h * n;
        // a real leading coefficient changing sign between steps passed through zero
        const LongComplex lead = eval_long(ode.lead, state_point(ode, z, s));
        auto real = [](LongComplex c) { return std::abs(c.imag()) <= 1e-12L * std::abs(c); };
        if (prev_lead && real(*prev_lead) && real(lead) && (prev_lead->real() < 0) != (lead.real() < 0))
            throw OdeError("leading coefficient changes sign", static_cast<double>(z));
        prev_lead = lead;
        const OdeState a = rhs(ode, z, s);
        const OdeState b = rhs(ode, z + h / 2, axpy(s, h / 2, a));
        const OdeState c = rhs(ode, z + h / 2, axpy(s, h / 2, b));
        const OdeState d = rhs(ode, z + h, axpy(s, h, c));
        for (std::size_t i = 0; i < 3; ++i) s[i] += h / 6 * (a[i] + 2.0L * b[i] + 2.0L * c[i] + d[i]);
        const auto pt = state_point(ode, z + h, s);
        for (std::size_t i = 0; i < ks.size(); ++i)
            out.drift[i] = std::max(out.drift[i], std::abs(eval_long(ks[i], pt) - k0[i]));
    }
    out.final_state = s;
    return out;
}

double observed_order(const ExplicitOde& ode, const OdeState& init, const std::vector<NormalForm>& integrals,
                      long double z0, long double z1, int steps) {
    const DriftResult coarse = integrate_ode_check(ode, init, integrals, z0, z1, steps);
    const DriftResult fine = integrate_ode_check(ode, init, integrals, z0, z1, 2 * steps);
    double order = 1e9;
    for (std::size_t i = 0; i < coarse.drift.size(); ++i)
        order = std::min(order, static_cast<double>(std::log2(coarse.drift[i] / fine.drift[i])));
    return order;
}

// ---------------------------------------------------------------- driver

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

const Record* find_record(const std::vector<Record>& rs, const std::string& kind, const std::string& name) {
    for (const Record* r : of_kind(rs, kind))
        if (r->name == name) return r;
    return nullptr;
}

}  // namespace

std::vector<Check> verify_numeric(const std::vector<Record>& reductions, const std::vector<Record>& table,
                                  const SampleConfig& cfg) {
    std::vector<Check> out;
    auto add = [&](std::string id, Status s, std::string detail) {
        out.push_back({"numeric." + std::move(id), "numeric_check", s, std::move(detail)});
    };
    const double tol = 1e-30;
    auto guarded = [&](const std::string& id, auto&& body) {
        try {
            body();
        } catch (const std::exception& ex) {
            add(id, Status::Fail, ex.what());
        }
    };

    guarded("scaling_pde", [&] {
        const double v = numeric_residual_sample(ferapontov_residual(parse("2*I*sqrt(2)/3*(x*y)^(3/2)")), cfg);
        add("scaling_pde", from_bool(v < tol), "max " + fmt(v));
    });
    guarded("cubic_residual", [&] {
        // f = x^3 has residual -1 everywhere
        const Expr r = ferapontov_residual(parse("x^3"));
        const double v = numeric_residual_sample(r, cfg);
        const double shifted = numeric_residual_sample(r + Expr(1), cfg);
        add("cubic_residual", from_bool(std::abs(v - 1) < 1e-12 && shifted < tol), "max " + fmt(v));
    });

    for (const SolutionEntry& e : solutions_from_records(table)) {
        const std::string id = "row." + e.label;
        guarded(id, [&] {
            const EntryOptions opt{e.corrected, {}};
            const double v = numeric_residual_sample(e, cfg, opt);
            add(id, from_bool(v < tol), std::string(e.corrected.empty() ? "" : "corrected form; ") + "max " + fmt(v));
        });
    }

    // RK4 runs: reduced ODE, starting data from a closed-form solution
    struct Run {
        std::string id, reduction, solution;
        std::vector<std::string> integrals;
        std::map<std::string, std::string> fix;
        /// Added to phi'' at z0 for the order measurement (0 keeps the solution).
        long double kick;
    };
    const std::vector<Run> runs{
        {"ode.mu_1", "mu_one", "mu_1_cubic", {"mu_1_a", "mu_1_b", "mu_1_c"},
         {{"alpha", "1"}, {"beta", "1/2"}, {"gamma", "1/3"}}, 0.1L},
        {"ode.mu_minus_1", "mu_form", "mu_any_scaling", {"mu_minus_1"}, {{"mu", "-1"}}, 0},
    };
    const std::vector<Reduction> reds = reductions_from_records(reductions);
    for (const Run& run : runs) {
        guarded(run.id, [&] {
            const Reduction* red = nullptr;
            for (const auto& r : reds)
                if (r.id == run.reduction) red = &r;
            const Record* sol = find_record(reductions, "solution", run.solution);
            if (!red || !sol) throw std::runtime_error("missing fixture for " + run.id);
            const Context c = red->context();
            Bindings fix;
            for (const auto& [k, v] : run.fix) fix[variable_base(k)] = nf(v);
            OdeResidual ode = apply_reduction(*red);
            ode.residual = substitute(ode.residual, fix);
            ode.order = ode_order(ode.residual, ode.func, ode.var);
            NormalForm phi = nf(sol->at("phi"), c);
            if (const std::string* rel = sol->find("constraint"))
                phi = apply_constraint(phi, Constraint{*rel, sol->at("solve_for")});
            phi = substitute(phi, fix);
            std::vector<NormalForm> ks;
            for (const auto& name : run.integrals) {
                const Record* k = find_record(reductions, "first_integral", name);
                if (!k) throw std::runtime_error("missing first integral " + name);
                ks.push_back(substitute(nf(k->at("k"), c), fix));
            }
            const ExplicitOde x = explicit_ode(ode);
            const OdeState init = initial_state(phi, ode.var, 1);
            const DriftResult d = integrate_ode_check(x, init, ks, 1, 2, 10000);
            long double worst = 0;
            for (auto v : d.drift) worst = std::max(worst, v);
            OdeState kicked = init;
            kicked[2] += run.kick;
            const double order = observed_order(x, kicked, ks, 1, 2, 20);
            const bool ok = worst < 1e-8L && order > 3.5 && order < 4.5;
            add(run.id, from_bool(ok),
                "drift " + fmt(static_cast<double>(worst)) + " at 10^4 steps; observed order " + fmt(order));
        });
    }
    std::sort(out.begin(), out.end(), [](const Check& a, const Check& b) { return a.id < b.id; });
    return out;
}

}  // namespace wdvv
