#include "wdvv/suites.hpp"

#include "wdvv/lie.hpp"
#include "wdvv/numeric_check.hpp"
#include "wdvv/pde.hpp"
#include "wdvv/reductions.hpp"
#include "wdvv/solutions.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

namespace wdvv {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Runs body, appending its checks stamped with the elapsed time; an escaping
// exception becomes a failed check under `id`.
template <class F>
void timed(std::vector<Check>& out, const std::string& id, const std::string& module, F&& body) {
    const auto t0 = Clock::now();
    std::vector<Check> got;
    try {
        got = body();
    } catch (const std::exception& ex) {
        got = {Check{id, module, Status::Fail, ex.what()}};
    }
    const double s = since(t0);
    for (auto& c : got) {
        c.seconds = s;
        c.detail = clip(std::move(c.detail));
        out.push_back(std::move(c));
    }
}

std::string vname(std::size_t i) { return "v" + std::to_string(i + 1); }

}  // namespace

// ---------------------------------------------------------------- algebra

std::vector<Check> verify_algebra(const std::vector<Record>& rs, int max_degree) {
    std::vector<Check> out;
    const std::string mod = "lie_symmetry";
    auto one = [&](std::string id, Status s, std::string d) { return std::vector<Check>{{std::move(id), mod, s, std::move(d)}}; };

    timed(out, "algebra.determining", mod, [&] {
        const DeterminingResult r = solve_determining(max_degree);
        std::string d = "degree " + std::to_string(max_degree) + ": " + std::to_string(r.unknowns) + " unknowns, " +
                        std::to_string(r.equations) + " equations, solution space of dimension " +
                        std::to_string(r.solutions.size()) + (r.span_equal ? ", span equals" : ", span differs from") +
                        " the reference generators";
        const bool dim_ok = max_degree < 2 || r.solutions.size() == 10;
        return one("algebra.determining", from_bool(r.span_equal && dim_ok), d);
    });

    const std::vector<VectorField> basis = basis_from_records(rs);
    std::optional<LieAlgebra> g;
    timed(out, "algebra.closure", mod, [&] {
        g = structure_constants(basis);
        return one("algebra.closure", Status::Pass, std::to_string(basis.size()) + " generators close under the bracket");
    });
    if (!g) return out;

    timed(out, "algebra.generators", mod, [&] {
        std::vector<Check> c;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            const bool sym = symmetry_residual(basis[k]).is_zero();
            c.push_back({"algebra.generator." + vname(k), mod, from_bool(sym), sym ? "symmetry" : "not a symmetry"});
        }
        return c;
    });
    timed(out, "algebra.commutator", mod, [&] {
        std::vector<Check> c;
        for (const auto& e : check_commutator_table(*g, rs))
            c.push_back({"algebra.commutator." + vname(e.i) + "." + vname(e.j), mod, from_bool(e.match),
                         e.match ? e.computed : "expected " + e.expected + ", computed " + e.computed});
        return c;
    });
    timed(out, "algebra.adjoint", mod, [&] {
        std::vector<Check> c;
        for (const auto& e : check_adjoint_table(*g, rs))
            c.push_back({"algebra.adjoint." + vname(e.i) + "." + vname(e.j), mod, from_bool(e.match),
                         e.match ? e.computed : "expected " + e.expected + ", computed " + e.computed});
        return c;
    });
    timed(out, "algebra.antisymmetry", mod, [&] {
        return one("algebra.antisymmetry", from_bool(g->antisymmetric()), "c_ij^k = -c_ji^k");
    });
    timed(out, "algebra.jacobi", mod, [&] {
        const auto bad = g->jacobi_failures();
        const std::size_t n = g->dim();
        std::string d = std::to_string(n * n * n) + " triples, " + std::to_string(bad.size()) + " failures";
        if (!bad.empty()) d += "; first (" + vname(bad[0][0]) + ", " + vname(bad[0][1]) + ", " + vname(bad[0][2]) + ")";
        return one("algebra.jacobi", from_bool(bad.empty()), d);
    });
    for (const Record* r : of_kind(rs, "family")) {
        const std::string id = "algebra.family." + r->name;
        timed(out, id, mod, [&] {
            const FamilyCheck f = check_family(r->at("expr"));
            return one(id, from_bool(f.in_span && f.is_symmetry),
                       std::string(f.in_span ? "in span" : "not in span") + (f.is_symmetry ? ", symmetry" : ", not a symmetry"));
        });
    }
    for (const NormalizationClaim& claim : claims_from_records(rs)) {
        const std::string id = "algebra.claim." + claim.id;
        timed(out, id, mod, [&] {
            const ClaimResult c = check_claim(*g, claim);
            return one(id, from_bool(c.holds), c.detail);
        });
    }
    return out;
}

// ---------------------------------------------------------------- pde

std::vector<Check> verify_pde(const std::vector<Record>& rs, std::uint64_t seed, long digits) {
    std::vector<Check> out;
    const std::string mod = "pde_defs";
    const Context hc = hodograph_context();
    struct Pair {
        std::string name;
        NormalForm f, F;
        ExprBindings link;
    };
    std::vector<Pair> pairs;
    for (const Record* r : of_kind(rs, "pair")) {
        Pair p{r->name, nf(r->at("f")), nf(r->at("F")), {}};
        for (const char* k : {"x", "y", "t"})
            if (const std::string* v = r->find(k)) p.link.emplace_back(Expr::var(k), parse(*v));
        pairs.push_back(std::move(p));
    }
    auto holds = [](const std::vector<RelationCheck>& v) {
        return std::all_of(v.begin(), v.end(), [](const RelationCheck& c) { return c.holds; });
    };
    auto failing = [](const std::vector<RelationCheck>& v) {
        std::string s;
        for (const auto& c : v)
            if (!c.holds) s += (s.empty() ? "" : "; ") + c.name + " residual " + render(c.residual);
        return s;
    };

    for (const Pair& p : pairs) {
        const std::string base = "pde.pair." + p.name;
        timed(out, base, mod, [&] {
            std::vector<Check> c;
            const NormalForm rf = ferapontov_residual(p.f), rF = dubrovin_residual(p.F);
            c.push_back({base + ".f_pde", mod, from_bool(rf.is_zero()), rf.is_zero() ? "" : "residual " + render(rf)});
            c.push_back({base + ".F_pde", mod, from_bool(rF.is_zero()), rF.is_zero() ? "" : "residual " + render(rF)});
            const auto fwd = hodograph_check(p.f, p.F, make_link(HodographDirection::FToCapitalF, p.link));
            const auto inv = hodograph_check(p.f, p.F, make_link(HodographDirection::CapitalFToF, p.link));
            c.push_back({base + ".forward", mod, from_bool(holds(fwd)),
                         std::to_string(fwd.size()) + " relations" + (holds(fwd) ? "" : "; " + failing(fwd))});
            c.push_back({base + ".inverse", mod, from_bool(holds(inv)),
                         std::to_string(inv.size()) + " relations" + (holds(inv) ? "" : "; " + failing(inv))});
            return c;
        });
    }

    // relation variants: printed form must fail with a numeric witness and
    // the corrected one must hold on every pair to count as a discrepancy
    for (const Record* r : of_kind(rs, "relation")) {
        for (const Pair& p : pairs) {
            const std::string id = "pde.relation." + r->name + "." + p.name;
            timed(out, id, mod, [&] {
                const Expr lhs = parse(r->at("lhs"), hc);
                auto check = [&](const std::string& rhs) {
                    HodographLink l = make_link(HodographDirection::FToCapitalF, p.link);
                    l.relations = {{lhs, parse(rhs, hc)}};
                    return hodograph_check(p.f, p.F, l).front();
                };
                const RelationCheck printed = check(r->at("printed"));
                if (printed.holds) return std::vector<Check>{{id, mod, Status::Pass, "printed form holds"}};
                const Point pt = sample_point(point_names(printed.residual), seed);
                const double witness = abs(eval_numeric(to_expr(printed.residual), pt, digits)).to_double();
                const std::string* corr = r->find("corrected");
                const bool corrected_ok = corr && check(*corr).holds;
                const std::string d = "printed residual " + render(printed.residual) + " (numeric " + fmt(witness) + ")" +
                                      (corrected_ok ? "; corrected form holds" : "");
                return std::vector<Check>{
                    {id, mod, corrected_ok && witness > 1e-30 ? Status::Discrepancy : Status::Fail, d}};
            });
        }
    }
    return out;
}

// ---------------------------------------------------------------- lax

std::vector<Check> verify_lax(std::uint64_t seed, long digits) {
    std::vector<Check> out;
    const std::string mod = "pde_defs";
    auto all_zero = [](const Matrix3& m) {
        for (const auto& row : m)
            for (const auto& e : row)
                if (!e.is_zero()) return false;
        return true;
    };
    timed(out, "lax", mod, [&] {
        const LaxReport r = lax_compatibility();
        return std::vector<Check>{
            {"lax.curl", mod, from_bool(r.curl_zero), "A_y - B_x is the zero matrix"},
            {"lax.commutator", mod, from_bool(r.commutator_zero),
             std::string("[A, B] vanishes after eliminating f_yyy") +
                 (all_zero(r.commutator_off_shell) ? "; also off shell (unexpected)" : "; nonzero off shell")},
        };
    });
    timed(out, "lax.numeric", mod, [&] {
        const LaxTrees t = lax_trees(parse("2*I*sqrt(2)/3*(x*y)^(3/2)"));
        double worst = 0;
        for (std::uint64_t n = 0; n < 5; ++n) {
            const Point p = sample_point({"x", "y"}, seed + n);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    worst = std::max(worst, abs(eval_numeric(t.curl[i][j], p, digits)).to_double());
                    worst = std::max(worst, abs(eval_numeric(t.commutator[i][j], p, digits)).to_double());
                }
        }
        return std::vector<Check>{{"lax.numeric", mod, from_bool(worst < 1e-30),
                                   "scaling solution, 5 points: max entry " + fmt(worst)}};
    });
    return out;
}

// ---------------------------------------------------------------- wdvv

std::vector<Check> verify_wdvv(const std::vector<Record>& rs) {
    std::vector<Check> out;
    const std::string mod = "pde_defs";
    for (const Record* r : of_kind(rs, "embedding")) {
        const std::string id = "wdvv." + r->name;
        timed(out, id, mod, [&] {
            const bool zero11 = r->at("eta11") == "zero";
            const WdvvReport w = zero11 ? wdvv1_check(Embedding::Eta11Zero, nf(r->at("F")))
                                        : wdvv1_check(Embedding::Eta11Nonzero, nf(r->at("f")));
            const bool shape = zero11 ? w.eta[0][0].is_zero() : !w.eta[0][0].is_zero();
            return std::vector<Check>{
                {id + ".associativity", mod, from_bool(w.all_zero),
                 std::to_string(w.instances.size()) + " index tuples, " + std::to_string(w.nonzero_count) + " nonzero"},
                {id + ".eta", mod, from_bool(w.eta_constant && w.eta_nondegenerate && shape),
                 std::string(w.eta_constant ? "constant" : "not constant") +
                     (w.eta_nondegenerate ? ", nondegenerate" : ", degenerate") + ", eta_11 " +
                     (w.eta[0][0].is_zero() ? "= 0" : "!= 0")},
            };
        });
    }
    return out;
}

// ---------------------------------------------------------------- derived

std::vector<Check> verify_derived(const std::vector<Record>& rs) {
    std::vector<Check> out;
    const std::string mod = "solutions_table";
    timed(out, "derived.f1", mod, [&] {
        const F1Polynomials p = derive_f1_polynomials();
        std::vector<Check> c;
        for (const Record* r : of_kind(rs, "derived")) {
            const NormalForm* fresh = r->name == "P4" ? &p.P4 : r->name == "P8" ? &p.P8 : nullptr;
            if (!fresh) {
                c.push_back({"derived." + r->name, mod, Status::Fail, "unknown derived record"});
                continue;
            }
            const bool same = (nf(r->at("value")) - *fresh).is_zero();
            c.push_back({"derived." + r->name, mod, from_bool(same),
                         same ? "fixture matches a fresh derivation" : "fixture differs from " + render(*fresh)});
        }
        // alpha = beta = gamma = 0: lambda = 1 and the row is the scaling pair
        const Bindings zero{{variable_base("alpha"), NormalForm()},
                            {variable_base("beta"), NormalForm()},
                            {variable_base("gamma"), NormalForm()}};
        const NormalForm t0 = substitute(nf("I*sqrt(2)*y^(3/2)*x^(-9/2)"), {}) * substitute(p.P4, zero);
        const NormalForm F0 = nf("I*sqrt(2)*y^(5/2)*x^(-15/2)") * substitute(p.P8, zero);
        const NormalForm scaling_t = nf("I*sqrt(2)/2*y^(3/2)*x^(-1/2)");
        const NormalForm scaling_F = substitute(nf("y^4/(8*t)"), Bindings{{variable_base("t"), scaling_t}});
        const bool degenerate = (t0 - scaling_t).is_zero() && (F0 - scaling_F).is_zero();
        c.push_back({"derived.f1_degenerates_to_scaling", mod, from_bool(degenerate),
                     "alpha = beta = gamma = 0 gives t and F of the scaling pair"});
        return c;
    });
    return out;
}

// ---------------------------------------------------------------- runner

const char* tool_version() { return "1.0.0"; }

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> n{"all", "pde", "algebra", "reductions", "tables", "lax", "wdvv", "numeric"};
    return n;
}

std::string fixtures_hash(const std::string& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".fix") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::string all;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        all += f.filename().string() + '\0' + s.str() + '\0';
    }
    return digest_hex(all);
}

namespace {

std::vector<Record> load_if_present(const std::string& dir, const std::string& name) {
    const std::string path = dir + "/" + name;
    if (!std::filesystem::exists(path)) return {};
    return load_fixtures(path);
}

// a misspelled kind would otherwise drop its records without a word
void require_kinds(const std::vector<Record>& rs, std::initializer_list<const char*> allowed) {
    for (const auto& r : rs) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || r.kind == k;
        if (!ok) throw FixtureError(r.file, r.line, "unexpected record kind '" + r.kind + "'");
    }
}

std::vector<Record> concat(std::vector<Record> a, const std::vector<Record>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

Report run_suite(const std::string& suite, const RunOptions& opt) {
    if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
        throw std::invalid_argument("unknown suite " + suite);
    const std::string dir = opt.fixtures_dir.empty() ? default_fixtures_dir() : opt.fixtures_dir;
    if (!std::filesystem::is_directory(dir)) throw FixtureError(dir, 0, "fixtures directory not found");

    // parse everything up front so a bad file is a usage error, not a check
    const std::vector<Record> algebra = load_if_present(dir, "algebra.fix");
    const std::vector<Record> pde = load_if_present(dir, "pde.fix");
    const std::vector<Record> reductions = load_if_present(dir, "reductions.fix");
    std::vector<Record> table = load_if_present(dir, "table.fix");
    const std::vector<Record> derived = load_if_present(dir, "derived.fix");
    require_kinds(algebra, {"generator", "commutator", "adjoint", "family", "claim"});
    require_kinds(pde, {"pair", "relation", "embedding"});
    require_kinds(reductions, {"reduction", "first_integral", "derivative_factor", "solution", "quadrature",
                               "transform", "independence"});
    require_kinds(table, {"row", "differentiated"});
    require_kinds(derived, {"derived"});
    if (!opt.filter.empty()) {
        std::vector<Record> kept;
        for (const auto& r : table)
            if ((r.kind != "row" && r.kind != "differentiated") || r.name.find(opt.filter) != std::string::npos)
                kept.push_back(r);
        table = std::move(kept);
    }

    const bool all = suite == "all";
    std::vector<std::function<std::vector<Check>()>> jobs;
    if (all || suite == "algebra") jobs.push_back([&] { return verify_algebra(algebra, opt.degree); });
    if (all || suite == "pde") jobs.push_back([&] { return verify_pde(pde, opt.seed, opt.digits); });
    if (all || suite == "lax") jobs.push_back([&] { return verify_lax(opt.seed, opt.digits); });
    if (all || suite == "wdvv") jobs.push_back([&] { return verify_wdvv(pde); });
    if (all || suite == "reductions") jobs.push_back([&] { return verify_reductions(reductions); });
    if (all || suite == "tables") {
        jobs.push_back([&] {
            return verify_solutions(concat(table, reductions), opt.seed, opt.digits, std::max(1, opt.jobs - 1));
        });
        jobs.push_back([&] { return verify_derived(derived); });
    }
    if (all || suite == "numeric") {
        jobs.push_back([&] {
            SampleConfig cfg;
            cfg.seed = opt.seed;
            cfg.digits = opt.digits;
            return verify_numeric(reductions, table, cfg);
        });
    }

    Report rep;
    rep.suite = suite;
    rep.version = tool_version();
    rep.fixtures_hash = fixtures_hash(dir);
    rep.seed = opt.seed;
    rep.digits = opt.digits;
    std::vector<std::vector<Check>> results(jobs.size());
    if (opt.jobs <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = jobs[i]();
    } else {
        std::vector<std::future<std::vector<Check>>> fs;
        for (auto& j : jobs) fs.push_back(std::async(std::launch::async, j));
        for (std::size_t i = 0; i < fs.size(); ++i) results[i] = fs[i].get();
    }
    for (auto& r : results)
        for (auto& c : r)
            if (opt.filter.empty() || c.module == "solutions_table" || c.id.find(opt.filter) != std::string::npos)
                rep.checks.push_back(std::move(c));
    rep.finalize();
    return rep;
}

}  // namespace wdvv
