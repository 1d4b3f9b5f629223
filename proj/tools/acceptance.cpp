// Acceptance run: one PASS/FAIL line per criterion. Criteria 2-11 are read
// off a single `all` report, 1 and 12 are timed separately.

#include "CLI11.hpp"
#include "wdvv/lie.hpp"
#include "wdvv/suites.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

using namespace wdvv;

namespace {

struct Outcome {
    bool ok = true;
    std::string note;
};

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }
bool ends_with(const std::string& s, const std::string& p) {
    return s.size() >= p.size() && s.compare(s.size() - p.size(), p.size(), p) == 0;
}

class Criteria {
public:
    explicit Criteria(const Report& r) : r_(r) {}

    const Check* find(const std::string& id) const {
        for (const auto& c : r_.checks)
            if (c.id == id) return &c;
        return nullptr;
    }

    /// Every matching check must pass; at least `min` of them must exist.
    Outcome all_pass(const std::function<bool(const std::string&)>& match, std::size_t min, const std::string& what) const {
        Outcome o;
        std::size_t n = 0;
        std::vector<std::string> bad;
        for (const auto& c : r_.checks) {
            if (!match(c.id)) continue;
            ++n;
            if (c.status != Status::Pass) bad.push_back(c.id + " (" + status_name(c.status) + ")");
        }
        std::ostringstream s;
        s << n << " " << what;
        if (n < min) {
            o.ok = false;
            s << ", expected at least " << min;
        }
        if (!bad.empty()) {
            o.ok = false;
            s << "; not passing:";
            for (const auto& b : bad) s << " " << b;
        }
        o.note = s.str();
        return o;
    }

    Outcome ids_pass(const std::vector<std::string>& ids) const {
        Outcome o;
        std::ostringstream s;
        for (const auto& id : ids) {
            const Check* c = find(id);
            if (!c || c->status != Status::Pass) {
                o.ok = false;
                s << " " << id << " (" << (c ? status_name(c->status) : "missing") << ")";
            }
        }
        o.note = o.ok ? std::to_string(ids.size()) + " checks pass" : "not passing:" + s.str();
        return o;
    }

private:
    const Report& r_;
};

Outcome merge(std::initializer_list<Outcome> parts) {
    Outcome o;
    for (const auto& p : parts) {
        o.ok = o.ok && p.ok;
        if (!o.note.empty()) o.note += "; ";
        o.note += p.note;
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    RunOptions opt;
    opt.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::vector<int> expect_fail;
    app.add_option("--fixtures", opt.fixtures_dir, "Fixture directory");
    app.add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::Range(1, 256));
    app.add_option("--expect-fail", expect_fail, "Criteria known to fail; exit 0 when exactly these fail")
        ->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    std::vector<std::pair<int, Outcome>> results;
    auto record = [&](int n, Outcome o) {
        std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << n << ": " << o.note << std::endl;
        results.emplace_back(n, std::move(o));
    };

    try {
        {
            const auto t0 = std::chrono::steady_clock::now();
            const DeterminingResult d = solve_determining(3);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            Outcome o;
            o.ok = d.solutions.size() == 10 && d.span_equal && secs < 60;
            o.note = "dimension " + std::to_string(d.solutions.size()) + (d.span_equal ? ", span matches" : ", span differs") +
                     ", " + std::to_string(secs) + " s";
            record(1, o);
        }

        const auto t0 = std::chrono::steady_clock::now();
        const Report r = run_suite("all", opt);
        const double all_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const Criteria c(r);

        record(2, c.all_pass([](const std::string& id) { return starts_with(id, "algebra.commutator."); }, 100,
                             "commutator cells"));
        record(3, c.all_pass([](const std::string& id) { return starts_with(id, "algebra.adjoint."); }, 100,
                             "adjoint cells"));
        {
            Outcome o = c.ids_pass({"algebra.jacobi"});
            if (const Check* j = c.find("algebra.jacobi")) o.note = j->detail;
            record(4, o);
        }
        record(5, merge({c.all_pass([](const std::string& id) { return ends_with(id, ".reduce"); }, 10, "reductions"),
                         c.ids_pass({"independence.weighted_3_1", "independence.weighted_3_1_order2",
                                     "transform.mu_3_is_weighted_3_1", "transform.mu_3_is_weighted_3_1_order2"})}));
        record(6, c.ids_pass({"first_integral.mu_0", "first_integral.mu_minus_1", "first_integral.mu_minus_2",
                              "first_integral.mu_minus_1_2", "first_integral.mu_1_a", "first_integral.mu_1_b",
                              "first_integral.mu_1_c", "derivative_factor.mu_1"}));
        record(7, merge({c.all_pass([](const std::string& id) { return starts_with(id, "solution."); }, 7,
                                    "explicit solutions"),
                         c.all_pass([](const std::string& id) { return starts_with(id, "quadrature."); }, 1,
                                    "quadrature steps"),
                         c.ids_pass({"solution.mu_any_scaling"})}));
        {
            const std::set<std::string> core{"scaling", "F4",   "tetra", "tetra_prime", "octa",
                                             "Dub1",    "Dub2", "Dub2_prime", "N1", "N1_prime"};
            std::vector<std::string> core_ids;
            for (const auto& row : core)
                for (const char* part : {".f_pde", ".F_pde", ".hodograph"}) core_ids.push_back("solutions." + row + part);
            Outcome strict = c.ids_pass(core_ids);
            strict.note = "core rows: " + strict.note;
            // the other rows: anything short of a pass must be a flagged discrepancy
            Outcome rest;
            std::size_t flagged = 0;
            for (const auto& k : r.checks) {
                if (!starts_with(k.id, "solutions.")) continue;
                const std::string row = k.id.substr(10, k.id.find('.', 10) - 10);
                if (core.count(row)) continue;
                if (k.status == Status::Discrepancy) ++flagged;
                if (k.status == Status::Fail || k.status == Status::Inconclusive) {
                    rest.ok = false;
                    rest.note += " " + k.id;
                }
            }
            rest.note = rest.ok ? "other rows: no silent failures, " + std::to_string(flagged) + " flagged discrepancies"
                                : "other rows failing:" + rest.note;
            record(8, merge({strict, rest}));
        }
        record(9, c.ids_pass({"lax.curl", "lax.commutator"}));
        record(10, c.ids_pass({"wdvv.scaling.associativity", "wdvv.scaling.eta", "wdvv.tetra.associativity",
                               "wdvv.tetra.eta"}));
        record(11, merge({c.all_pass([](const std::string& id) { return starts_with(id, "numeric.row."); }, 17,
                                     "sampled rows"),
                          c.ids_pass({"numeric.ode.mu_1", "numeric.ode.mu_minus_1"})}));
        {
            Outcome o;
            o.ok = r.ok() && all_secs < 600;
            std::ostringstream s;
            s << "verify all in " << all_secs << " s with " << opt.jobs << " jobs, exit " << (r.ok() ? 0 : 1);
            o.note = s.str();
            record(12, o);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::set<int> failed;
    for (const auto& [n, o] : results)
        if (!o.ok) failed.insert(n);
    const std::set<int> expected(expect_fail.begin(), expect_fail.end());
    std::cout << (results.size() - failed.size()) << "/" << results.size() << " criteria pass\n";
    if (failed != expected) {
        std::cout << "failing criteria differ from the expected set\n";
        return 1;
    }
    return 0;
}
