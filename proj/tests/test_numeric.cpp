#include "doctest.h"
#include "wdvv/numeric_check.hpp"
#include "wdvv/pde.hpp"

#include <cmath>
#include <random>

using namespace wdvv;

namespace {

const std::vector<Record>& reductions() {
    static const std::vector<Record> rs = load_fixtures(std::string(WDVV_FIXTURES_DIR) + "/reductions.fix");
    return rs;
}

const std::vector<Record>& table() {
    static const std::vector<Record> rs = load_fixtures(std::string(WDVV_FIXTURES_DIR) + "/table.fix");
    return rs;
}

OdeResidual ode_of(const std::string& text) {
    Context c;
    c.declare_function("phi", {"z"});
    OdeResidual o;
    o.residual = nf(text, c);
    o.order = ode_order(o.residual, "phi", "z");
    return o;
}

NormalForm k_of(const std::string& text) {
    Context c;
    c.declare_function("phi", {"z"});
    return nf(text, c);
}

}  // namespace

TEST_CASE("sample config validation") {
    SampleConfig c;
    CHECK_NOTHROW(c.validate());
    c.count = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.digits = 20;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.lo = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.lo = 3;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("sampled points stay in the box and repeat with the seed") {
    SampleConfig c;
    c.parameters["k"] = mpq_class(3, 5);
    for (std::uint64_t i = 0; i < 50; ++i) {
        const Point p = sample_in_box({"x", "y", "k"}, c, i);
        CHECK(p.at("x") > c.lo);
        CHECK(p.at("x") < c.hi);
        CHECK(p.at("k") == mpq_class(3, 5));
        CHECK(p == sample_in_box({"x", "y", "k"}, c, i));
    }
    CHECK(sample_in_box({"x"}, c, 0) != sample_in_box({"x"}, c, 1));
}

TEST_CASE("residual sampling") {
    SampleConfig c;
    CHECK(numeric_residual_sample(ferapontov_residual(parse("2*I*sqrt(2)/3*(x*y)^(3/2)")), c) < 1e-30);
    const double cubic = numeric_residual_sample(ferapontov_residual(parse("x^3")), c);
    CHECK(cubic == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(numeric_residual_sample(parse("x - x"), c) == 0);
    // identical configuration, identical answer
    const Expr r = ferapontov_residual(parse("x^3*y + y^4/x"));
    CHECK(numeric_residual_sample(r, c) == numeric_residual_sample(r, c));

    // half the box is off the branch: points are redrawn
    CHECK(numeric_residual_sample(parse("sqrt(x - 1) - sqrt(x - 1)"), c) == 0);
    // the whole box is off the branch
    SampleConfig low;
    low.lo = mpq_class(1, 4);
    low.hi = mpq_class(1, 2);
    CHECK_THROWS_AS(numeric_residual_sample(parse("log(x - 1)"), low), BranchError);
}

TEST_CASE("table rows sample below tolerance") {
    SampleConfig c;
    for (const auto& e : solutions_from_records(table())) {
        CAPTURE(e.label);
        CHECK(numeric_residual_sample(e, c, EntryOptions{e.corrected, {}}) < 1e-30);
    }
}

TEST_CASE("symbolic and numeric zero tests agree") {
    // random rational functions built as sums of products of small pieces
    std::mt19937_64 rng(7);
    const std::vector<std::string> atoms{"x", "y", "(x + y)", "(x - 2*y)", "(1 + x*y)", "x^(1/2)", "log(x)", "(3*x + 1/2)"};
    std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
    std::uniform_int_distribution<int> coef(-4, 4);
    SampleConfig c;
    c.count = 6;
    for (int trial = 0; trial < 40; ++trial) {
        std::string a;
        for (int t = 0; t < 3; ++t)
            a += (t ? " + " : "") + std::to_string(coef(rng)) + "*" + atoms[pick(rng)] + "*" + atoms[pick(rng)] + "/" +
                 atoms[pick(rng)];
        // expanded versus factored: zero
        const std::string same = "(" + a + ")^2 - (" + a + ")*(" + a + ")";
        CAPTURE(a);
        CHECK(is_identically_zero(parse(same)));
        CHECK(numeric_residual_sample(parse(same), c) < 1e-45);
        // perturbed: nonzero, and the sampler sees it
        const Expr off = parse("(" + a + ")^2 - (" + a + ")*(" + a + ") + x/(7 + y)");
        CHECK_FALSE(is_identically_zero(off));
        CHECK(numeric_residual_sample(off, c) > 1e-30);
    }
}

TEST_CASE("explicit ODE form") {
    const ExplicitOde e = explicit_ode(ode_of("z*phi_zzz + phi_z - 1"));
    CHECK(render(e.lead) == "z");
    CHECK_THROWS_AS(explicit_ode(ode_of("phi_zzz^2 - 1")), OdeError);
    CHECK_THROWS_AS(explicit_ode(ode_of("phi_zz - 1")), OdeError);
}

TEST_CASE("RK4 on the mu = -1 equation from the scaling solution") {
    const OdeResidual ode = ode_of("-32*z^2*phi_zz*phi_zzz - 32*z*phi_zz^2 - 8");
    const ExplicitOde x = explicit_ode(ode);
    const OdeState init = initial_state(k_of("2*I*sqrt(2)/3*z^(3/2)"), "z", 1);
    CHECK(std::abs(init[0] - LongComplex(0, 2 * std::sqrt(2.0L) / 3)) < 1e-15L);
    const std::vector<NormalForm> ks{k_of("z + 2*z^2*phi_zz^2")};
    const DriftResult d = integrate_ode_check(x, init, ks, 1, 2, 10000);
    CHECK(d.drift[0] < 1e-8L);
    // the trajectory is the scaling solution itself
    const LongComplex exact(0, 2 * std::sqrt(2.0L) / 3 * std::pow(2.0L, 1.5L));
    CHECK(std::abs(d.final_state[0] - exact) < 1e-12L);
    const double order = observed_order(x, init, ks, 1, 2, 20);
    CHECK(order > 3.5);
    CHECK(order < 4.5);
}

TEST_CASE("leading coefficient through zero is reported") {
    // (z - 3/2) phi''' = 1 crosses its singular point inside [1, 2]
    const ExplicitOde x = explicit_ode(ode_of("(z - 3/2)*phi_zzz - 1"));
    try {
        integrate_ode_check(x, {LongComplex(0), LongComplex(0), LongComplex(0)}, {}, 1, 2, 100);
        FAIL("expected OdeError");
    } catch (const OdeError& e) {
        CHECK(e.z > 1.4);
        CHECK(e.z < 1.6);
    }
}

TEST_CASE("numeric suite") {
    SampleConfig c;
    const auto checks = verify_numeric(reductions(), table(), c);
    CHECK(checks.size() == 4 + solutions_from_records(table()).size());
    for (const Check& k : checks) {
        CAPTURE(k.id);
        CAPTURE(k.detail);
        CHECK(k.status == Status::Pass);
    }
}
