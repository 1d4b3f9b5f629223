#include "doctest.h"
#include "wdvv/reductions.hpp"

using namespace wdvv;

namespace {

const std::vector<Record>& fixtures() {
    static const std::vector<Record> rs = load_fixtures(std::string(WDVV_FIXTURES_DIR) + "/reductions.fix");
    return rs;
}

Reduction by_id(const std::string& id) {
    for (const Reduction& r : reductions_from_records(fixtures()))
        if (r.id == id) return r.effective();
    FAIL("no reduction " << id);
    return {};
}

Context phi_ctx() {
    Context c;
    c.declare_function("phi", {"z"});
    c.declare_function("Phi", {"z"});
    return c;
}

NormalForm ode(const std::string& s) { return nf(s, phi_ctx()); }

OdeResidual as_ode(const std::string& s) {
    OdeResidual o;
    o.residual = ode(s);
    o.order = ode_order(o.residual, "phi", "z");
    return o;
}

OdeResidual at(OdeResidual o, const std::string& var, const std::string& value) {
    o.residual = substitute(o.residual, Bindings{{variable_base(var), nf(value)}});
    o.order = ode_order(o.residual, o.func, o.var);
    return o;
}

}  // namespace

TEST_CASE("invariant surface condition") {
    CHECK(verify_invariant_surface(by_id("scale_x")));
    CHECK(verify_invariant_surface(by_id("log_shift_single")));
    Reduction bad = by_id("scale_x");
    bad.generator = "v1 + v2";
    bad.z = "x";
    bad.dz_dx = "1";
    bad.dz_dy = "0";
    CHECK_FALSE(verify_invariant_surface(bad));
}

TEST_CASE("scaling reduction is the linear third order equation") {
    OdeResidual r = apply_reduction(by_id("scale_x"));
    CHECK(r.order == 3);
    auto m = match_ode(r.residual, nf("Phi_zzz + 16/3", phi_ctx()));
    REQUIRE(m);
    CHECK(*m == nf("-3/16"));
}

TEST_CASE("mu = 1 and linear reductions") {
    auto m = match_ode(apply_reduction(by_id("mu_one")).residual,
                       ode("2*(3*phi - 2*z*phi_z)*phi_zzz + 2*z*phi_zz^2 - 2*phi_z*phi_zz - 1"));
    REQUIRE(m);
    CHECK(m->constant().has_value());

    const Reduction lin = by_id("linear_cubic");
    auto ml = match_ode(apply_reduction(lin).residual, lin.ode(lin.target));
    REQUIRE(ml);
    CHECK(*ml == NormalForm(1));
}

TEST_CASE("x and y must cancel") {
    Reduction r = by_id("weighted_3_1_order2");
    r.eliminate.clear();
    CHECK_THROWS_AS(apply_reduction(r), ReductionError);
}

TEST_CASE("match_ode") {
    const NormalForm t = ode("phi*phi_zzz - phi_z^2 + z");
    CHECK(*match_ode(t, t) == NormalForm(1));
    CHECK(*match_ode(nf("-z^2", phi_ctx()) * t, t) == nf("-z^2"));
    CHECK(*match_ode(nf("3*I*z^(-1/2)", phi_ctx()) * t, t) == nf("3*I*z^(-1/2)"));
    CHECK_FALSE(match_ode(nf("1 + z", phi_ctx()) * t, t));
    CHECK_FALSE(match_ode(ode("phi") * t, t));
    CHECK_FALSE(match_ode(NormalForm(), t));
}

TEST_CASE("printed and corrected multi-parameter equations") {
    const Reduction ab = by_id("weighted_ab");
    const NormalForm computed = apply_reduction(ab).residual;
    CHECK_FALSE(match_ode(computed, ab.ode(ab.target)));
    auto m = match_ode(computed, ab.ode(ab.corrected));
    REQUIRE(m);
    CHECK(m->constant().has_value());

    const Reduction mu = by_id("mu_form");
    const NormalForm cmu = apply_reduction(mu).residual;
    CHECK_FALSE(match_ode(cmu, mu.ode(mu.target)));
    CHECK(match_ode(cmu, mu.ode(mu.corrected)));
}

TEST_CASE("first integrals") {
    const OdeResidual mu = apply_reduction(by_id("mu_form"));
    CHECK(verify_first_integral(ode("-8*z - 3*phi*phi_zz - 3*phi_z^2"), at(mu, "mu", "0")) == Status::Pass);
    CHECK(verify_first_integral(ode("z + 2*z^2*phi_zz^2"), at(mu, "mu", "-1")) == Status::Pass);
    CHECK(verify_first_integral(ode("phi"), at(mu, "mu", "0")) == Status::Fail);
    // the mu = 0 integral is not conserved at mu = -1
    CHECK(verify_first_integral(ode("-8*z - 3*phi*phi_zz - 3*phi_z^2"), at(mu, "mu", "-1")) == Status::Fail);

    // quadratic in the top jet: no solved form, so only exact constancy decides
    OdeResidual quad = as_ode("phi_zzz^2 - 1");
    CHECK(verify_first_integral(ode("phi_zz^2/2"), quad) == Status::Inconclusive);
    CHECK(verify_first_integral(ode("7"), quad) == Status::Pass);
}

TEST_CASE("explicit solutions") {
    const OdeResidual mu1 = apply_reduction(by_id("mu_one"));
    const NormalForm cubic = nf("alpha*z^3 + 3*beta*z^2 + 3*gamma*z + delta");
    CHECK_FALSE(verify_ode_solution(cubic, mu1));
    CHECK(verify_ode_solution(cubic, mu1, Constraint{"36*(alpha*delta - beta*gamma) - 1", "delta"}));
    CHECK_THROWS_AS(verify_ode_solution(cubic, mu1, Constraint{"delta^2 - 1", "delta"}), ReductionError);

    const OdeResidual mu = apply_reduction(by_id("mu_form"));
    CHECK(verify_ode_solution(nf("2*I*sqrt(2)/3*z^(3/2)"), mu));
    CHECK(verify_ode_solution(nf("2/(15*c)*(z - c)^(5/2)"), at(mu, "mu", "2")));
    CHECK_FALSE(verify_ode_solution(nf("2/(15*c)*(z - c)^(5/2)"), at(mu, "mu", "3")));
}

TEST_CASE("mu = 1 linearisation") {
    const NormalForm factor = ode("2*(3*phi - 2*z*phi_z)");
    CHECK(verify_derivative_factor(as_ode("2*(3*phi - 2*z*phi_z)*phi_zzz + 2*z*phi_zz^2 - 2*phi_z*phi_zz - 1"), factor));
    CHECK(verify_derivative_factor(as_ode("2*(3*phi - 2*z*phi_z)*phi_zzz + 2*z*phi_zz^2 - 2*phi_z*phi_zz - 2"), factor));
    CHECK_FALSE(verify_derivative_factor(as_ode("2*(3*phi - 2*z*phi_z)*phi_zzz + 3*z*phi_zz^2 - 2*phi_z*phi_zz - 1"), factor));
}

TEST_CASE("transform_ode") {
    // phi = z^2 psi(w) with z = w on phi_zz = 0 gives (w^2 psi)'' = 0
    OdeResidual o = as_ode("phi_zz");
    o.order = 2;
    CHECK(transform_ode(o, nf("w"), nf("w^2*psi", [] {
              Context c;
              c.declare_function("psi", {"w"});
              return c;
          }())) == ode("z^2*phi_zz + 4*z*phi_z + 2*phi"));
    // z = 2 w scales derivatives
    CHECK(transform_ode(o, nf("2*w"), nf("psi", [] {
              Context c;
              c.declare_function("psi", {"w"});
              return c;
          }())) == ode("phi_zz/4"));
}

TEST_CASE("fixture driven reductions report no failures") {
    const auto checks = verify_reductions(fixtures());
    CHECK(checks.size() > 60);
    std::size_t discrepancies = 0;
    for (const Check& c : checks) {
        CAPTURE(c.id);
        CAPTURE(c.detail);
        CHECK_FALSE(is_failure(c.status));
        CHECK(c.status != Status::Inconclusive);
        if (c.status == Status::Discrepancy) ++discrepancies;
    }
    CHECK(discrepancies == 3);
}
