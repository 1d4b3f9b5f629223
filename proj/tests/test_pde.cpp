#include "doctest.h"
#include "wdvv/numeric.hpp"
#include "wdvv/pde.hpp"

#include <random>

using namespace wdvv;

namespace {

const char* kScalingF = "2*I*sqrt(2)/3*(x*y)^(3/2)";
const char* kScalingCapF = "y^4/(8*t)";
const char* kTetraF = "k*x^3/(6*y) + y^4/(24*k)";
const char* kTetraCapF = "y^2*t^2/(4*k) + t^5/(60*k^2)";

bool all_hold(const std::vector<RelationCheck>& r) {
    for (const auto& c : r)
        if (!c.holds) return false;
    return true;
}

}  // namespace

TEST_CASE("ferapontov residual on known inputs") {
    CHECK(ferapontov_residual(nf(kScalingF)).is_zero());
    CHECK(ferapontov_residual(nf("x^3")) == NormalForm(-1));

    // cubic with 36(alpha delta - beta gamma) = 1: eliminate delta
    NormalForm cubic = nf("alpha*x^3 + 3*beta*x^2*y + 3*gamma*x*y^2 + delta*y^3");
    NormalForm r = ferapontov_residual(cubic);
    CHECK_FALSE(r.is_zero());
    Bindings b{{variable_base("delta"), nf("(1 + 36*beta*gamma)/(36*alpha)")}};
    CHECK(substitute(r, b).is_zero());
    // the residual itself is the constraint
    CHECK((r - nf("36*(alpha*delta - beta*gamma) - 1")).is_zero());
}

TEST_CASE("dubrovin residual on known inputs") {
    CHECK(dubrovin_residual(nf(kScalingCapF)).is_zero());
    CHECK(dubrovin_residual(nf(kTetraCapF)).is_zero());
    CHECK(dubrovin_residual(nf("0")).is_zero());
    CHECK_FALSE(dubrovin_residual(nf("t^3")).is_zero());
}

TEST_CASE("tree and normal-form residuals agree") {
    for (const char* s : {kScalingF, kTetraF, "x^2*y^3 + log(x)*y", "x^3"}) {
        Expr f = parse(s);
        CHECK((normalize(ferapontov_residual(f)) - ferapontov_residual(normalize(f))).is_zero());
    }
    Expr F = parse(kTetraCapF);
    CHECK(is_identically_zero(dubrovin_residual(F)));
}

TEST_CASE("on-shell solves annihilate both residuals") {
    for (const PdeResidual* p : {&ferapontov_pde(), &dubrovin_pde()}) {
        const ExprBindings b{{p->on_shell_jet, p->on_shell_value}};
        CHECK(is_identically_zero(substitute(p->residual, b)));
    }
}

TEST_CASE("residual is symmetric under exchange of x and y") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> c(-4, 4), e(0, 4);
    const Bindings swap{{variable_base("x"), NormalForm::variable("y")}, {variable_base("y"), NormalForm::variable("x")}};
    for (int trial = 0; trial < 12; ++trial) {
        NormalForm f;
        for (int k = 0; k < 5; ++k)
            f += NormalForm(c(rng)) * pow(NormalForm::variable("x"), e(rng)) * pow(NormalForm::variable("y"), e(rng));
        const NormalForm g = substitute(f, swap);
        CHECK((ferapontov_residual(g) - substitute(ferapontov_residual(f), swap)).is_zero());
    }
}

TEST_CASE("hodograph relations for explicit pairs") {
    auto tetra_inv = make_link(HodographDirection::CapitalFToF, {{Expr::var("x"), parse("t*y/k")}});
    CHECK(tetra_inv.relations.size() == 4);
    CHECK(all_hold(hodograph_check(nf(kTetraF), nf(kTetraCapF), tetra_inv)));
    auto tetra_fwd = make_link(HodographDirection::FToCapitalF, {{Expr::var("x"), parse("t*y/k")}});
    CHECK(tetra_fwd.relations.size() == 5);
    CHECK(all_hold(hodograph_check(nf(kTetraF), nf(kTetraCapF), tetra_fwd)));

    // the scaling link 2 t^2 x + y^3 = 0
    for (auto dir : {HodographDirection::FToCapitalF, HodographDirection::CapitalFToF}) {
        auto link = make_link(dir, {{Expr::var("x"), parse("-y^3/(2*t^2)")}});
        CHECK(all_hold(hodograph_check(nf(kScalingF), nf(kScalingCapF), link)));
    }

    auto mixed = make_link(HodographDirection::CapitalFToF, {{Expr::var("x"), parse("-y^3/(2*t^2)")}});
    auto bad = hodograph_check(nf(kScalingF), nf(kTetraCapF), mixed);
    CHECK_FALSE(all_hold(bad));
    bool some_nonzero = false;
    for (const auto& c : bad) some_nonzero = some_nonzero || !c.residual.is_zero();
    CHECK(some_nonzero);

    CHECK_THROWS(hodograph_check(nf(kTetraF), nf(kTetraCapF), make_link(HodographDirection::FToCapitalF, {})));
}

TEST_CASE("Lax pair zero curvature") {
    LaxReport r = lax_compatibility();
    CHECK(r.curl_zero);
    CHECK(r.commutator_zero);
    bool off_shell_nonzero = false;
    for (auto& row : r.commutator_off_shell)
        for (auto& e : row) off_shell_nonzero = off_shell_nonzero || !e.is_zero();
    CHECK(off_shell_nonzero);

    // explicit matrices, numerically at a positive point
    LaxTrees t = lax_trees(parse(kScalingF));
    Point p{{"x", mpq_class(3, 4)}, {"y", mpq_class(5, 3)}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(abs(eval_numeric(t.curl[i][j], p, 50)).to_double() < 1e-30);
            CHECK(abs(eval_numeric(t.commutator[i][j], p, 50)).to_double() < 1e-30);
        }
    // a non-solution leaves a commutator entry
    LaxTrees u = lax_trees(parse("x^3 + x*y^3"));
    double worst = 0;
    for (auto& row : u.commutator)
        for (auto& e : row) worst = std::max(worst, abs(eval_numeric(e, p, 50)).to_double());
    CHECK(worst > 0.1);
}

TEST_CASE("WDVV contractions for the two embeddings") {
    WdvvReport s = wdvv1_check(Embedding::Eta11Nonzero, nf(kScalingF));
    REQUIRE(s.eta_constant);
    REQUIRE(s.eta_nondegenerate);
    const int expect_nz[3][3] = {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(s.eta[a][b] == NormalForm(expect_nz[a][b]));
    CHECK(s.instances.size() == 81);
    CHECK(s.all_zero);

    WdvvReport x3 = wdvv1_check(Embedding::Eta11Nonzero, nf("x^3"));
    CHECK_FALSE(x3.all_zero);
    CHECK(x3.nonzero_count > 0);
    CHECK(x3.proportional_count == x3.nonzero_count);

    WdvvReport tz = wdvv1_check(Embedding::Eta11Zero, nf(kTetraCapF));
    REQUIRE(tz.eta_constant);
    CHECK(tz.eta_nondegenerate);
    CHECK(tz.eta[0][0].is_zero());
    CHECK(tz.eta[0][2] == NormalForm(1));
    CHECK(tz.eta[1][1] == NormalForm(1));
    CHECK(tz.all_zero);

    WdvvReport bad = wdvv1_check(Embedding::Eta11Zero, nf("t^4"));
    CHECK_FALSE(bad.all_zero);
    CHECK(bad.proportional_count == bad.nonzero_count);
}

TEST_CASE("quasi-homogeneity weights") {
    QuasiHomogeneity q = quasi_homogeneity_check(nf(kScalingCapF), false);
    REQUIRE(q.found);
    CHECK(q.weights.size() == 2);
    for (const auto& w : q.weights) CHECK(Coefficient(4) * w[0] - w[1] - w[2] == Coefficient(0));

    // a log term spoils pure scaling in y
    QuasiHomogeneity l = quasi_homogeneity_check(nf("t^2*log(y) + y^3"), false);
    CHECK_FALSE(l.found);
    QuasiHomogeneity la = quasi_homogeneity_check(nf("t^2*log(y) + y^3"), true);
    CHECK(la.found);
}
