#include "doctest.h"
#include "wdvv/lie.hpp"

#include <cmath>

using namespace wdvv;

namespace {

const std::vector<Record>& algebra_fixtures() {
    static const std::vector<Record> rs = load_fixtures(std::string(WDVV_FIXTURES_DIR) + "/algebra.fix");
    return rs;
}

const LieAlgebra& algebra() {
    static const LieAlgebra g = structure_constants(reference_basis());
    return g;
}

NormalForm lie_nf(const std::string& s) { return nf(s, lie_context()); }

}  // namespace

TEST_CASE("prolongation examples") {
    for (const auto& [j, c] : prolong3(reference_basis()[0])) CHECK(c.is_zero());

    auto p6 = prolong3(reference_basis()[5]);
    CHECK(p6.at({"x", "x"}) == NormalForm(2));
    CHECK(p6.at({"x", "y"}).is_zero());
    CHECK(p6.at({"y", "y"}).is_zero());
    CHECK(p6.at({"x"}) == lie_nf("2*x"));
    for (const JetIndex& j : std::vector<JetIndex>{{"x", "x", "x"}, {"x", "x", "y"}, {"x", "y", "y"}, {"y", "y", "y"}})
        CHECK(p6.at(j).is_zero());

    auto p3 = prolong3(reference_basis()[2]);
    CHECK(p3.at({"x", "x", "x"}) == lie_nf("-3/2*f_xxx"));
    CHECK(p3.at({"y", "y", "y"}) == lie_nf("3/2*f_yyy"));
}

TEST_CASE("symmetry residual") {
    for (std::size_t k = 0; k < 10; ++k) {
        CAPTURE(k);
        CHECK(symmetry_residual(reference_basis()[k]).is_zero());
    }
    CHECK_FALSE(symmetry_residual(make_field("0", "0", "f")).is_zero());
    CHECK_FALSE(symmetry_residual(make_field("x", "0", "0")).is_zero());
    // a symmetry up to a multiple is still a symmetry; a wrong weight is not
    CHECK(symmetry_residual(make_field("2*x", "0", "3*f")).is_zero());
    CHECK_FALSE(symmetry_residual(make_field("x", "0", "f")).is_zero());
}

TEST_CASE("fixture generators match the built-in basis") {
    auto b = basis_from_records(algebra_fixtures());
    REQUIRE(b.size() == 10);
    for (std::size_t k = 0; k < 10; ++k) CHECK((b[k] - reference_basis()[k]).is_zero());
}

TEST_CASE("determining system") {
    std::size_t prev = 0;
    const std::size_t expect[] = {3, 7, 10, 10};
    for (int d = 0; d <= 3; ++d) {
        CAPTURE(d);
        DeterminingResult r = solve_determining(d);
        CHECK(r.solutions.size() == expect[d]);
        CHECK(r.span_equal);
        CHECK(r.solutions.size() >= prev);
        prev = r.solutions.size();
        for (const auto& v : r.solutions) CHECK(symmetry_residual(v).is_zero());
    }
    DeterminingResult r0 = solve_determining(0);
    CHECK(r0.reference_indices == std::vector<std::size_t>{0, 1, 9});
    DeterminingResult r1 = solve_determining(1);
    CHECK(r1.reference_indices == std::vector<std::size_t>{0, 1, 2, 3, 7, 8, 9});
    CHECK_THROWS_AS(solve_determining(-1), std::invalid_argument);
}

TEST_CASE("commutators and structure constants") {
    const auto& v = reference_basis();
    CHECK((commutator(v[0], v[2]) - v[0]).is_zero());
    CHECK(commutator(v[0], v[0]).is_zero());
    CHECK((commutator(v[0], v[5]) - v[7].scaled(NormalForm(2))).is_zero());

    const LieAlgebra& g = algebra();
    CHECK(g.c[0][2][0] == Coefficient(1));
    CHECK(g.antisymmetric());
    CHECK(g.jacobi_failures().empty());

    auto table = check_commutator_table(g, algebra_fixtures());
    CHECK(table.size() == 100);
    for (const auto& e : table) {
        CAPTURE(e.i);
        CAPTURE(e.j);
        CAPTURE(e.expected);
        CAPTURE(e.computed);
        CHECK(e.match);
    }
}

TEST_CASE("closure failure names the pair") {
    std::vector<VectorField> b = {make_field("1", "0", "0"), make_field("0", "0", "x^2")};
    try {
        structure_constants(b);
        FAIL("expected ClosureError");
    } catch (const ClosureError& e) {
        CHECK(e.i == 0);
        CHECK(e.j == 1);
    }
}

TEST_CASE("commutator table mismatch is detected") {
    auto rs = parse_fixtures("[commutator v1]\nv3 = \"-v1\"\nv6 = \"v8\"\n");
    auto t = check_commutator_table(algebra(), rs);
    REQUIRE(t.size() == 2);
    CHECK_FALSE(t[0].match);
    CHECK_FALSE(t[1].match);
}

TEST_CASE("eps functions") {
    EpsFunction e = EpsFunction::eps(), a = EpsFunction::exp_rate(Exponent(1, 2));
    CHECK((a * a) == EpsFunction::exp_rate(Exponent(1)));
    CHECK((e * a).derivative() == a + e * a * EpsFunction::constant(mpq_class(1, 2)));
    CHECK((e * e).at_zero() == 0);
    CHECK(a.at_zero() == 1);
    CHECK(std::abs(a.value(2.0) - std::exp(1.0)) < 1e-14);
    CHECK(EpsFunction::from_nf(nf("eps^2 + 3*exp(eps/2)")) ==
          e * e + EpsFunction::constant(3) * a);
    CHECK(EpsFunction::from_nf((e * e * a).to_nf()) == e * e * a);
    CHECK((a - a).is_zero());
}

TEST_CASE("rational eigenvalues") {
    auto ev = rational_eigenvalues(ad_matrix(algebra(), 2));
    // grading of v3: 0 (v2,v3,v4), 1/2 (v5, v8), -1/2 (v6), 1 (v1), 3/2 (v7, v9, v10)
    std::map<mpq_class, int> m(ev.begin(), ev.end());
    CHECK(m.size() == 5);
    CHECK(m[mpq_class(-1, 2)] == 1);
    CHECK(m[mpq_class(0)] == 3);
    CHECK(m[mpq_class(1, 2)] == 2);
    CHECK(m[mpq_class(1)] == 1);
    CHECK(m[mpq_class(3, 2)] == 3);
    for (std::size_t i : {0, 1, 4, 5, 6, 7, 8, 9}) {
        auto nil = rational_eigenvalues(ad_matrix(algebra(), i));
        REQUIRE(nil.size() == 1);
        CHECK(nil[0].first == 0);
    }
}

TEST_CASE("adjoint action examples") {
    const LieAlgebra& g = algebra();
    auto a16 = adjoint_action(g, 0, 5);
    EpsFunction e = EpsFunction::eps();
    CHECK(a16[5] == EpsFunction(1));
    CHECK(a16[7] == EpsFunction(-2) * e);
    CHECK(a16[9] == e * e);
    auto a31 = adjoint_action(g, 2, 0);
    CHECK(a31[0] == EpsFunction::exp_rate(Exponent(1)));
    auto a47 = adjoint_action(g, 3, 6);
    CHECK(a47[6] == EpsFunction::exp_rate(Exponent(-1, 2)));
    // sign convention pinned by Ad(exp(eps v1)) v3 = v3 - eps v1
    auto a13 = adjoint_action(g, 0, 2);
    CHECK(a13[2] == EpsFunction(1));
    CHECK(a13[0] == -e);
}

TEST_CASE("adjoint table") {
    auto table = check_adjoint_table(algebra(), algebra_fixtures());
    CHECK(table.size() == 100);
    for (const auto& t : table) {
        CAPTURE(t.i);
        CAPTURE(t.j);
        CAPTURE(t.expected);
        CAPTURE(t.computed);
        CHECK(t.match);
    }
}

TEST_CASE("adjoint properties") {
    const LieAlgebra& g = algebra();
    for (std::size_t i = 0; i < 10; ++i) {
        CAPTURE(i);
        EpsMatrix m = adjoint_matrix_exp(g, i);
        for (std::size_t j = 0; j < 10; ++j)
            for (std::size_t k = 0; k < 10; ++k) {
                // identity at 0, derivative at 0 is [v_j, v_i] = -[v_i, v_j]
                CHECK(m[k][j].at_zero() == (j == k ? 1 : 0));
                CHECK(m[k][j].derivative().at_zero() == -g.c[i][j][k].re());
            }
        // one-parameter group law, sampled
        for (double e1 : {-0.7, 0.3, 1.1})
            for (double e2 : {-0.4, 0.9}) {
                for (std::size_t r = 0; r < 10; ++r)
                    for (std::size_t c = 0; c < 10; ++c) {
                        double s = 0;
                        for (std::size_t k = 0; k < 10; ++k) s += m[r][k].value(e1) * m[k][c].value(e2);
                        CHECK(std::abs(s - m[r][c].value(e1 + e2)) < 1e-12);
                    }
            }
    }
}

TEST_CASE("subalgebra families") {
    auto fams = of_kind(algebra_fixtures(), "family");
    CHECK(fams.size() == 11);
    for (const Record* r : fams) {
        CAPTURE(r->name);
        FamilyCheck f = check_family(r->at("expr"));
        CHECK(f.in_span);
        CHECK(f.is_symmetry);
    }
    CHECK_FALSE(check_family("v3*v4").in_span);
    CHECK_FALSE(check_family("x*v3").is_symmetry);
}

TEST_CASE("normalization claims") {
    auto claims = claims_from_records(algebra_fixtures());
    CHECK(claims.size() == 8);
    for (const auto& c : claims) {
        ClaimResult r = check_claim(algebra(), c);
        CAPTURE(r.id);
        CAPTURE(r.detail);
        CHECK(r.holds);
    }
    // the same claims with wrong values fail
    NormalizationClaim bad{"bad_cancel", 9, "v3 + c*v10", ClaimKind::Cancel, 9, "c"};
    CHECK_FALSE(check_claim(algebra(), bad).holds);
    NormalizationClaim bad_scale{"bad_scale", 2, "3*v3 + v4 + a*v7", ClaimKind::Scale, 6, "exp(eps/2)"};
    CHECK_FALSE(check_claim(algebra(), bad_scale).holds);
    NormalizationClaim not_inv{"not_invariant", 9, "v3 + v4 + b*v10", ClaimKind::Invariant, 9, ""};
    CHECK_FALSE(check_claim(algebra(), not_inv).holds);
}
