#include "gradkernel/bigrading.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace gradkernel;

namespace {

TablePtr zeta_psi() { return make_table(VariableTable({"x"}, {{"zeta", 2}, {"psi", -3}})); }

} // namespace

TEST_CASE("associated graded examples") {
    const auto t = zeta_psi();
    const int order = 10;
    const auto zp = GradedSeries::generator(t, order, 0) * GradedSeries::generator(t, order, 1);
    const auto a = associated_graded(zp);
    REQUIRE(a.components().size() == 1);
    CHECK(a.components().begin()->first == Bidegree{2, 3});
    CHECK(associated_graded(GradedSeries::base_symbol(t, order, 0)).components().begin()->first == Bidegree{0, 0});
    // psi is odd, so zeta*psi squares to zero; the two-component case uses psi of degree -4.
    CHECK((zp * zp).is_zero());
    const auto te = make_table(VariableTable({"x"}, {{"zeta", 2}, {"psi", -4}}));
    const auto ze = GradedSeries::generator(te, order, 0) * GradedSeries::generator(te, order, 1);
    const auto two = associated_graded(ze + ze * ze);
    REQUIRE(two.components().size() == 2);
    CHECK(two.components().count({2, 4}));
    CHECK(two.components().count({4, 8}));
    CHECK(to_string(two) == "(2,4): zeta*psi\n(4,8): zeta^2*psi^2\n");
}

TEST_CASE("euler derivations") {
    const auto t = zeta_psi();
    const int order = 8;
    const auto zp = GradedSeries::generator(t, order, 0) * GradedSeries::generator(t, order, 1);
    const auto x = GradedSeries::base_symbol(t, order, 0);
    CHECK(euler(zp, EulerKind::Plus) == zp * Rational(2));
    CHECK(euler(zp, EulerKind::Minus) == zp * Rational(3));
    CHECK(euler(zp, EulerKind::Total) == zp * Rational(-1));
    for (auto k : {EulerKind::Plus, EulerKind::Minus, EulerKind::Total}) CHECK(euler(x, k).is_zero());
}

TEST_CASE("regrade") {
    const auto t = zeta_psi();
    const auto zp = GradedSeries::generator(t, 8, 0) * GradedSeries::generator(t, 8, 1);
    const auto back = regrade(associated_graded(zp));
    CHECK(back == zp);
    CHECK(back.degree() == -1);
    CHECK(regrade(BigradedElement(t, 8)).is_zero());
}

TEST_CASE("euler derivations: Leibniz, commutation, total degree") {
    gk_test::Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = gk_test::random_table(rng, 2, 2, 3, 1);
        const int order = gk_test::uniform(rng, 1, 4);
        const auto f = gk_test::random_series(rng, t, order, 2, 3);
        const auto g = gk_test::random_series(rng, t, order, 2, 3);
        for (auto k : {EulerKind::Plus, EulerKind::Minus, EulerKind::Total})
            CHECK(euler(f * g, k) == euler(f, k) * g + f * euler(g, k));
        CHECK(euler(euler(f, EulerKind::Plus), EulerKind::Minus) == euler(euler(f, EulerKind::Minus), EulerKind::Plus));
        CHECK(euler(f, EulerKind::Total) == euler(f, EulerKind::Plus) - euler(f, EulerKind::Minus));
        CHECK(regrade(associated_graded(f)) == f);
    }
}

TEST_CASE("associated graded is multiplicative on pure bidegrees") {
    gk_test::Rng rng(37);
    for (int trial = 0; trial < 60; ++trial) {
        const auto t = gk_test::random_table(rng, 2, 2, 3, 1);
        const int order = 6;
        const auto f = gk_test::random_series(rng, t, order, 2, 3);
        const auto g = gk_test::random_series(rng, t, order, 2, 3);
        const auto af = associated_graded(f), ag = associated_graded(g);
        for (const auto& [b1, t1] : af.components())
            for (const auto& [b2, t2] : ag.components()) {
                GradedSeries s1(t, order), s2(t, order);
                for (const auto& [m, c] : t1) s1.add_term(m, c);
                for (const auto& [m, c] : t2) s2.add_term(m, c);
                const auto prod = associated_graded(s1 * s2);
                for (const auto& [b, terms] : prod.components())
                    CHECK(b == Bidegree{b1.first + b2.first, b1.second + b2.second});
            }
    }
}

TEST_CASE("gr idempotence") {
    const auto t = zeta_psi();
    CHECK(check_gr_idempotence(GradedSeries::generator(t, 4, 0), 4).passed);
    gk_test::Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const auto tt = gk_test::random_table(rng, 3, 2, 3, 1);
        const auto f = gk_test::random_series(rng, tt, 4, 3, 4);
        CHECK(check_gr_idempotence(f, 4).passed);
        for (int q = 0; q < 4; ++q) {
            const auto lower = associated_graded(truncate(f, q + 1));
            for (int s = 0; s <= q; ++s) CHECK(lower.slice(s).components() == associated_graded(f).slice(s).components());
        }
    }
}
