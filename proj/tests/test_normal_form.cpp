#include "gradkernel/normal_form.hpp"

#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace gradkernel;

TEST_CASE("degree-zero monomial basis") {
    const VariableTable zp({}, {{"zeta", 2}, {"psi", -2}});
    CHECK(degree_zero_monomial_basis(zp) == std::vector{GradedMonomial{{1, 1}}});
    const VariableTable xp({}, {{"xi", 4}, {"psi", -6}});
    CHECK(degree_zero_monomial_basis(xp) == std::vector{GradedMonomial{{3, 2}}});
    // With psi odd the monomial xi^3*psi^2 vanishes, so the basis is empty.
    const VariableTable xp_odd({}, {{"xi", 2}, {"psi", -3}});
    CHECK(degree_zero_monomial_basis(xp_odd).empty());
    const VariableTable pos({}, {{"a", 2}, {"b", 4}});
    CHECK(degree_zero_monomial_basis(pos).empty());
    // Odd generators never enter the basis.
    const VariableTable odd({}, {{"e", 1}, {"f", -1}});
    CHECK(degree_zero_monomial_basis(odd).empty());
}

TEST_CASE("normal form of xi^2 psi + x xi^5 psi^3") {
    const auto t = make_table(VariableTable({"x"}, {{"xi", 4}, {"psi", -6}}));
    const int order = 20;
    HomogeneousComponent f(t, 2, order);
    f.add_term(GradedMonomial{{2, 1}}, LaurentCoefficient::constant(1, 1));
    f.add_term(GradedMonomial{{5, 3}}, LaurentCoefficient::variable(1, 0));
    const auto nf = to_normal_form(f);
    REQUIRE(nf.parts.size() == 1);
    CHECK(nf.parts[0].leading == GradedMonomial{{2, 1}});
    const Tail expected{{{0}, LaurentCoefficient::constant(1, 1)}, {{1}, LaurentCoefficient::variable(1, 0)}};
    CHECK(nf.parts[0].tail == expected);
    CHECK(from_normal_form(nf, order) == f);
    CHECK(to_string(nf) == "degree 2\n  z1 = xi^3*psi^2\n  [xi^2*psi] * (1 + x*z1)\n");
}

TEST_CASE("normal form trivial cases") {
    const auto t = make_table(VariableTable({"x"}, {{"zeta", 2}, {"psi", -2}}));
    HomogeneousComponent c(t, 0, 4);
    c.add_term(GradedMonomial{{0, 0}}, LaurentCoefficient::constant(1, 7));
    const auto nf = to_normal_form(c);
    REQUIRE(nf.parts.size() == 1);
    CHECK(nf.parts[0].leading == GradedMonomial{{0, 0}});
    CHECK(nf.parts[0].tail == Tail{{{0}, LaurentCoefficient::constant(1, 7)}});

    HomogeneousComponent single(t, 2, 4);
    single.add_term(GradedMonomial{{1, 0}}, LaurentCoefficient::variable(1, 0));
    const auto nf2 = to_normal_form(single);
    REQUIRE(nf2.parts.size() == 1);
    CHECK(nf2.parts[0].leading == GradedMonomial{{1, 0}});

    NormalForm empty{t, 3, degree_zero_monomial_basis(*t), {}};
    CHECK(from_normal_form(empty, 4).is_zero());
}

TEST_CASE("reconstruction below the normal form order drops deep terms") {
    const auto t = make_table(VariableTable({}, {{"zeta", 2}, {"psi", -2}}));
    HomogeneousComponent f(t, 0, 8);
    f.add_term(GradedMonomial{{0, 0}}, LaurentCoefficient::constant(0, 1));
    f.add_term(GradedMonomial{{3, 3}}, LaurentCoefficient::constant(0, 1));
    const auto nf = to_normal_form(f);
    HomogeneousComponent expected(t, 0, 4);
    expected.add_term(GradedMonomial{{0, 0}}, LaurentCoefficient::constant(0, 1));
    CHECK(from_normal_form(nf, 4) == expected);
}

TEST_CASE("odd generators sit in the leading monomial") {
    const auto t = make_table(VariableTable({}, {{"e", 1}, {"zeta", 2}, {"psi", -2}}));
    HomogeneousComponent f(t, 1, 6);
    f.add_term(GradedMonomial{{1, 2, 2}}, LaurentCoefficient::constant(0, 3));
    const auto nf = to_normal_form(f);
    REQUIRE(nf.parts.size() == 1);
    CHECK(nf.parts[0].leading == GradedMonomial{{1, 0, 0}});
    CHECK(nf.parts[0].tail == Tail{{{2}, LaurentCoefficient::constant(0, 3)}});
}

TEST_CASE("random roundtrips") {
    gk_test::Rng rng(17);
    for (int trial = 0; trial < 150; ++trial) {
        const auto t = gk_test::random_table(rng, 3, 2, 3, 1);
        const int order = gk_test::uniform(rng, 1, 5);
        const auto f = gk_test::random_component(rng, t, gk_test::uniform(rng, -4, 4), order, 5);
        const auto nf = to_normal_form(f);
        CHECK(from_normal_form(nf, order) == f);
        std::set<GradedMonomial> leadings;
        for (const auto& part : nf.parts) CHECK(leadings.insert(part.leading).second);
    }
}

TEST_CASE("positive tables have constant tails") {
    gk_test::Rng rng(23);
    const auto t = make_table(VariableTable({"x"}, {{"a", 2}, {"b", 3}, {"e", 1}}));
    for (int trial = 0; trial < 30; ++trial) {
        const auto f = gk_test::random_component(rng, t, gk_test::uniform(rng, 0, 8), 3, 4);
        for (const auto& part : to_normal_form(f).parts)
            for (const auto& [exps, c] : part.tail) CHECK(exps.empty());
    }
}
