#include "gradkernel/series.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace gradkernel;
using gk_test::error_kind;
using gk_test::gd;

namespace {

// x; zeta deg 2, psi deg -2
TablePtr zeta_psi() { return make_table(VariableTable({"x"}, {{"zeta", 2}, {"psi", -2}})); }

GradedSeries gen(const TablePtr& t, int order, std::size_t i) { return GradedSeries::generator(t, order, i); }

} // namespace

TEST_CASE("monomial multiplication") {
    const auto t = make_table(VariableTable({}, {{"eta1", 1}, {"eta2", 1}, {"zeta", 2}}));
    const GradedMonomial e1{{1, 0, 0}}, e2{{0, 1, 0}}, z2{{0, 0, 2}}, z3{{0, 0, 3}};
    CHECK_FALSE(monomial_multiply(*t, e1, e1));
    const auto a = monomial_multiply(*t, e1, e2), b = monomial_multiply(*t, e2, e1);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->monomial == b->monomial);
    CHECK(a->sign == -b->sign);
    const auto z = monomial_multiply(*t, z2, z3);
    REQUIRE(z);
    CHECK(z->monomial == GradedMonomial{{0, 0, 5}});
    CHECK(z->sign == 1);
}

TEST_CASE("monomial bookkeeping") {
    const auto t = make_table(VariableTable({}, {{"zeta", 2}, {"psi", -3}, {"eta", 1}}));
    const GradedMonomial m{{2, 1, 1}};
    CHECK(monomial_degree(*t, m) == 2);
    CHECK(deg_plus(*t, m) == 5);
    CHECK(deg_minus(*t, m) == 3);
    CHECK(is_admissible(*t, m));
    CHECK_FALSE(is_admissible(*t, GradedMonomial{{0, 0, 2}}));
    CHECK(to_string(*t, m) == "zeta^2*psi*eta");
    CHECK(to_string(*t, unit_monomial(*t)) == "1");
}

TEST_CASE("series multiplication examples") {
    const auto t = zeta_psi();
    const auto zp = gen(t, 3, 0) * gen(t, 3, 1);
    CHECK((zp * zp).is_zero());
    const auto f = zp + GradedSeries::base_symbol(t, 3, 0);
    CHECK(GradedSeries::one(t, 3) * f == f);
    CHECK(error_kind([&] { (void)(f * GradedSeries::one(t, 4)); }) == ErrorKind::TruncationMismatch);
    CHECK(error_kind([&] { (void)(f * GradedSeries::one(zeta_psi(), 3)); }).has_value() == false);
    const auto other = make_table(VariableTable({"y"}, {{"zeta", 2}, {"psi", -2}}));
    CHECK(error_kind([&] { (void)(f * GradedSeries::one(other, 3)); }) == ErrorKind::TableMismatch);
}

TEST_CASE("truncate") {
    // x + zeta*psi^2 with deg psi = -1
    const auto t = make_table(VariableTable({"x"}, {{"zeta", 2}, {"psi", -1}}));
    const auto f = GradedSeries::base_symbol(t, 3, 0) + gen(t, 3, 0) * gen(t, 3, 1) * gen(t, 3, 1);
    CHECK(truncate(f, 3) == f);
    CHECK(truncate(f, 2) == GradedSeries::base_symbol(t, 2, 0));
    CHECK(truncate(truncate(f, 2), 1) == truncate(f, 1));
    CHECK(error_kind([&] { truncate(f, 4); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([&] { truncate(f, 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("filtration level") {
    const auto t2 = zeta_psi();
    CHECK(filtration_level(gen(t2, 4, 1)) == 2);
    CHECK(filtration_level(GradedSeries::base_symbol(t2, 4, 0)) == 0);
    const auto t1 = make_table(VariableTable({}, {{"zeta", 2}, {"psi", -1}}));
    CHECK(filtration_level(gen(t1, 4, 0) * gen(t1, 4, 1) + gen(t1, 4, 1) * gen(t1, 4, 1)) == 1);
    CHECK(error_kind([&] { filtration_level(GradedSeries::zero(t1, 4)); }) == ErrorKind::ZeroInput);
}

TEST_CASE("quotient graded dimension") {
    // Monomials of degree i with deg_plus < p: eta alone has deg_plus 1, not < 1.
    CHECK(quotient_graded_dimension(gd({{1, 1}}), 1, 1, 8) == 0);
    CHECK(quotient_graded_dimension(gd({{1, 1}}), 2, 1, 8) == 1);
    // 1 and zeta*psi for p = 3; only 1 for p = 2.
    CHECK(quotient_graded_dimension(gd({{2, 1}, {-2, 1}}), 2, 0, 8) == 1);
    CHECK(quotient_graded_dimension(gd({{2, 1}, {-2, 1}}), 3, 0, 8) == 2);
    CHECK(quotient_graded_dimension(gd({{2, 1}}), 1, -2, 8) == 0);
    CHECK(error_kind([] { quotient_graded_dimension(gd({{1, 1}}), 3, -1, 6); }) ==
          ErrorKind::CapTooSmall);
}

TEST_CASE("quotient graded dimension matches enumeration") {
    std::vector<std::map<Degree, long>> profiles;
    const std::vector<Degree> degrees{-3, -2, -1, 1, 2, 3};
    auto rec = [&](auto&& self, std::size_t k, std::map<Degree, long> dims, long total) -> void {
        if (k == degrees.size()) {
            profiles.push_back(dims);
            return;
        }
        for (long n = 0; total + n <= 3; ++n) {
            if (n) dims[degrees[k]] = n;
            self(self, k + 1, dims, total + n);
        }
    };
    rec(rec, 0, {}, 0);
    for (const auto& dims : profiles)
        for (int p = 1; p <= 3; ++p)
            for (int i = -4; i <= 4; ++i)
                CHECK(quotient_graded_dimension(GradedDimension(dims), p, i, 2 * p + 4) ==
                      gk_test::oracle_quotient_dimension(dims, p, i));
}

TEST_CASE("text form") {
    const auto t = make_table(VariableTable({"x", "y"}, {{"z1", 2}, {"w1", -1}, {"w2", -1}}));
    auto x = LaurentCoefficient::variable(2, 0), y = LaurentCoefficient::variable(2, 1);
    GradedSeries f(t, 4);
    f.add_term(GradedMonomial{{2, 1, 0}}, x * make_rational(3, 2));
    f.add_term(GradedMonomial{{0, 0, 1}}, y);
    f.add_term(GradedMonomial{{0, 1, 0}}, x + LaurentCoefficient::constant(2, 1));
    f.add_term(GradedMonomial{{0, 0, 0}}, LaurentCoefficient::constant(2, -1));
    CHECK(to_string(f) == "y*w2 + (x + 1)*w1 - 1 + 3/2*x*z1^2*w1");
    CHECK(to_string(GradedSeries::zero(t, 4)) == "0");
}

TEST_CASE("graded commutativity, associativity and filtration, exhaustive small tables") {
    gk_test::Rng rng(2024);
    for (int trial = 0; trial < 150; ++trial) {
        const auto t = gk_test::random_table(rng, 2, 2, 3, 1);
        const int order = gk_test::uniform(rng, 1, 4);
        const int d1 = gk_test::uniform(rng, -3, 3), d2 = gk_test::uniform(rng, -3, 3);
        const auto f = gk_test::random_homogeneous(rng, t, d1, order, 3);
        const auto g = gk_test::random_homogeneous(rng, t, d2, order, 3);
        const auto h = gk_test::random_series(rng, t, order, 2, 3);
        CHECK(f * g == g * f * Rational(commutation_sign(d1, d2)));
        CHECK(f * g == gk_test::oracle_multiply(f, g));
        CHECK((f * g) * h == f * (g * h));
        const auto fg = f * g;
        if (!fg.is_zero()) CHECK(filtration_level(fg) >= filtration_level(f) + filtration_level(g));
        for (int q = 1; q <= order; ++q) CHECK(truncate(fg, q) == truncate(truncate(f, q) * truncate(g, q), q));
        fg.for_each_term([&](const GradedMonomial& m, const LaurentCoefficient&) {
            CHECK(deg_plus(*t, m) - deg_minus(*t, m) == monomial_degree(*t, m));
        });
    }
}

TEST_CASE("component rejects wrong degree") {
    const auto t = zeta_psi();
    HomogeneousComponent c(t, 2, 3);
    CHECK(error_kind([&] { c.add_term(GradedMonomial{{0, 1}}, LaurentCoefficient::constant(1, 1)); }) ==
          ErrorKind::InvalidArgument);
    c.add_term(GradedMonomial{{2, 1}}, LaurentCoefficient::constant(1, 1));
    c.add_term(GradedMonomial{{3, 2}}, LaurentCoefficient::constant(1, 1));
    CHECK(c.terms().size() == 1);
}
