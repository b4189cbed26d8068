#include "gradkernel/diophantine.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace gradkernel;
using gk_test::error_kind;

namespace {

Solution sol(std::vector<int> p, std::vector<int> q) { return {std::move(p), std::move(q)}; }

std::vector<Solution> as_solutions(const std::vector<std::pair<std::vector<int>, std::vector<int>>>& v) {
    std::vector<Solution> out;
    for (const auto& [p, q] : v) out.push_back({p, q});
    return out;
}

} // namespace

TEST_CASE("equation validation") {
    CHECK(error_kind([] { DegreeEquation({0}, {1}); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { DegreeEquation({1}, {-2}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("hilbert basis examples") {
    const std::vector<int> one{1}, two{2}, three{3}, one_two{1, 2};
    CHECK(hilbert_basis(one, one) == std::vector{sol({1}, {1})});
    CHECK(hilbert_basis(two, three) == std::vector{sol({3}, {2})});
    CHECK(hilbert_basis(one_two, one) == std::vector{sol({0, 1}, {2}), sol({1, 0}, {1})});
    CHECK(hilbert_basis(one_two, {}).empty());
    CHECK(hilbert_basis({}, {}).empty());
}

TEST_CASE("minimal inhomogeneous examples") {
    const std::vector<int> one{1}, two{2}, three{3};
    CHECK(minimal_inhomogeneous(two, three, 1) == std::vector{sol({2}, {1})});
    CHECK(minimal_inhomogeneous(two, two, 1).empty());
    CHECK(minimal_inhomogeneous(one, one, 0) == std::vector{sol({0}, {0})});
    CHECK(minimal_inhomogeneous(two, {}, -2).empty());
    CHECK(minimal_inhomogeneous({}, three, -6) == std::vector{sol({}, {2})});
}

TEST_CASE("decompose solution") {
    const auto h1 = hilbert_data(DegreeEquation({2}, {3}, 1));
    const auto d1 = decompose_solution(sol({5}, {3}), h1);
    CHECK(d1.minimal == sol({2}, {1}));
    CHECK(d1.multiplicities == std::map<Solution, long>{{sol({3}, {2}), 1}});

    const auto h0 = hilbert_data(DegreeEquation({2}, {3}, 0));
    CHECK(decompose_solution(sol({0}, {0}), h0).multiplicities.empty());
    const auto d2 = decompose_solution(sol({6}, {4}), h0);
    CHECK(d2.minimal == sol({0}, {0}));
    CHECK(d2.multiplicities == std::map<Solution, long>{{sol({3}, {2}), 2}});

    CHECK(error_kind([&] { decompose_solution(sol({1}, {1}), h0); }) == ErrorKind::NotASolution);
}

TEST_CASE("brute force solutions") {
    const std::vector<int> one{1}, two{2}, three{3};
    CHECK(brute_force_solutions(two, three, 0, 6) == std::vector{sol({0}, {0}), sol({3}, {2}), sol({6}, {4})});
    CHECK(brute_force_solutions(one, one, 2, 3) == std::vector{sol({2}, {0}), sol({3}, {1})});
    CHECK(brute_force_solutions(two, three, 1, 0).empty());
    CHECK(error_kind([&] { brute_force_solutions(one, one, 0, kBruteForceBoundLimit + 1); }) ==
          ErrorKind::BoundTooLarge);
}

TEST_CASE("minimal sets agree with exhaustive enumeration") {
    // Lambert's bound keeps every minimal entry below 12 for entries <= 3, |c| <= 4.
    std::vector<std::vector<int>> lists = {{}, {1}, {2}, {3}, {1, 2}, {2, 3}, {1, 3}, {2, 2}, {1, 2, 3}};
    for (const auto& a : lists)
        for (const auto& b : lists) {
            if (a.size() + b.size() > 4) continue;
            CAPTURE(a.size());
            CAPTURE(b.size());
            CHECK(hilbert_basis(a, b) == as_solutions(gk_test::oracle_minimal(a, b, 0, 7, true)));
            for (int c = -4; c <= 4; ++c) {
                if (c == 0) continue;
                CAPTURE(c);
                CHECK(minimal_inhomogeneous(a, b, c) == as_solutions(gk_test::oracle_minimal(a, b, c, 7, false)));
            }
        }
}

TEST_CASE("returned sets are antichains") {
    std::vector<std::vector<int>> lists = {{1}, {3, 4}, {2, 3, 4}, {1, 4}};
    for (const auto& a : lists)
        for (const auto& b : lists)
            for (int c = -6; c <= 6; ++c) {
                const auto h = hilbert_data(DegreeEquation(a, b, c));
                for (const auto* set : {&h.homogeneous_basis, &h.inhomogeneous_minimal})
                    for (std::size_t i = 0; i < set->size(); ++i) {
                        CHECK(satisfies(DegreeEquation(a, b, set == &h.homogeneous_basis ? 0 : c), (*set)[i]));
                        for (std::size_t j = 0; j < set->size(); ++j)
                            if (i != j) CHECK_FALSE(leq((*set)[i], (*set)[j]));
                    }
            }
}

TEST_CASE("solution text form") { CHECK(to_string(sol({1, 0}, {1})) == "(1,0;1)"); }
