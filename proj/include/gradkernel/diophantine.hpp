#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gradkernel {

/// a.p - b.q = c over nonnegative integers, with a, b strictly positive.
struct DegreeEquation {
    std::vector<int> a;
    std::vector<int> b;
    int c = 0;

    DegreeEquation() = default;
    DegreeEquation(std::vector<int> a_, std::vector<int> b_, int c_ = 0);

    friend bool operator==(const DegreeEquation&, const DegreeEquation&) = default;
};

struct Solution {
    std::vector<int> p;
    std::vector<int> q;

    friend auto operator<=>(const Solution&, const Solution&) = default;
    friend bool operator==(const Solution&, const Solution&) = default;
};

/// Componentwise order on (p; q).
bool leq(const Solution& lhs, const Solution& rhs);
bool satisfies(const DegreeEquation& eq, const Solution& s);

/// Text form `(p1,p2;q1)`.
std::string to_string(const Solution& s);

struct HilbertData {
    DegreeEquation equation;
    /// M(a,b): minimal nonzero solutions of the homogeneous equation.
    std::vector<Solution> homogeneous_basis;
    /// M(a,b,c): minimal solutions of the inhomogeneous equation.
    std::vector<Solution> inhomogeneous_minimal;
};

/// Hilbert basis of a.p = b.q, sorted lexicographically.
std::vector<Solution> hilbert_basis(std::span<const int> a, std::span<const int> b);

/// Minimal solutions of a.p - b.q = c, sorted lexicographically. For c = 0
/// this is {0}; empty when the equation has no nonnegative solution.
std::vector<Solution> minimal_inhomogeneous(std::span<const int> a, std::span<const int> b, int c);

HilbertData hilbert_data(const DegreeEquation& eq);

struct SolutionDecomposition {
    Solution minimal;
    std::map<Solution, long> multiplicities;
};

/// s = minimal + sum multiplicities[g] * g. Greedy: at each step the
/// lexicographically largest admissible element is subtracted.
SolutionDecomposition decompose_solution(const Solution& s, const HilbertData& h);

inline constexpr int kBruteForceBoundLimit = 1000;

/// Streams every solution with all components <= bound, in increasing
/// lexicographic order of (p; q).
void for_each_bounded_solution(std::span<const int> a, std::span<const int> b, int c, int bound,
                               const std::function<void(std::span<const int>, std::span<const int>)>& visit);

/// Exhaustive enumeration of solutions with every component <= bound.
std::vector<Solution> brute_force_solutions(std::span<const int> a, std::span<const int> b, int c, int bound);

} // namespace gradkernel
