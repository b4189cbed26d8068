#include "gradkernel/diophantine.hpp"

#include "gradkernel/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <unordered_map>

namespace gradkernel {

namespace {

void check_positive(std::span<const int> v, const char* what) {
    for (int x : v)
        if (x <= 0) throw Error(ErrorKind::InvalidArgument, std::string(what) + " entries must be positive");
}

bool dominates_any(const std::vector<int>& w, const std::vector<std::vector<int>>& found) {
    for (const auto& b : found) {
        bool le = true;
        for (std::size_t i = 0; i < w.size() && le; ++i) le = b[i] <= w[i];
        if (le) return true;
    }
    return false;
}

long dot(const std::vector<int>& coef, const std::vector<int>& v) {
    long s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += static_cast<long>(coef[i]) * v[i];
    return s;
}

// Contejean-Devie completion for one homogeneous equation coef.v = 0.
// A vector is only extended in directions that move coef.v towards zero,
// and vectors above an already found solution are discarded. Minimal
// solutions satisfy sum(positive part) <= max negative coefficient and vice
// versa, which bounds the number of levels.
std::vector<std::vector<int>> minimal_homogeneous(const std::vector<int>& coef) {
    const std::size_t n = coef.size();
    int max_pos = 0, max_neg = 0;
    for (int c : coef) {
        if (c > 0) max_pos = std::max(max_pos, c);
        if (c < 0) max_neg = std::max(max_neg, -c);
    }
    std::vector<std::vector<int>> found;
    if (max_pos == 0 || max_neg == 0) return found;
    const int level_limit = max_pos + max_neg;

    std::set<std::vector<int>> frontier;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 1;
        frontier.insert(std::move(e));
    }
    for (int level = 1; level <= level_limit && !frontier.empty(); ++level) {
        std::vector<const std::vector<int>*> open;
        for (const auto& v : frontier) {
            if (dot(coef, v) == 0) {
                if (!dominates_any(v, found)) found.push_back(v);
            } else {
                open.push_back(&v);
            }
        }
        std::set<std::vector<int>> next;
        for (const auto* v : open) {
            const long d = dot(coef, *v);
            for (std::size_t j = 0; j < n; ++j) {
                if (d * coef[j] >= 0) continue;
                std::vector<int> w = *v;
                ++w[j];
                if (!dominates_any(w, found)) next.insert(std::move(w));
            }
        }
        frontier = std::move(next);
    }
    return found;
}

Solution split(const std::vector<int>& v, std::size_t na, std::size_t nb) {
    Solution s;
    s.p.assign(v.begin(), v.begin() + static_cast<long>(na));
    s.q.assign(v.begin() + static_cast<long>(na), v.begin() + static_cast<long>(na + nb));
    return s;
}

// Solves the extended homogeneous equation a.p - b.q - c.t = 0. Basis
// elements with t = 0 are M(a,b), those with t = 1 are M(a,b,c).
void solve_extended(std::span<const int> a, std::span<const int> b, int c, std::vector<Solution>* homogeneous,
                    std::vector<Solution>* inhomogeneous) {
    check_positive(a, "a");
    check_positive(b, "b");
    std::vector<int> coef(a.begin(), a.end());
    for (int x : b) coef.push_back(-x);
    const bool extended = c != 0;
    if (extended) coef.push_back(-c);

    const auto basis = minimal_homogeneous(coef);
    for (const auto& v : basis) {
        const int t = extended ? v.back() : 0;
        if (t == 0 && homogeneous) homogeneous->push_back(split(v, a.size(), b.size()));
        if (t == 1 && inhomogeneous) inhomogeneous->push_back(split(v, a.size(), b.size()));
    }
    if (!extended && inhomogeneous) inhomogeneous->push_back(Solution{std::vector<int>(a.size(), 0), std::vector<int>(b.size(), 0)});
    if (homogeneous) std::sort(homogeneous->begin(), homogeneous->end());
    if (inhomogeneous) std::sort(inhomogeneous->begin(), inhomogeneous->end());
}

} // namespace

DegreeEquation::DegreeEquation(std::vector<int> a_, std::vector<int> b_, int c_)
    : a(std::move(a_)), b(std::move(b_)), c(c_) {
    check_positive(a, "a");
    check_positive(b, "b");
}

bool leq(const Solution& lhs, const Solution& rhs) {
    if (lhs.p.size() != rhs.p.size() || lhs.q.size() != rhs.q.size()) return false;
    for (std::size_t i = 0; i < lhs.p.size(); ++i)
        if (lhs.p[i] > rhs.p[i]) return false;
    for (std::size_t j = 0; j < lhs.q.size(); ++j)
        if (lhs.q[j] > rhs.q[j]) return false;
    return true;
}

bool satisfies(const DegreeEquation& eq, const Solution& s) {
    if (s.p.size() != eq.a.size() || s.q.size() != eq.b.size()) return false;
    long lhs = 0;
    for (std::size_t i = 0; i < s.p.size(); ++i) {
        if (s.p[i] < 0) return false;
        lhs += static_cast<long>(eq.a[i]) * s.p[i];
    }
    for (std::size_t j = 0; j < s.q.size(); ++j) {
        if (s.q[j] < 0) return false;
        lhs -= static_cast<long>(eq.b[j]) * s.q[j];
    }
    return lhs == eq.c;
}

std::string to_string(const Solution& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.p.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(s.p[i]);
    }
    out += ';';
    for (std::size_t j = 0; j < s.q.size(); ++j) {
        if (j) out += ',';
        out += std::to_string(s.q[j]);
    }
    return out + ")";
}

std::vector<Solution> hilbert_basis(std::span<const int> a, std::span<const int> b) {
    std::vector<Solution> out;
    solve_extended(a, b, 0, &out, nullptr);
    return out;
}

std::vector<Solution> minimal_inhomogeneous(std::span<const int> a, std::span<const int> b, int c) {
    std::vector<Solution> out;
    solve_extended(a, b, c, nullptr, &out);
    return out;
}

HilbertData hilbert_data(const DegreeEquation& eq) {
    HilbertData h;
    h.equation = eq;
    solve_extended(eq.a, eq.b, eq.c, &h.homogeneous_basis, &h.inhomogeneous_minimal);
    return h;
}

namespace {

const Solution* largest_below(const std::vector<Solution>& candidates, const Solution& s) {
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it)
        if (leq(*it, s)) return &*it;
    return nullptr;
}

void subtract(Solution& s, const Solution& g) {
    for (std::size_t i = 0; i < s.p.size(); ++i) s.p[i] -= g.p[i];
    for (std::size_t j = 0; j < s.q.size(); ++j) s.q[j] -= g.q[j];
}

bool is_zero(const Solution& s) {
    return std::all_of(s.p.begin(), s.p.end(), [](int x) { return x == 0; }) &&
           std::all_of(s.q.begin(), s.q.end(), [](int x) { return x == 0; });
}

} // namespace

SolutionDecomposition decompose_solution(const Solution& s, const HilbertData& h) {
    if (!satisfies(h.equation, s))
        throw Error(ErrorKind::NotASolution, to_string(s) + " does not satisfy the degree equation");
    const Solution* m = largest_below(h.inhomogeneous_minimal, s);
    if (!m) throw Error(ErrorKind::InvalidArgument, "Hilbert data has no minimal solution below " + to_string(s));
    SolutionDecomposition out{*m, {}};
    Solution rest = s;
    subtract(rest, *m);
    while (!is_zero(rest)) {
        const Solution* g = largest_below(h.homogeneous_basis, rest);
        if (!g) throw Error(ErrorKind::InvalidArgument, "Hilbert basis does not generate " + to_string(rest));
        subtract(rest, *g);
        ++out.multiplicities[*g];
    }
    return out;
}

namespace {

void enumerate_box(std::size_t n, int bound, const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> v(n, 0);
    while (true) {
        visit(v);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (v[i] < bound) {
                ++v[i];
                break;
            }
            v[i] = 0;
            if (i == 0) return;
        }
        if (n == 0) return;
    }
}

} // namespace

void for_each_bounded_solution(std::span<const int> a, std::span<const int> b, int c, int bound,
                               const std::function<void(std::span<const int>, std::span<const int>)>& visit) {
    check_positive(a, "a");
    check_positive(b, "b");
    if (bound < 0) throw Error(ErrorKind::InvalidArgument, "bound must be nonnegative");
    if (bound > kBruteForceBoundLimit)
        throw Error(ErrorKind::BoundTooLarge, "bound " + std::to_string(bound) + " exceeds " +
                                                  std::to_string(kBruteForceBoundLimit));

    std::unordered_map<long, std::vector<std::vector<int>>> by_value;
    enumerate_box(b.size(), bound, [&](const std::vector<int>& q) {
        long v = 0;
        for (std::size_t j = 0; j < q.size(); ++j) v += static_cast<long>(b[j]) * q[j];
        by_value[v].push_back(q);
    });
    enumerate_box(a.size(), bound, [&](const std::vector<int>& p) {
        long v = -c;
        for (std::size_t i = 0; i < p.size(); ++i) v += static_cast<long>(a[i]) * p[i];
        auto it = by_value.find(v);
        if (it == by_value.end()) return;
        for (const auto& q : it->second) visit(p, q);
    });
}

std::vector<Solution> brute_force_solutions(std::span<const int> a, std::span<const int> b, int c, int bound) {
    std::vector<Solution> out;
    for_each_bounded_solution(a, b, c, bound, [&](std::span<const int> p, std::span<const int> q) {
        out.push_back(Solution{{p.begin(), p.end()}, {q.begin(), q.end()}});
    });
    return out;
}

} // namespace gradkernel
