#pragma once

// Random instances and brute-force oracles shared by the unit, property and
// acceptance tests. Oracles avoid the library's own algorithms.

#include "gradkernel/error.hpp"
#include "gradkernel/morphism.hpp"
#include "gradkernel/series.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <vector>

namespace gk_test {

using namespace gradkernel;
using Rng = std::mt19937;

/// Kind of the Error thrown by f, or nullopt when nothing is thrown.
template <typename F>
std::optional<ErrorKind> error_kind(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

inline GradedDimension gd(const std::map<Degree, long>& dims) { return GradedDimension(dims); }

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Rational small_rational(Rng& rng) {
    int num = 0;
    while (num == 0) num = uniform(rng, -5, 5);
    return make_rational(num, uniform(rng, 1, 3));
}

inline int random_degree(Rng& rng, int max_abs) {
    int d = 0;
    while (d == 0) d = uniform(rng, -max_abs, max_abs);
    return d;
}

/// Up to `max_even` even and `max_odd` odd generators with degrees in
/// [-max_abs, max_abs] and `base` base symbols.
inline TablePtr random_table(Rng& rng, int max_even, int max_odd, int max_abs, int base) {
    VariableTable t;
    for (int j = 0; j < base; ++j) t.add_base(std::string(1, static_cast<char>('x' + j)));
    const int n_even = uniform(rng, 1, max_even);
    const int n_odd = uniform(rng, 0, max_odd);
    std::vector<int> degrees;
    for (int i = 0; i < n_even; ++i) {
        int d = 1;
        while (d % 2 != 0) d = random_degree(rng, max_abs);
        degrees.push_back(d);
    }
    for (int i = 0; i < n_odd; ++i) {
        int d = 0;
        while (d % 2 == 0) d = random_degree(rng, max_abs);
        degrees.push_back(d);
    }
    std::shuffle(degrees.begin(), degrees.end(), rng);
    for (std::size_t i = 0; i < degrees.size(); ++i) t.add_graded("g" + std::to_string(i + 1), degrees[i]);
    return make_table(std::move(t));
}

inline LaurentCoefficient random_laurent(Rng& rng, std::size_t arity, int max_terms, int max_exp, bool allow_negative) {
    LaurentCoefficient c(arity);
    const int n = uniform(rng, 1, max_terms);
    for (int t = 0; t < n; ++t) {
        BaseExponents e(arity);
        for (auto& v : e) v = uniform(rng, allow_negative ? -max_exp : 0, max_exp);
        c.add_term(e, small_rational(rng));
    }
    if (c.is_zero()) c = LaurentCoefficient::constant(arity, 1);
    return c;
}

/// Every admissible monomial with even exponents <= max_exp, of the given
/// degree and with deg_minus < order.
inline std::vector<GradedMonomial> monomials_of_degree(const VariableTable& t, Degree degree, int order, int max_exp) {
    std::vector<GradedMonomial> out;
    GradedMonomial m{std::vector<int>(t.graded_count(), 0)};
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == t.graded_count()) {
            if (monomial_degree(t, m) == degree && deg_minus(t, m) < order) out.push_back(m);
            return;
        }
        const int hi = t.odd(i) ? 1 : max_exp;
        for (int e = 0; e <= hi; ++e) {
            m.exponents[i] = e;
            self(self, i + 1);
        }
        m.exponents[i] = 0;
    };
    rec(rec, 0);
    return out;
}

inline HomogeneousComponent random_component(Rng& rng, const TablePtr& t, Degree degree, int order, int max_terms,
                                             bool laurent = true) {
    HomogeneousComponent out(t, degree, order);
    const auto pool = monomials_of_degree(*t, degree, order, 4);
    if (pool.empty()) return out;
    const int n = uniform(rng, 1, max_terms);
    for (int k = 0; k < n; ++k)
        out.add_term(pool[uniform(rng, 0, static_cast<int>(pool.size()) - 1)],
                     random_laurent(rng, t->base_arity(), 2, 2, laurent));
    return out;
}

inline GradedSeries random_homogeneous(Rng& rng, const TablePtr& t, Degree degree, int order, int max_terms,
                                       bool laurent = true) {
    return GradedSeries::from_component(random_component(rng, t, degree, order, max_terms, laurent));
}

inline GradedSeries random_series(Rng& rng, const TablePtr& t, int order, int max_components, int max_terms,
                                  bool laurent = true) {
    GradedSeries out(t, order);
    const int n = uniform(rng, 1, max_components);
    for (int k = 0; k < n; ++k) out += random_homogeneous(rng, t, uniform(rng, -4, 4), order, max_terms, laurent);
    return out;
}

/// Degree-preserving polynomial endomorphism: x -> x + (degree-0 series
/// without constant part), g -> c*g + (degree-deg g series).
inline GradedMorphism random_morphism(Rng& rng, const TablePtr& t, int order) {
    std::vector<GradedSeries> base, graded;
    for (std::size_t j = 0; j < t->base_arity(); ++j) {
        GradedSeries img = GradedSeries::base_symbol(t, order, j);
        GradedSeries delta = random_homogeneous(rng, t, 0, order, 2, false);
        delta.add_term(unit_monomial(*t), -delta.base_part());
        if (uniform(rng, 0, 1)) img += delta;
        base.push_back(std::move(img));
    }
    for (std::size_t i = 0; i < t->graded_count(); ++i) {
        GradedSeries img = GradedSeries::generator(t, order, i) * small_rational(rng);
        if (uniform(rng, 0, 1)) img += random_homogeneous(rng, t, t->degree(i), order, 2, false);
        graded.push_back(std::move(img));
    }
    return GradedMorphism(t, t, std::move(base), std::move(graded));
}

// Oracles.

/// Independent Koszul product: writes each monomial as a word of generator
/// indices, concatenates and bubble-sorts into table order, flipping the
/// sign whenever two generators of odd degree cross.
inline std::optional<std::pair<GradedMonomial, int>> word_product(const VariableTable& t, const GradedMonomial& a,
                                                                  const GradedMonomial& b) {
    std::vector<std::size_t> word;
    for (const auto* m : {&a, &b})
        for (std::size_t i = 0; i < m->exponents.size(); ++i)
            for (int e = 0; e < m->exponents[i]; ++e) word.push_back(i);
    int sign = 1;
    for (std::size_t pass = 0; pass < word.size(); ++pass)
        for (std::size_t k = 0; k + 1 < word.size(); ++k)
            if (word[k] > word[k + 1]) {
                const long d1 = t.degree(word[k]), d2 = t.degree(word[k + 1]);
                if ((d1 * d2) % 2 != 0) sign = -sign;
                std::swap(word[k], word[k + 1]);
            }
    GradedMonomial out{std::vector<int>(t.graded_count(), 0)};
    for (std::size_t i : word) ++out.exponents[i];
    for (std::size_t i = 0; i < t.graded_count(); ++i)
        if (t.degree(i) % 2 != 0 && out.exponents[i] > 1) return std::nullopt;
    return std::make_pair(out, sign);
}

inline GradedSeries oracle_multiply(const GradedSeries& f, const GradedSeries& g) {
    const VariableTable& t = *f.table();
    GradedSeries out(f.table(), f.order());
    f.for_each_term([&](const GradedMonomial& m1, const LaurentCoefficient& c1) {
        g.for_each_term([&](const GradedMonomial& m2, const LaurentCoefficient& c2) {
            auto prod = word_product(t, m1, m2);
            if (!prod) return;
            int dm = 0;
            for (std::size_t i = 0; i < t.graded_count(); ++i)
                if (t.degree(i) < 0) dm -= t.degree(i) * prod->first.exponents[i];
            if (dm >= f.order()) return;
            out.add_term(prod->first, c1 * c2 * Rational(prod->second));
        });
    });
    return out;
}

/// Monomials of Sym(E) with deg_plus < p and degree i, by enumeration.
inline long oracle_quotient_dimension(const std::map<Degree, long>& dims, int p, Degree i) {
    std::vector<Degree> gens;
    for (const auto& [d, n] : dims)
        for (long k = 0; k < n; ++k) gens.push_back(d);
    long count = 0;
    auto rec = [&](auto&& self, std::size_t k, int plus, int minus) -> void {
        if (plus >= p) return;
        if (k == gens.size()) {
            if (plus - minus == i) ++count;
            return;
        }
        const Degree d = gens[k];
        const int hi = d % 2 != 0 ? 1 : 2 * p + 8;
        for (int e = 0; e <= hi; ++e) {
            const int np = d > 0 ? plus + e * d : plus;
            const int nm = d < 0 ? minus - e * d : minus;
            if (np >= p || nm - np > 16) break;
            self(self, k + 1, np, nm);
        }
    };
    rec(rec, 0, 0, 0);
    return count;
}

/// Minimal elements (componentwise) of all solutions of a.p - b.q = c with
/// entries <= bound, excluding zero when `nonzero`.
inline std::vector<std::pair<std::vector<int>, std::vector<int>>> oracle_minimal(const std::vector<int>& a,
                                                                                 const std::vector<int>& b, int c,
                                                                                 int bound, bool nonzero) {
    using Vec = std::vector<int>;
    std::vector<std::pair<Vec, Vec>> all;
    Vec p(a.size()), q(b.size());
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == a.size() + b.size()) {
            long lhs = 0, rhs = 0;
            for (std::size_t i = 0; i < a.size(); ++i) lhs += static_cast<long>(a[i]) * p[i];
            for (std::size_t i = 0; i < b.size(); ++i) rhs += static_cast<long>(b[i]) * q[i];
            if (lhs - rhs != c) return;
            const bool zero = std::all_of(p.begin(), p.end(), [](int v) { return v == 0; }) &&
                              std::all_of(q.begin(), q.end(), [](int v) { return v == 0; });
            if (nonzero && zero) return;
            all.emplace_back(p, q);
            return;
        }
        int& slot = k < a.size() ? p[k] : q[k - a.size()];
        for (slot = 0; slot <= bound; ++slot) self(self, k + 1);
        slot = 0;
    };
    rec(rec, 0);
    auto le = [](const std::pair<Vec, Vec>& x, const std::pair<Vec, Vec>& y) {
        for (std::size_t i = 0; i < x.first.size(); ++i)
            if (x.first[i] > y.first[i]) return false;
        for (std::size_t i = 0; i < x.second.size(); ++i)
            if (x.second[i] > y.second[i]) return false;
        return true;
    };
    std::vector<std::pair<Vec, Vec>> out;
    for (const auto& s : all) {
        bool minimal = true;
        for (const auto& r : all)
            if (r != s && le(r, s)) {
                minimal = false;
                break;
            }
        if (minimal) out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace gk_test
