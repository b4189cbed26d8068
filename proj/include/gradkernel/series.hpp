#pragma once

#include "gradkernel/grading.hpp"
#include "gradkernel/laurent.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gradkernel {

/// Exponents of the graded generators of a table, in table order. Odd
/// generators carry exponent 0 or 1.
struct GradedMonomial {
    std::vector<int> exponents;

    friend auto operator<=>(const GradedMonomial&, const GradedMonomial&) = default;
    friend bool operator==(const GradedMonomial&, const GradedMonomial&) = default;
};

GradedMonomial unit_monomial(const VariableTable& table);
GradedMonomial generator_monomial(const VariableTable& table, std::size_t graded_index, int exponent = 1);

Degree monomial_degree(const VariableTable& table, const GradedMonomial& m);
/// Sum of exponent * degree over positive-degree generators.
int deg_plus(const VariableTable& table, const GradedMonomial& m);
/// Minus the sum of exponent * degree over negative-degree generators.
int deg_minus(const VariableTable& table, const GradedMonomial& m);
bool is_admissible(const VariableTable& table, const GradedMonomial& m);

struct SignedMonomial {
    GradedMonomial monomial;
    int sign = 1;
};

/// Product of two normal-ordered monomials, reordered to table order.
/// Empty when an odd generator would appear squared.
std::optional<SignedMonomial> monomial_multiply(const VariableTable& table, const GradedMonomial& lhs,
                                                const GradedMonomial& rhs);

std::string to_string(const VariableTable& table, const GradedMonomial& m);

/// Degree-d part of a truncated series: monomials of degree d with
/// deg_minus < order, each with a nonzero Laurent coefficient.
class HomogeneousComponent {
public:
    using Terms = std::map<GradedMonomial, LaurentCoefficient>;

    HomogeneousComponent(TablePtr table, Degree degree, int order);

    const TablePtr& table() const noexcept { return table_; }
    Degree degree() const noexcept { return degree_; }
    int order() const noexcept { return order_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Accumulates a term. Monomials in the filtration ideal of the
    /// component's order are discarded.
    void add_term(const GradedMonomial& m, const LaurentCoefficient& c);

    friend bool operator==(const HomogeneousComponent& lhs, const HomogeneousComponent& rhs);

private:
    TablePtr table_;
    Degree degree_;
    int order_;
    Terms terms_;
};

/// An element of the quotient of the function algebra by F^order: a finite
/// sum of homogeneous components over one table.
class GradedSeries {
public:
    using Components = std::map<Degree, HomogeneousComponent>;

    GradedSeries(TablePtr table, int order);

    static GradedSeries zero(TablePtr table, int order) { return GradedSeries(std::move(table), order); }
    static GradedSeries one(TablePtr table, int order);
    static GradedSeries constant(TablePtr table, int order, const LaurentCoefficient& value);
    static GradedSeries constant(TablePtr table, int order, const Rational& value);
    static GradedSeries base_symbol(TablePtr table, int order, std::size_t base_index);
    static GradedSeries generator(TablePtr table, int order, std::size_t graded_index);
    static GradedSeries term(TablePtr table, int order, const GradedMonomial& m, const LaurentCoefficient& c);
    static GradedSeries from_component(const HomogeneousComponent& component);

    const TablePtr& table() const noexcept { return table_; }
    int order() const noexcept { return order_; }
    const Components& components() const noexcept { return components_; }

    bool is_zero() const noexcept { return components_.empty(); }
    bool is_homogeneous() const noexcept { return components_.size() <= 1; }
    /// Degree of a nonzero homogeneous series.
    std::optional<Degree> degree() const;
    std::size_t term_count() const;

    LaurentCoefficient coefficient(const GradedMonomial& m) const;
    /// Coefficient of the unit monomial (the purely base-dependent part).
    LaurentCoefficient base_part() const;

    void add_term(const GradedMonomial& m, const LaurentCoefficient& c);

    template <typename F>
    void for_each_term(F&& f) const {
        for (const auto& [d, comp] : components_)
            for (const auto& [m, c] : comp.terms()) f(m, c);
    }

    GradedSeries& operator+=(const GradedSeries& other);
    GradedSeries& operator-=(const GradedSeries& other);
    GradedSeries& operator*=(const LaurentCoefficient& scalar);
    GradedSeries& operator*=(const Rational& scalar);
    GradedSeries operator-() const;

    friend GradedSeries operator+(GradedSeries lhs, const GradedSeries& rhs) { return lhs += rhs; }
    friend GradedSeries operator-(GradedSeries lhs, const GradedSeries& rhs) { return lhs -= rhs; }
    friend GradedSeries operator*(GradedSeries lhs, const LaurentCoefficient& rhs) { return lhs *= rhs; }
    friend GradedSeries operator*(GradedSeries lhs, const Rational& rhs) { return lhs *= rhs; }

    friend bool operator==(const GradedSeries& lhs, const GradedSeries& rhs);

private:
    void check_compatible(const GradedSeries& other) const;

    TablePtr table_;
    int order_;
    Components components_;
};

/// Koszul-signed product modulo F^order.
GradedSeries series_multiply(const GradedSeries& lhs, const GradedSeries& rhs);
inline GradedSeries operator*(const GradedSeries& lhs, const GradedSeries& rhs) { return series_multiply(lhs, rhs); }
GradedSeries power(const GradedSeries& base, int exponent);

/// Projection to the quotient by F^new_order (new_order <= order).
GradedSeries truncate(const GradedSeries& f, int new_order);

/// Largest q with f in F^q: the minimum deg_minus over its monomials.
int filtration_level(const GradedSeries& f);

/// Rank over the coefficient ring of the degree-i part of F_p Sym(E), the
/// span of monomials in generators of graded dimension gd with deg_plus < p.
long quotient_graded_dimension(const GradedDimension& gd, int p, Degree i, int weight_cap);

std::string to_string(const GradedSeries& f);

} // namespace gradkernel
