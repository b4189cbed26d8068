#pragma once

#include "gradkernel/rational.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gradkernel {

/// Exponent vector over the base symbols of a table; entries may be negative.
using BaseExponents = std::vector<int>;

/// Largest order accepted by LaurentCoefficient::taylor_shift.
inline constexpr int kMaxTaylorOrder = 64;

/// Exact-rational Laurent polynomial in the degree-0 symbols of a table.
/// Zero coefficients are never stored.
class LaurentCoefficient {
public:
    using Terms = std::map<BaseExponents, Rational>;

    LaurentCoefficient() = default;
    explicit LaurentCoefficient(std::size_t arity) : arity_(arity) {}

    static LaurentCoefficient constant(std::size_t arity, const Rational& value);
    static LaurentCoefficient variable(std::size_t arity, std::size_t index, int exponent = 1);
    static LaurentCoefficient monomial(BaseExponents exponents, const Rational& value);

    std::size_t arity() const noexcept { return arity_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    /// True when the value is a rational constant (possibly zero).
    bool is_constant() const;
    Rational constant_term() const;
    /// Coefficient of the given exponent vector (zero when absent).
    Rational coefficient(const BaseExponents& exponents) const;

    /// Adds value * x^exponents.
    void add_term(const BaseExponents& exponents, const Rational& value);

    LaurentCoefficient& operator+=(const LaurentCoefficient& other);
    LaurentCoefficient& operator-=(const LaurentCoefficient& other);
    LaurentCoefficient& operator*=(const LaurentCoefficient& other);
    LaurentCoefficient& operator*=(const Rational& scalar);

    friend LaurentCoefficient operator+(LaurentCoefficient lhs, const LaurentCoefficient& rhs) { return lhs += rhs; }
    friend LaurentCoefficient operator-(LaurentCoefficient lhs, const LaurentCoefficient& rhs) { return lhs -= rhs; }
    friend LaurentCoefficient operator*(const LaurentCoefficient& lhs, const LaurentCoefficient& rhs);
    friend LaurentCoefficient operator*(LaurentCoefficient lhs, const Rational& rhs) { return lhs *= rhs; }
    LaurentCoefficient operator-() const;

    friend bool operator==(const LaurentCoefficient&, const LaurentCoefficient&) = default;

    /// Integer power; negative exponents require a single-term (unit) value.
    LaurentCoefficient pow(int exponent) const;
    bool is_unit() const noexcept { return terms_.size() == 1; }

    /// Partial derivative with respect to base symbol `index`, using
    /// d(x^n) = n x^(n-1) for every integer n.
    LaurentCoefficient derivative(std::size_t index) const;

    /// [f, f', f''/2!, ..., f^(order)/order!] with respect to base symbol
    /// `index`: the coefficients of f(x + d) as a polynomial in d.
    std::vector<LaurentCoefficient> taylor_shift(std::size_t index, int order) const;

    /// Substitutes images[i] (over a common arity) for base symbol i.
    LaurentCoefficient substitute(std::span<const LaurentCoefficient> images, std::size_t target_arity) const;

    /// Text form using the given symbol names, e.g. `3/2*x^2*y^-1 + 1`.
    std::string to_string(std::span<const std::string> names) const;
    /// True when to_string needs parentheses to act as a factor.
    bool needs_parentheses() const;

private:
    void check_arity(const LaurentCoefficient& other) const;

    std::size_t arity_ = 0;
    Terms terms_;
};

} // namespace gradkernel
