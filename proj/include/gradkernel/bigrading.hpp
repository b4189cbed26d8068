#pragma once

#include "gradkernel/morphism.hpp"
#include "gradkernel/series.hpp"

#include <map>
#include <string>
#include <utility>

namespace gradkernel {

/// (deg_plus, deg_minus)
using Bidegree = std::pair<int, int>;

/// Element of the associated N^2-graded algebra: terms sorted by bidegree.
class BigradedElement {
public:
    using Terms = std::map<GradedMonomial, LaurentCoefficient>;
    using Components = std::map<Bidegree, Terms>;

    BigradedElement(TablePtr table, int order);

    const TablePtr& table() const noexcept { return table_; }
    int order() const noexcept { return order_; }
    const Components& components() const noexcept { return components_; }
    bool is_zero() const noexcept { return components_.empty(); }

    void add_term(const GradedMonomial& m, const LaurentCoefficient& c);

    /// All components with deg_minus = q.
    BigradedElement slice(int q) const;

    friend bool operator==(const BigradedElement& lhs, const BigradedElement& rhs);

private:
    TablePtr table_;
    int order_;
    Components components_;
};

BigradedElement associated_graded(const GradedSeries& f);

/// Collapses bidegree (p, q) to degree p - q.
GradedSeries regrade(const BigradedElement& b);

enum class EulerKind { Plus, Minus, Total };

/// Multiplies each monomial by deg_plus, deg_minus or their difference.
GradedSeries euler(const GradedSeries& f, EulerKind which);

/// Compares, for every q' <= q < order, the [q']-slice of the associated
/// graded of truncate(f, q + 1) with the [q']-slice of f itself.
CheckReport check_gr_idempotence(const GradedSeries& f, int order);

std::string to_string(const BigradedElement& b);

} // namespace gradkernel
