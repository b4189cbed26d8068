#include "gradkernel/series.hpp"

#include "gradkernel/error.hpp"

#include <algorithm>
#include <limits>

namespace gradkernel {

GradedMonomial unit_monomial(const VariableTable& table) {
    return GradedMonomial{std::vector<int>(table.graded_count(), 0)};
}

GradedMonomial generator_monomial(const VariableTable& table, std::size_t graded_index, int exponent) {
    if (graded_index >= table.graded_count()) throw Error(ErrorKind::InvalidArgument, "generator index out of range");
    GradedMonomial m = unit_monomial(table);
    m.exponents[graded_index] = exponent;
    return m;
}

Degree monomial_degree(const VariableTable& table, const GradedMonomial& m) {
    Degree d = 0;
    for (std::size_t i = 0; i < m.exponents.size(); ++i) d += m.exponents[i] * table.degree(i);
    return d;
}

int deg_plus(const VariableTable& table, const GradedMonomial& m) {
    int d = 0;
    for (std::size_t i = 0; i < m.exponents.size(); ++i)
        if (table.degree(i) > 0) d += m.exponents[i] * table.degree(i);
    return d;
}

int deg_minus(const VariableTable& table, const GradedMonomial& m) {
    int d = 0;
    for (std::size_t i = 0; i < m.exponents.size(); ++i)
        if (table.degree(i) < 0) d -= m.exponents[i] * table.degree(i);
    return d;
}

bool is_admissible(const VariableTable& table, const GradedMonomial& m) {
    if (m.exponents.size() != table.graded_count()) return false;
    for (std::size_t i = 0; i < m.exponents.size(); ++i) {
        if (m.exponents[i] < 0) return false;
        if (table.odd(i) && m.exponents[i] > 1) return false;
    }
    return true;
}

std::optional<SignedMonomial> monomial_multiply(const VariableTable& table, const GradedMonomial& lhs,
                                                const GradedMonomial& rhs) {
    const std::size_t n = table.graded_count();
    if (lhs.exponents.size() != n || rhs.exponents.size() != n)
        throw Error(ErrorKind::TableMismatch, "monomial arity differs from table");
    SignedMonomial out{GradedMonomial{std::vector<int>(n)}, 1};
    // Odd factors of lhs that rhs's odd factors must move past.
    int lhs_odd_above = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (table.odd(i)) lhs_odd_above += lhs.exponents[i];
    int transpositions = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int e = lhs.exponents[i] + rhs.exponents[i];
        if (table.odd(i)) {
            if (e > 1) return std::nullopt;
            lhs_odd_above -= lhs.exponents[i];
            if (rhs.exponents[i]) transpositions += lhs_odd_above;
        }
        out.monomial.exponents[i] = e;
    }
    if (transpositions & 1) out.sign = -1;
    return out;
}

std::string to_string(const VariableTable& table, const GradedMonomial& m) {
    std::string out;
    for (std::size_t i = 0; i < m.exponents.size(); ++i) {
        if (m.exponents[i] == 0) continue;
        if (!out.empty()) out += '*';
        out += table.graded_symbols()[i].name;
        if (m.exponents[i] != 1) out += '^' + std::to_string(m.exponents[i]);
    }
    return out.empty() ? "1" : out;
}

// HomogeneousComponent

HomogeneousComponent::HomogeneousComponent(TablePtr table, Degree degree, int order)
    : table_(std::move(table)), degree_(degree), order_(order) {
    if (!table_) throw Error(ErrorKind::InvalidArgument, "null variable table");
    if (order_ < 1) throw Error(ErrorKind::InvalidArgument, "truncation order must be positive");
}

void HomogeneousComponent::add_term(const GradedMonomial& m, const LaurentCoefficient& c) {
    if (!is_admissible(*table_, m)) throw Error(ErrorKind::InvalidArgument, "inadmissible monomial");
    if (c.arity() != table_->base_arity()) throw Error(ErrorKind::TableMismatch, "coefficient arity mismatch");
    if (monomial_degree(*table_, m) != degree_)
        throw Error(ErrorKind::InvalidArgument, "monomial degree differs from component degree");
    if (c.is_zero() || deg_minus(*table_, m) >= order_) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

bool operator==(const HomogeneousComponent& lhs, const HomogeneousComponent& rhs) {
    return lhs.degree_ == rhs.degree_ && lhs.order_ == rhs.order_ && same_table(lhs.table_, rhs.table_) &&
           lhs.terms_ == rhs.terms_;
}

// GradedSeries

GradedSeries::GradedSeries(TablePtr table, int order) : table_(std::move(table)), order_(order) {
    if (!table_) throw Error(ErrorKind::InvalidArgument, "null variable table");
    if (order_ < 1) throw Error(ErrorKind::InvalidArgument, "truncation order must be positive");
}

GradedSeries GradedSeries::one(TablePtr table, int order) { return constant(std::move(table), order, Rational(1)); }

GradedSeries GradedSeries::constant(TablePtr table, int order, const LaurentCoefficient& value) {
    GradedSeries s(std::move(table), order);
    s.add_term(unit_monomial(*s.table_), value);
    return s;
}

GradedSeries GradedSeries::constant(TablePtr table, int order, const Rational& value) {
    const std::size_t arity = table->base_arity();
    return constant(std::move(table), order, LaurentCoefficient::constant(arity, value));
}

GradedSeries GradedSeries::base_symbol(TablePtr table, int order, std::size_t base_index) {
    const std::size_t arity = table->base_arity();
    return constant(std::move(table), order, LaurentCoefficient::variable(arity, base_index));
}

GradedSeries GradedSeries::generator(TablePtr table, int order, std::size_t graded_index) {
    GradedSeries s(std::move(table), order);
    s.add_term(generator_monomial(*s.table_, graded_index),
               LaurentCoefficient::constant(s.table_->base_arity(), 1));
    return s;
}

GradedSeries GradedSeries::term(TablePtr table, int order, const GradedMonomial& m, const LaurentCoefficient& c) {
    GradedSeries s(std::move(table), order);
    s.add_term(m, c);
    return s;
}

GradedSeries GradedSeries::from_component(const HomogeneousComponent& component) {
    GradedSeries s(component.table(), component.order());
    if (!component.is_zero()) s.components_.emplace(component.degree(), component);
    return s;
}

std::optional<Degree> GradedSeries::degree() const {
    if (components_.size() != 1) return std::nullopt;
    return components_.begin()->first;
}

std::size_t GradedSeries::term_count() const {
    std::size_t n = 0;
    for (const auto& [d, comp] : components_) n += comp.terms().size();
    return n;
}

LaurentCoefficient GradedSeries::coefficient(const GradedMonomial& m) const {
    auto it = components_.find(monomial_degree(*table_, m));
    if (it != components_.end()) {
        auto jt = it->second.terms().find(m);
        if (jt != it->second.terms().end()) return jt->second;
    }
    return LaurentCoefficient(table_->base_arity());
}

LaurentCoefficient GradedSeries::base_part() const { return coefficient(unit_monomial(*table_)); }

void GradedSeries::add_term(const GradedMonomial& m, const LaurentCoefficient& c) {
    if (!is_admissible(*table_, m)) throw Error(ErrorKind::InvalidArgument, "inadmissible monomial");
    const Degree d = monomial_degree(*table_, m);
    auto it = components_.find(d);
    if (it == components_.end()) it = components_.emplace(d, HomogeneousComponent(table_, d, order_)).first;
    it->second.add_term(m, c);
    if (it->second.is_zero()) components_.erase(it);
}

void GradedSeries::check_compatible(const GradedSeries& other) const {
    if (!same_table(table_, other.table_)) throw Error(ErrorKind::TableMismatch, "series over different tables");
    if (order_ != other.order_)
        throw Error(ErrorKind::TruncationMismatch, "truncation orders " + std::to_string(order_) + " and " +
                                                       std::to_string(other.order_) + " differ");
}

GradedSeries& GradedSeries::operator+=(const GradedSeries& other) {
    check_compatible(other);
    other.for_each_term([&](const GradedMonomial& m, const LaurentCoefficient& c) { add_term(m, c); });
    return *this;
}

GradedSeries& GradedSeries::operator-=(const GradedSeries& other) {
    check_compatible(other);
    other.for_each_term([&](const GradedMonomial& m, const LaurentCoefficient& c) { add_term(m, -c); });
    return *this;
}

GradedSeries& GradedSeries::operator*=(const LaurentCoefficient& scalar) {
    GradedSeries out(table_, order_);
    for_each_term([&](const GradedMonomial& m, const LaurentCoefficient& c) { out.add_term(m, c * scalar); });
    *this = std::move(out);
    return *this;
}

GradedSeries& GradedSeries::operator*=(const Rational& scalar) {
    GradedSeries out(table_, order_);
    for_each_term([&](const GradedMonomial& m, const LaurentCoefficient& c) { out.add_term(m, c * scalar); });
    *this = std::move(out);
    return *this;
}

GradedSeries GradedSeries::operator-() const {
    GradedSeries out(table_, order_);
    for_each_term([&](const GradedMonomial& m, const LaurentCoefficient& c) { out.add_term(m, -c); });
    return out;
}

bool operator==(const GradedSeries& lhs, const GradedSeries& rhs) {
    return lhs.order_ == rhs.order_ && same_table(lhs.table_, rhs.table_) && lhs.components_ == rhs.components_;
}

GradedSeries series_multiply(const GradedSeries& lhs, const GradedSeries& rhs) {
    if (!same_table(lhs.table(), rhs.table())) throw Error(ErrorKind::TableMismatch, "series over different tables");
    if (lhs.order() != rhs.order())
        throw Error(ErrorKind::TruncationMismatch, "truncation orders " + std::to_string(lhs.order()) + " and " +
                                                       std::to_string(rhs.order()) + " differ");
    const VariableTable& table = *lhs.table();
    GradedSeries out(lhs.table(), lhs.order());
    lhs.for_each_term([&](const GradedMonomial& m1, const LaurentCoefficient& c1) {
        rhs.for_each_term([&](const GradedMonomial& m2, const LaurentCoefficient& c2) {
            auto prod = monomial_multiply(table, m1, m2);
            if (!prod || deg_minus(table, prod->monomial) >= out.order()) return;
            LaurentCoefficient c = c1 * c2;
            if (prod->sign < 0) c = -c;
            out.add_term(prod->monomial, c);
        });
    });
    return out;
}

GradedSeries power(const GradedSeries& base, int exponent) {
    if (exponent < 0) throw Error(ErrorKind::InvalidArgument, "negative power of a graded series");
    GradedSeries result = GradedSeries::one(base.table(), base.order());
    for (int k = 0; k < exponent; ++k) result = result * base;
    return result;
}

GradedSeries truncate(const GradedSeries& f, int new_order) {
    if (new_order < 1 || new_order > f.order())
        throw Error(ErrorKind::InvalidArgument, "truncation order " + std::to_string(new_order) +
                                                    " outside [1, " + std::to_string(f.order()) + "]");
    GradedSeries out(f.table(), new_order);
    f.for_each_term([&](const GradedMonomial& m, const LaurentCoefficient& c) { out.add_term(m, c); });
    return out;
}

int filtration_level(const GradedSeries& f) {
    if (f.is_zero()) throw Error(ErrorKind::ZeroInput, "the zero series lies in every filtration step");
    int level = std::numeric_limits<int>::max();
    f.for_each_term([&](const GradedMonomial& m, const LaurentCoefficient&) {
        level = std::min(level, deg_minus(*f.table(), m));
    });
    return level;
}

namespace {

// Number of monomials of each weight 0..max_weight in the free graded
// commutative algebra on generators with the given (absolute) weights.
std::vector<long> symmetric_counts(const std::vector<std::pair<int, bool>>& generators, int max_weight) {
    std::vector<long> counts(static_cast<std::size_t>(std::max(max_weight, 0)) + 1, 0);
    counts[0] = 1;
    for (auto [w, odd] : generators) {
        if (odd) {
            for (int t = max_weight; t >= w; --t) counts[t] += counts[t - w];
        } else {
            for (int t = w; t <= max_weight; ++t) counts[t] += counts[t - w];
        }
    }
    return counts;
}

} // namespace

long quotient_graded_dimension(const GradedDimension& gd, int p, Degree i, int weight_cap) {
    if (p < 0) throw Error(ErrorKind::InvalidArgument, "filtration index must be nonnegative");
    if (weight_cap < 2 * p - i)
        throw Error(ErrorKind::CapTooSmall, "weight cap " + std::to_string(weight_cap) + " below bound 2p-i = " +
                                                std::to_string(2 * p - i));
    const int lo = std::max(0, i);
    if (lo > p - 1) return 0;
    std::vector<std::pair<int, bool>> positive, negative;
    for (auto [d, n] : gd.dims()) {
        for (long k = 0; k < n; ++k) (d > 0 ? positive : negative).emplace_back(d > 0 ? d : -d, is_odd(d));
    }
    const auto pos = symmetric_counts(positive, p - 1);
    const auto neg = symmetric_counts(negative, p - 1 - i);
    long total = 0;
    for (int q = lo; q <= p - 1; ++q) total += pos[q] * neg[q - i];
    return total;
}

std::string to_string(const GradedSeries& f) {
    if (f.is_zero()) return "0";
    const VariableTable& table = *f.table();
    std::string out;
    f.for_each_term([&](const GradedMonomial& m, const LaurentCoefficient& c) {
        const bool unit = std::all_of(m.exponents.begin(), m.exponents.end(), [](int e) { return e == 0; });
        std::string text;
        if (unit) {
            text = c.to_string(table.base_symbols());
        } else {
            const std::string mono = to_string(table, m);
            if (c.needs_parentheses()) {
                text = "(" + c.to_string(table.base_symbols()) + ")*" + mono;
            } else if (c.is_constant() && c.constant_term() == 1) {
                text = mono;
            } else if (c.is_constant() && c.constant_term() == -1) {
                text = "-" + mono;
            } else {
                text = c.to_string(table.base_symbols()) + "*" + mono;
            }
        }
        if (out.empty()) {
            out = text;
        } else if (text.front() == '-') {
            out += " - " + text.substr(1);
        } else {
            out += " + " + text;
        }
    });
    return out;
}

} // namespace gradkernel
