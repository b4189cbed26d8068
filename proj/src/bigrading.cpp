#include "gradkernel/bigrading.hpp"

#include "gradkernel/error.hpp"

namespace gradkernel {

BigradedElement::BigradedElement(TablePtr table, int order) : table_(std::move(table)), order_(order) {
    if (!table_) throw Error(ErrorKind::InvalidArgument, "null variable table");
}

void BigradedElement::add_term(const GradedMonomial& m, const LaurentCoefficient& c) {
    if (c.is_zero()) return;
    const Bidegree bd{deg_plus(*table_, m), deg_minus(*table_, m)};
    Terms& terms = components_[bd];
    auto [it, inserted] = terms.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
    if (terms.empty()) components_.erase(bd);
}

BigradedElement BigradedElement::slice(int q) const {
    BigradedElement out(table_, order_);
    for (const auto& [bd, terms] : components_)
        if (bd.second == q) out.components_.emplace(bd, terms);
    return out;
}

bool operator==(const BigradedElement& lhs, const BigradedElement& rhs) {
    return same_table(lhs.table_, rhs.table_) && lhs.order_ == rhs.order_ && lhs.components_ == rhs.components_;
}

BigradedElement associated_graded(const GradedSeries& f) {
    BigradedElement out(f.table(), f.order());
    f.for_each_term([&](const GradedMonomial& m, const LaurentCoefficient& c) { out.add_term(m, c); });
    return out;
}

GradedSeries regrade(const BigradedElement& b) {
    GradedSeries out(b.table(), b.order());
    for (const auto& [bd, terms] : b.components())
        for (const auto& [m, c] : terms) out.add_term(m, c);
    return out;
}

GradedSeries euler(const GradedSeries& f, EulerKind which) {
    const VariableTable& table = *f.table();
    GradedSeries out(f.table(), f.order());
    f.for_each_term([&](const GradedMonomial& m, const LaurentCoefficient& c) {
        int weight = 0;
        switch (which) {
        case EulerKind::Plus: weight = deg_plus(table, m); break;
        case EulerKind::Minus: weight = deg_minus(table, m); break;
        case EulerKind::Total: weight = deg_plus(table, m) - deg_minus(table, m); break;
        }
        if (weight != 0) out.add_term(m, c * Rational(weight));
    });
    return out;
}

CheckReport check_gr_idempotence(const GradedSeries& f, int order) {
    if (order < 1 || order > f.order())
        throw Error(ErrorKind::InvalidArgument, "idempotence check order outside [1, series order]");
    CheckReport report;
    const BigradedElement direct = associated_graded(f);
    for (int q = 0; q < order; ++q) {
        const BigradedElement tower = associated_graded(truncate(f, q + 1));
        for (int slice = 0; slice <= q; ++slice) {
            if (tower.slice(slice).components() != direct.slice(slice).components())
                report.fail("slice [" + std::to_string(slice) + "] differs at tower level " + std::to_string(q + 1));
        }
        for (const auto& [bd, terms] : tower.components())
            if (bd.second > q) report.fail("truncation to " + std::to_string(q + 1) + " kept bidegree (" +
                                           std::to_string(bd.first) + "," + std::to_string(bd.second) + ")");
    }
    return report;
}

std::string to_string(const BigradedElement& b) {
    if (b.is_zero()) return "0\n";
    std::string out;
    for (const auto& [bd, terms] : b.components()) {
        GradedSeries s(b.table(), b.order());
        for (const auto& [m, c] : terms) s.add_term(m, c);
        out += "(" + std::to_string(bd.first) + "," + std::to_string(bd.second) + "): " + to_string(s) + "\n";
    }
    return out;
}

} // namespace gradkernel
