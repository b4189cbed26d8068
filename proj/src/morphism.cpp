#include "gradkernel/morphism.hpp"

#include "gradkernel/error.hpp"

#include <algorithm>
#include <map>

namespace gradkernel {

GradedMorphism::GradedMorphism(TablePtr source, TablePtr target, std::vector<GradedSeries> base_images,
                               std::vector<GradedSeries> graded_images)
    : source_(std::move(source)), target_(std::move(target)), order_(0), base_images_(std::move(base_images)),
      graded_images_(std::move(graded_images)) {
    if (!source_ || !target_) throw Error(ErrorKind::InvalidArgument, "null variable table");
    if (base_images_.size() != target_->base_arity() || graded_images_.size() != target_->graded_count())
        throw Error(ErrorKind::InvalidArgument, "a morphism needs exactly one image per target symbol");
    if (base_images_.empty() && graded_images_.empty())
        throw Error(ErrorKind::InvalidArgument, "a morphism into an empty table carries no truncation order");
    order_ = (base_images_.empty() ? graded_images_.front() : base_images_.front()).order();
    auto check = [&](const GradedSeries& s) {
        if (!same_table(s.table(), source_)) throw Error(ErrorKind::TableMismatch, "image not over the source table");
        if (s.order() != order_) throw Error(ErrorKind::TruncationMismatch, "images with different truncation orders");
    };
    std::for_each(base_images_.begin(), base_images_.end(), check);
    std::for_each(graded_images_.begin(), graded_images_.end(), check);
}

GradedMorphism GradedMorphism::identity(TablePtr table, int order) {
    std::vector<GradedSeries> base, graded;
    for (std::size_t i = 0; i < table->base_arity(); ++i) base.push_back(GradedSeries::base_symbol(table, order, i));
    for (std::size_t i = 0; i < table->graded_count(); ++i) graded.push_back(GradedSeries::generator(table, order, i));
    return GradedMorphism(table, table, std::move(base), std::move(graded));
}

const GradedSeries& GradedMorphism::image(std::string_view target_symbol) const {
    if (auto b = target_->find_base(target_symbol)) return base_images_[*b];
    if (auto g = target_->find_graded(target_symbol)) return graded_images_[*g];
    throw Error(ErrorKind::InvalidArgument, "unknown target symbol '" + std::string(target_symbol) + "'");
}

GradedMorphism GradedMorphism::with_image(std::string_view target_symbol, GradedSeries image) const {
    GradedMorphism out = *this;
    if (!same_table(image.table(), source_)) throw Error(ErrorKind::TableMismatch, "image not over the source table");
    if (image.order() != order_) throw Error(ErrorKind::TruncationMismatch, "image truncation order differs");
    if (auto b = target_->find_base(target_symbol)) {
        out.base_images_[*b] = std::move(image);
    } else if (auto g = target_->find_graded(target_symbol)) {
        out.graded_images_[*g] = std::move(image);
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown target symbol '" + std::string(target_symbol) + "'");
    }
    return out;
}

bool operator==(const GradedMorphism& lhs, const GradedMorphism& rhs) {
    return same_table(lhs.source_, rhs.source_) && same_table(lhs.target_, rhs.target_) && lhs.order_ == rhs.order_ &&
           lhs.base_images_ == rhs.base_images_ && lhs.graded_images_ == rhs.graded_images_;
}

int derived_taylor_order(const GradedSeries& correction) {
    if (correction.is_zero()) return 0;
    const int p = correction.order();
    const int level = filtration_level(correction);
    if (level >= 1) return (p + level - 1) / level - 1;

    const VariableTable& table = *correction.table();
    bool nilpotent = true;
    correction.for_each_term([&](const GradedMonomial& m, const LaurentCoefficient&) {
        bool has_odd = false;
        for (std::size_t i = 0; i < m.exponents.size(); ++i) has_odd = has_odd || (table.odd(i) && m.exponents[i]);
        nilpotent = nilpotent && has_odd;
    });
    if (!nilpotent)
        throw Error(ErrorKind::NonFormalSubstitution,
                    "base symbol correction " + to_string(correction) + " is neither filtered nor nilpotent");
    int odd_count = 0;
    for (std::size_t i = 0; i < table.graded_count(); ++i) odd_count += table.odd(i) ? 1 : 0;
    return odd_count;
}

namespace {

struct BaseShift {
    std::vector<GradedSeries> correction_powers; // d^0, d^1, ..., d^K
    std::map<int, GradedSeries> power_cache;    // exponent -> image of x^exponent
};

} // namespace

GradedSeries pullback(const GradedMorphism& phi, const GradedSeries& f) {
    if (!same_table(f.table(), phi.target()))
        throw Error(ErrorKind::TableMismatch, "series is not over the morphism's target table");
    if (f.order() != phi.order())
        throw Error(ErrorKind::TruncationMismatch, "series order " + std::to_string(f.order()) +
                                                       " differs from morphism order " + std::to_string(phi.order()));
    const TablePtr& src = phi.source();
    const VariableTable& tgt = *phi.target();
    const int p = phi.order();
    const std::size_t src_arity = src->base_arity();

    std::vector<LaurentCoefficient> base_values;
    std::vector<BaseShift> shifts(tgt.base_arity());
    for (std::size_t j = 0; j < tgt.base_arity(); ++j) {
        const GradedSeries& img = phi.base_images()[j];
        base_values.push_back(img.base_part());
        GradedSeries correction = img - GradedSeries::constant(src, p, base_values.back());
        const int order = derived_taylor_order(correction);
        if (order > kMaxTaylorOrder)
            throw Error(ErrorKind::OrderTooLarge, "derived Taylor order " + std::to_string(order) + " too large");
        auto& powers = shifts[j].correction_powers;
        powers.push_back(GradedSeries::one(src, p));
        for (int k = 1; k <= order; ++k) powers.push_back(powers.back() * correction);
    }

    // Image of x_j^e: sum_k [k-th Taylor coefficient of x^e at g_j] d_j^k.
    auto base_power = [&](std::size_t j, int e) -> const GradedSeries& {
        auto& cache = shifts[j].power_cache;
        if (auto it = cache.find(e); it != cache.end()) return it->second;
        const auto& powers = shifts[j].correction_powers;
        const auto taylor = LaurentCoefficient::variable(tgt.base_arity(), j, e)
                                .taylor_shift(j, static_cast<int>(powers.size()) - 1);
        GradedSeries sum = GradedSeries::zero(src, p);
        for (std::size_t k = 0; k < taylor.size(); ++k) {
            if (taylor[k].is_zero()) continue;
            sum += powers[k] * taylor[k].substitute(base_values, src_arity);
        }
        return cache.emplace(e, std::move(sum)).first->second;
    };

    std::vector<std::map<int, GradedSeries>> generator_powers(tgt.graded_count());
    auto generator_power = [&](std::size_t i, int e) -> const GradedSeries& {
        auto& cache = generator_powers[i];
        if (auto it = cache.find(e); it != cache.end()) return it->second;
        return cache.emplace(e, power(phi.graded_images()[i], e)).first->second;
    };

    GradedSeries out = GradedSeries::zero(src, p);
    f.for_each_term([&](const GradedMonomial& m, const LaurentCoefficient& c) {
        GradedSeries coefficient_image = GradedSeries::zero(src, p);
        for (const auto& [e, r] : c.terms()) {
            GradedSeries t = GradedSeries::constant(src, p, r);
            for (std::size_t j = 0; j < e.size(); ++j)
                if (e[j] != 0) t = t * base_power(j, e[j]);
            coefficient_image += t;
        }
        GradedSeries term = coefficient_image;
        for (std::size_t i = 0; i < m.exponents.size() && !term.is_zero(); ++i)
            if (m.exponents[i] != 0) term = term * generator_power(i, m.exponents[i]);
        out += term;
    });
    return out;
}

GradedMorphism compose(const GradedMorphism& phi, const GradedMorphism& chi) {
    if (!same_table(phi.target(), chi.source()))
        throw Error(ErrorKind::NonComposableDomains, "target of the first morphism is not the source of the second");
    if (phi.order() != chi.order()) throw Error(ErrorKind::TruncationMismatch, "morphism truncation orders differ");
    std::vector<GradedSeries> base, graded;
    for (const auto& img : chi.base_images()) base.push_back(pullback(phi, img));
    for (const auto& img : chi.graded_images()) graded.push_back(pullback(phi, img));
    return GradedMorphism(phi.source(), chi.target(), std::move(base), std::move(graded));
}

GradedMorphism truncate(const GradedMorphism& phi, int new_order) {
    std::vector<GradedSeries> base, graded;
    for (const auto& img : phi.base_images()) base.push_back(truncate(img, new_order));
    for (const auto& img : phi.graded_images()) graded.push_back(truncate(img, new_order));
    return GradedMorphism(phi.source(), phi.target(), std::move(base), std::move(graded));
}

bool is_inverse_pair(const GradedMorphism& phi, const GradedMorphism& chi) {
    if (!same_table(phi.target(), chi.source()) || !same_table(chi.target(), phi.source())) return false;
    return compose(phi, chi) == GradedMorphism::identity(phi.source(), phi.order()) &&
           compose(chi, phi) == GradedMorphism::identity(chi.source(), chi.order());
}

namespace {

std::string degree_list(const GradedSeries& s) {
    std::string out;
    for (const auto& [d, comp] : s.components()) {
        if (!out.empty()) out += ", ";
        out += std::to_string(d);
    }
    return out;
}

void check_image(CheckReport& report, const std::string& name, Degree expected, const GradedSeries& img) {
    if (img.is_zero()) return;
    if (!img.is_homogeneous()) {
        report.fail(name + ": image is not homogeneous (degrees " + degree_list(img) + "), expected degree " +
                    std::to_string(expected));
    } else if (*img.degree() != expected) {
        report.fail(name + ": image has degree " + std::to_string(*img.degree()) + ", expected " +
                    std::to_string(expected));
    }
}

// Monomials in the negative generators that generate F^q as an ideal:
// deg_minus >= q, and dropping any single factor falls below q.
std::vector<GradedMonomial> filtration_generators(const VariableTable& table, int q) {
    std::vector<std::size_t> negative;
    for (std::size_t i = 0; i < table.graded_count(); ++i)
        if (table.degree(i) < 0) negative.push_back(i);
    std::vector<GradedMonomial> out;
    GradedMonomial m = unit_monomial(table);
    auto visit = [&](auto&& self, std::size_t pos, int weight) -> void {
        if (weight >= q) {
            bool minimal = true;
            for (std::size_t i : negative)
                if (m.exponents[i] > 0 && weight + table.degree(i) >= q) minimal = false;
            if (minimal) out.push_back(m);
            return;
        }
        if (pos == negative.size()) return;
        const std::size_t g = negative[pos];
        const int max_exp = table.odd(g) ? 1 : (q - weight + (-table.degree(g)) - 1) / (-table.degree(g));
        for (int e = 0; e <= max_exp; ++e) {
            m.exponents[g] = e;
            self(self, pos + 1, weight - e * table.degree(g));
        }
        m.exponents[g] = 0;
    };
    visit(visit, 0, 0);
    return out;
}

} // namespace

CheckReport check_degree_preserving(const GradedMorphism& phi) {
    CheckReport report;
    const VariableTable& tgt = *phi.target();
    for (std::size_t j = 0; j < tgt.base_arity(); ++j)
        check_image(report, tgt.base_symbols()[j], 0, phi.base_images()[j]);
    for (std::size_t i = 0; i < tgt.graded_count(); ++i)
        check_image(report, tgt.graded_symbols()[i].name, tgt.degree(i), phi.graded_images()[i]);
    return report;
}

CheckReport filtration_compatibility(const GradedMorphism& phi) {
    CheckReport report;
    const VariableTable& tgt = *phi.target();
    const auto base_arity = tgt.base_arity();
    for (int q = 1; q < phi.order(); ++q) {
        for (const auto& g : filtration_generators(tgt, q)) {
            const auto f = GradedSeries::term(phi.target(), phi.order(), g, LaurentCoefficient::constant(base_arity, 1));
            const auto img = pullback(phi, f);
            if (!img.is_zero() && filtration_level(img) < q)
                report.fail("F^" + std::to_string(q) + " generator " + to_string(tgt, g) + " pulls back to level " +
                            std::to_string(filtration_level(img)));
        }
    }
    return report;
}

std::string to_string(const GradedMorphism& phi) {
    const VariableTable& tgt = *phi.target();
    std::string out;
    auto add = [&](const std::string& name, const GradedSeries& img) {
        if (!out.empty()) out += "; ";
        out += name + " -> " + to_string(img);
    };
    for (std::size_t j = 0; j < tgt.base_arity(); ++j) add(tgt.base_symbols()[j], phi.base_images()[j]);
    for (std::size_t i = 0; i < tgt.graded_count(); ++i) add(tgt.graded_symbols()[i].name, phi.graded_images()[i]);
    return out;
}

} // namespace gradkernel
