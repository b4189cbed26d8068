#pragma once

#include "gradkernel/series.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace gradkernel {

struct CheckReport {
    bool passed = true;
    std::vector<std::string> failures;

    void fail(std::string message) {
        passed = false;
        failures.push_back(std::move(message));
    }
};

/// Algebra morphism given on generators: every symbol of the target table
/// is sent to a series over the source table. Pullback goes from functions
/// on the target to functions on the source.
class GradedMorphism {
public:
    GradedMorphism(TablePtr source, TablePtr target, std::vector<GradedSeries> base_images,
                   std::vector<GradedSeries> graded_images);

    static GradedMorphism identity(TablePtr table, int order);

    const TablePtr& source() const noexcept { return source_; }
    const TablePtr& target() const noexcept { return target_; }
    int order() const noexcept { return order_; }

    const std::vector<GradedSeries>& base_images() const noexcept { return base_images_; }
    const std::vector<GradedSeries>& graded_images() const noexcept { return graded_images_; }
    const GradedSeries& image(std::string_view target_symbol) const;

    /// Copy with the image of one target symbol replaced.
    GradedMorphism with_image(std::string_view target_symbol, GradedSeries image) const;

    friend bool operator==(const GradedMorphism& lhs, const GradedMorphism& rhs);

private:
    TablePtr source_;
    TablePtr target_;
    int order_;
    std::vector<GradedSeries> base_images_;
    std::vector<GradedSeries> graded_images_;
};

/// Number of Taylor terms beyond the zeroth needed when a base symbol is
/// shifted by `correction` modulo F^order. Filtered corrections of level l
/// need ceil(order/l) - 1; unfiltered corrections must be nilpotent through
/// odd generators. Anything else throws NonFormalSubstitution.
int derived_taylor_order(const GradedSeries& correction);

/// Substitutes the images of the target symbols into f. Each base symbol
/// image is split as g + d with g its coefficient part; coefficients are
/// expanded as f(g + d) = sum_k f^(k)(g) d^k / k!.
GradedSeries pullback(const GradedMorphism& phi, const GradedSeries& f);

/// For phi: A -> B and chi: B -> C, the morphism A -> C whose images are
/// the pullbacks along phi of the images of chi.
GradedMorphism compose(const GradedMorphism& phi, const GradedMorphism& chi);

GradedMorphism truncate(const GradedMorphism& phi, int new_order);

/// True when both composites are identities modulo F^order.
bool is_inverse_pair(const GradedMorphism& phi, const GradedMorphism& chi);

/// Every image homogeneous of the degree of its symbol.
CheckReport check_degree_preserving(const GradedMorphism& phi);

/// Pulls back the ideal generators of F^q (q < order) and checks that the
/// results stay in F^q.
CheckReport filtration_compatibility(const GradedMorphism& phi);

/// `x -> x + z*w; z -> z` listing, target symbols in table order.
std::string to_string(const GradedMorphism& phi);

} // namespace gradkernel
