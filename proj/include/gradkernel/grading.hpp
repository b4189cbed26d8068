#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gradkernel {

/// The Z-grading. Degree 0 is reserved for base coordinates.
using Degree = int;

/// Koszul sign (-1)^(d1*d2) for commuting homogeneous elements past each other.
constexpr int commutation_sign(Degree d1, Degree d2) noexcept {
    return ((d1 & 1) && (d2 & 1)) ? -1 : 1;
}

constexpr bool is_odd(Degree d) noexcept { return (d & 1) != 0; }

/// Finite graded rank: degree -> dimension. Degree 0 never appears and
/// every stored dimension is positive.
class GradedDimension {
public:
    GradedDimension() = default;
    explicit GradedDimension(const std::map<Degree, long>& dims);

    const std::map<Degree, long>& dims() const noexcept { return dims_; }
    long at(Degree d) const;
    long total() const;
    bool empty() const noexcept { return dims_.empty(); }

    friend bool operator==(const GradedDimension&, const GradedDimension&) = default;

private:
    std::map<Degree, long> dims_;
};

/// dims'(i) = dims(i + k). Throws ShiftCreatesDegreeZero when dims(k) > 0.
GradedDimension shift(const GradedDimension& gd, int k);

/// dims'(-i) = dims(i).
GradedDimension dual(const GradedDimension& gd);

/// Rank of the degree-p part of the space of bounded-degree module maps:
/// sum_i dims1(i) * dims2(i + p).
long hom_dimension(const GradedDimension& gd1, const GradedDimension& gd2, Degree p);

struct GradedSymbol {
    std::string name;
    Degree degree;

    friend bool operator==(const GradedSymbol&, const GradedSymbol&) = default;
};

/// Ordered coordinates of a chart: degree-0 base symbols followed by graded
/// generators. The order is the canonical monomial order.
class VariableTable {
public:
    VariableTable() = default;
    VariableTable(std::vector<std::string> base_symbols, std::vector<GradedSymbol> graded_symbols);

    void add_base(std::string name);
    void add_graded(std::string name, Degree degree);

    const std::vector<std::string>& base_symbols() const noexcept { return base_; }
    const std::vector<GradedSymbol>& graded_symbols() const noexcept { return graded_; }
    std::size_t base_arity() const noexcept { return base_.size(); }
    std::size_t graded_count() const noexcept { return graded_.size(); }

    Degree degree(std::size_t graded_index) const { return graded_.at(graded_index).degree; }
    bool odd(std::size_t graded_index) const { return is_odd(degree(graded_index)); }

    std::optional<std::size_t> find_base(std::string_view name) const;
    std::optional<std::size_t> find_graded(std::string_view name) const;
    bool contains(std::string_view name) const;

    /// Graded dimension of the coordinate space (one per generator).
    GradedDimension graded_dimension() const;

    friend bool operator==(const VariableTable&, const VariableTable&) = default;

private:
    void check_new_name(const std::string& name) const;

    std::vector<std::string> base_;
    std::vector<GradedSymbol> graded_;
};

using TablePtr = std::shared_ptr<const VariableTable>;

inline TablePtr make_table(VariableTable table) {
    return std::make_shared<const VariableTable>(std::move(table));
}

inline bool same_table(const TablePtr& a, const TablePtr& b) {
    return a == b || (a && b && *a == *b);
}

} // namespace gradkernel
