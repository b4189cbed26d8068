#include "gradkernel/grading.hpp"

#include "gradkernel/error.hpp"

#include <algorithm>

namespace gradkernel {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ShiftCreatesDegreeZero: return "ShiftCreatesDegreeZero";
    case ErrorKind::NotASolution: return "NotASolution";
    case ErrorKind::BoundTooLarge: return "BoundTooLarge";
    case ErrorKind::TableMismatch: return "TableMismatch";
    case ErrorKind::OrderTooLarge: return "OrderTooLarge";
    case ErrorKind::TruncationMismatch: return "TruncationMismatch";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::CapTooSmall: return "CapTooSmall";
    case ErrorKind::NonComposableDomains: return "NonComposableDomains";
    case ErrorKind::NonFormalSubstitution: return "NonFormalSubstitution";
    case ErrorKind::NonInvertibleCoefficient: return "NonInvertibleCoefficient";
    case ErrorKind::MissingTransition: return "MissingTransition";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    }
    return "Unknown";
}

GradedDimension::GradedDimension(const std::map<Degree, long>& dims) {
    for (auto [d, n] : dims) {
        if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative dimension in degree " + std::to_string(d));
        if (n == 0) continue;
        if (d == 0) throw Error(ErrorKind::InvalidArgument, "graded dimension must vanish in degree 0");
        dims_.emplace(d, n);
    }
}

long GradedDimension::at(Degree d) const {
    auto it = dims_.find(d);
    return it == dims_.end() ? 0 : it->second;
}

long GradedDimension::total() const {
    long t = 0;
    for (auto [d, n] : dims_) t += n;
    return t;
}

GradedDimension shift(const GradedDimension& gd, int k) {
    if (gd.at(k) > 0)
        throw Error(ErrorKind::ShiftCreatesDegreeZero,
                    "shifting by " + std::to_string(k) + " moves degree " + std::to_string(k) + " to 0");
    std::map<Degree, long> out;
    for (auto [d, n] : gd.dims()) out[d - k] = n;
    return GradedDimension(out);
}

GradedDimension dual(const GradedDimension& gd) {
    std::map<Degree, long> out;
    for (auto [d, n] : gd.dims()) out[-d] = n;
    return GradedDimension(out);
}

long hom_dimension(const GradedDimension& gd1, const GradedDimension& gd2, Degree p) {
    long total = 0;
    for (auto [d, n] : gd1.dims()) total += n * gd2.at(d + p);
    return total;
}

VariableTable::VariableTable(std::vector<std::string> base_symbols, std::vector<GradedSymbol> graded_symbols) {
    for (auto& b : base_symbols) add_base(std::move(b));
    for (auto& g : graded_symbols) add_graded(std::move(g.name), g.degree);
}

void VariableTable::check_new_name(const std::string& name) const {
    if (name.empty()) throw Error(ErrorKind::InvalidArgument, "empty symbol name");
    if (contains(name)) throw Error(ErrorKind::InvalidArgument, "duplicate symbol '" + name + "'");
}

void VariableTable::add_base(std::string name) {
    check_new_name(name);
    base_.push_back(std::move(name));
}

void VariableTable::add_graded(std::string name, Degree degree) {
    check_new_name(name);
    if (degree == 0)
        throw Error(ErrorKind::InvalidArgument,
                    "graded symbol '" + name + "' has degree 0; declare it as a base symbol");
    graded_.push_back({std::move(name), degree});
}

std::optional<std::size_t> VariableTable::find_base(std::string_view name) const {
    auto it = std::find(base_.begin(), base_.end(), name);
    if (it == base_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - base_.begin());
}

std::optional<std::size_t> VariableTable::find_graded(std::string_view name) const {
    for (std::size_t i = 0; i < graded_.size(); ++i)
        if (graded_[i].name == name) return i;
    return std::nullopt;
}

bool VariableTable::contains(std::string_view name) const {
    return find_base(name).has_value() || find_graded(name).has_value();
}

GradedDimension VariableTable::graded_dimension() const {
    std::map<Degree, long> dims;
    for (const auto& g : graded_) ++dims[g.degree];
    return GradedDimension(dims);
}

} // namespace gradkernel
