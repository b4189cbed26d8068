#pragma once

#include "gradkernel/series.hpp"

#include <map>
#include <string>
#include <vector>

namespace gradkernel {

/// Exponents over the degree-zero Hilbert monomials z_1, ..., z_r.
using TailExponents = std::vector<int>;
using Tail = std::map<TailExponents, LaurentCoefficient>;

struct NormalFormPart {
    GradedMonomial leading;
    Tail tail;

    friend bool operator==(const NormalFormPart&, const NormalFormPart&) = default;
};

/// A homogeneous component written as sum_leading tail(x, z) * leading,
/// where the z's are the degree-zero Hilbert monomials in the even
/// generators and each leading monomial is an odd factor times a minimal
/// solution of the even degree equation.
struct NormalForm {
    TablePtr table;
    Degree degree = 0;
    std::vector<GradedMonomial> basis;
    std::vector<NormalFormPart> parts; // sorted by leading monomial

    friend bool operator==(const NormalForm& lhs, const NormalForm& rhs);
};

/// Degree-zero monomials of the Hilbert basis of the even generators,
/// sorted by their solution vectors. Empty when the even generators all
/// have the same sign.
std::vector<GradedMonomial> degree_zero_monomial_basis(const VariableTable& table);

NormalForm to_normal_form(const HomogeneousComponent& f);

/// Expands the normal form modulo F^order.
HomogeneousComponent from_normal_form(const NormalForm& nf, int order);

std::string to_string(const NormalForm& nf);

} // namespace gradkernel
