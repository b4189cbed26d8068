#pragma once

#include "gradkernel/morphism.hpp"

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gradkernel {

struct Chart {
    std::string id;
    TablePtr table;
    /// Per base symbol: whether negative powers are regular on the chart.
    std::vector<bool> laurent_allowed;
};

/// Charts glued by transition morphisms. The transition (i, j) has source
/// chart i and target chart j: it expresses the coordinates of chart j in
/// terms of those of chart i on the overlap.
class Atlas {
public:
    explicit Atlas(int order);

    int order() const noexcept { return order_; }

    void add_chart(Chart chart);
    void add_transition(const std::string& from, const std::string& to, GradedMorphism morphism);

    const std::vector<Chart>& charts() const noexcept { return charts_; }
    const Chart& chart(const std::string& id) const;
    bool has_chart(const std::string& id) const;
    const std::map<std::pair<std::string, std::string>, GradedMorphism>& transitions() const noexcept {
        return transitions_;
    }
    bool has_transition(const std::string& from, const std::string& to) const;
    /// Identity for from == to; throws MissingTransition when not listed.
    GradedMorphism transition(const std::string& from, const std::string& to) const;

private:
    int order_;
    std::vector<Chart> charts_;
    std::map<std::pair<std::string, std::string>, GradedMorphism> transitions_;
};

struct ChartTriple {
    std::string i, j, k;
};

/// Every (i, j, k) with i != j != k for which all three transitions are
/// available; (i, j, i) compares T_ij T_ji with the identity.
std::vector<ChartTriple> default_triples(const Atlas& atlas);

/// Each listed transition (i, j) must have a listed (j, i) forming an
/// inverse pair modulo F^order.
CheckReport check_transitions_invertible(const Atlas& atlas);

/// compose(T_ij, T_jk) == T_ik for each triple. Throws MissingTransition
/// when a triple refers to an unlisted transition.
CheckReport check_cocycle(const Atlas& atlas, const std::vector<ChartTriple>& triples);
/// Invertibility of all transitions followed by all default triples.
CheckReport check_cocycle(const Atlas& atlas);

/// A per-chart change of coordinates and its inverse, both from the chart
/// table to itself.
struct ChartCorrection {
    GradedMorphism forward;
    GradedMorphism inverse;
};

/// Verifies that the corrections turn every transition of `twisted` into
/// the corresponding transition of `split`: for each listed (i, j),
/// compose(G_i^-1, compose(T_ij, G_j)) == S_ij.
CheckReport check_coboundary(const Atlas& twisted, const Atlas& split,
                             const std::map<std::string, ChartCorrection>& corrections);

// Projective line examples.

enum class BundleCase { N, Z };

/// Two line bundles O(k), O(l) over the projective line with generator
/// degrees. The N case uses degrees (d, 2d) with d even and a quadratic
/// twist of the second coordinate; the Z case uses degrees (d, -d) with d
/// odd and a twist of the base coordinate by the product of the two.
struct LineBundleSpec {
    BundleCase kind = BundleCase::N;
    int k = 0;
    int l = 0;
    Degree first_degree = 2;
    Degree second_degree = 4;

    static LineBundleSpec n_case(int k, int l) { return {BundleCase::N, k, l, 2, 4}; }
    static LineBundleSpec z_case(int k, int l) { return {BundleCase::Z, k, l, 1, -1}; }
};

/// m with the obstruction space equal to global sections of O(m):
/// 2k - l - 2 in the N case, k + l - 4 in the Z case.
int obstruction_exponent(const LineBundleSpec& spec);

/// Global sections of O(m): monomials x^j regular on the first chart
/// that stay regular on the second after the O(m) twist x^j -> y^(m-j).
long global_section_count(int m);

long obstruction_dimension(const LineBundleSpec& spec);

/// Twist coefficient (a Laurent polynomial in the first chart coordinate)
/// for the given section coordinates; throws DimensionMismatch unless the
/// length equals obstruction_dimension(spec).
LaurentCoefficient section_twist(const LineBundleSpec& spec, std::span<const Rational> section);

/// Two-chart atlas with the given twist. Chart ids are U0 and U1.
Atlas build_cp1_atlas(const LineBundleSpec& spec, const LaurentCoefficient& twist, int order);
Atlas build_cp1_example(const LineBundleSpec& spec, std::span<const Rational> section, int order);

/// Twist produced from the split model by the chart corrections gamma0
/// (a Laurent polynomial in x) and gamma1 (in y).
LaurentCoefficient cp1_coboundary_twist(const LineBundleSpec& spec, const LaurentCoefficient& gamma0,
                                        const LaurentCoefficient& gamma1);

/// Corrections psi -> psi + gamma/2 * xi^2 (N case) or x -> x + gamma*z*w
/// (Z case) on both charts.
std::map<std::string, ChartCorrection> cp1_corrections(const LineBundleSpec& spec, const Atlas& atlas,
                                                       const LaurentCoefficient& gamma0,
                                                       const LaurentCoefficient& gamma1);

/// Twist of the reverse transition U1 -> U0 brought back to the frames of
/// U0 -> U1 via the split part of the transition.
LaurentCoefficient transported_reverse_twist(const LineBundleSpec& spec, const Atlas& atlas);

struct ExponentWindow {
    int lo = 0;
    int hi = 0;

    static ExponentWindow default_for(const LineBundleSpec& spec);
};

struct SplittingSearch {
    bool found = false;
    std::size_t unknowns = 0;
    LaurentCoefficient gamma0;
    LaurentCoefficient gamma1;
    std::string summary;
};

/// Looks for chart corrections with exponents in the window (restricted to
/// exponents regular on each chart) that split the twisted atlas. Solves
/// the resulting exact linear system; a failure only means no splitting
/// within the window.
SplittingSearch search_cp1_splitting(const LineBundleSpec& spec, const Atlas& twisted, ExponentWindow window);

// Positive and negative parts.

/// Table with the base symbols shared by `plus` and `minus`, followed by
/// the generators of `plus` and then those of `minus`.
VariableTable fibered_product(const VariableTable& plus, const VariableTable& minus);

/// Endomorphism sending all negative (resp. positive) generators to zero.
GradedMorphism kill_negative(TablePtr table, int order);
GradedMorphism kill_positive(TablePtr table, int order);

} // namespace gradkernel
