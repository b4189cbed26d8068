#include "gradkernel/atlas.hpp"

#include "gradkernel/error.hpp"

#include <algorithm>
#include <cstdlib>

namespace gradkernel {

Atlas::Atlas(int order) : order_(order) {
    if (order_ < 1) throw Error(ErrorKind::InvalidArgument, "truncation order must be positive");
}

void Atlas::add_chart(Chart chart) {
    if (!chart.table) throw Error(ErrorKind::InvalidArgument, "chart without a table");
    if (has_chart(chart.id)) throw Error(ErrorKind::InvalidArgument, "duplicate chart '" + chart.id + "'");
    if (chart.laurent_allowed.empty()) chart.laurent_allowed.assign(chart.table->base_arity(), false);
    if (chart.laurent_allowed.size() != chart.table->base_arity())
        throw Error(ErrorKind::InvalidArgument, "chart '" + chart.id + "': one Laurent flag per base symbol");
    if (!charts_.empty() && charts_.front().table->graded_dimension() != chart.table->graded_dimension())
        throw Error(ErrorKind::InvalidArgument, "chart '" + chart.id + "' has a different graded dimension");
    charts_.push_back(std::move(chart));
}

bool Atlas::has_chart(const std::string& id) const {
    return std::any_of(charts_.begin(), charts_.end(), [&](const Chart& c) { return c.id == id; });
}

const Chart& Atlas::chart(const std::string& id) const {
    for (const auto& c : charts_)
        if (c.id == id) return c;
    throw Error(ErrorKind::InvalidArgument, "unknown chart '" + id + "'");
}

void Atlas::add_transition(const std::string& from, const std::string& to, GradedMorphism morphism) {
    const Chart& src = chart(from);
    const Chart& dst = chart(to);
    if (!same_table(morphism.source(), src.table) || !same_table(morphism.target(), dst.table))
        throw Error(ErrorKind::TableMismatch, "transition " + from + " -> " + to + " does not map between the charts");
    if (morphism.order() != order_)
        throw Error(ErrorKind::TruncationMismatch, "transition " + from + " -> " + to + " has a different order");
    const auto report = check_degree_preserving(morphism);
    if (!report.passed)
        throw Error(ErrorKind::InvalidArgument,
                    "transition " + from + " -> " + to + " is not degree preserving: " + report.failures.front());
    transitions_.insert_or_assign({from, to}, std::move(morphism));
}

bool Atlas::has_transition(const std::string& from, const std::string& to) const {
    return from == to || transitions_.count({from, to}) > 0;
}

GradedMorphism Atlas::transition(const std::string& from, const std::string& to) const {
    if (from == to) return GradedMorphism::identity(chart(from).table, order_);
    auto it = transitions_.find({from, to});
    if (it == transitions_.end()) throw Error(ErrorKind::MissingTransition, "no transition " + from + " -> " + to);
    return it->second;
}

std::vector<ChartTriple> default_triples(const Atlas& atlas) {
    std::vector<ChartTriple> out;
    for (const auto& a : atlas.charts())
        for (const auto& b : atlas.charts())
            for (const auto& c : atlas.charts()) {
                if (a.id == b.id || b.id == c.id) continue;
                if (atlas.has_transition(a.id, b.id) && atlas.has_transition(b.id, c.id) &&
                    atlas.has_transition(a.id, c.id))
                    out.push_back({a.id, b.id, c.id});
            }
    return out;
}

CheckReport check_transitions_invertible(const Atlas& atlas) {
    CheckReport report;
    for (const auto& [key, t] : atlas.transitions()) {
        const auto& [from, to] = key;
        if (!atlas.has_transition(to, from)) {
            report.fail("transition " + from + " -> " + to + " has no listed inverse");
            continue;
        }
        if (!is_inverse_pair(t, atlas.transition(to, from)))
            report.fail("transitions " + from + " -> " + to + " and " + to + " -> " + from +
                        " are not inverse modulo F^" + std::to_string(atlas.order()));
    }
    return report;
}

namespace {

void compare_images(CheckReport& report, const std::string& context, const GradedMorphism& actual,
                    const GradedMorphism& expected) {
    const VariableTable& tgt = *expected.target();
    for (std::size_t j = 0; j < tgt.base_arity(); ++j)
        if (actual.base_images()[j] != expected.base_images()[j])
            report.fail(context + ": image of " + tgt.base_symbols()[j] + " is " + to_string(actual.base_images()[j]) +
                        ", expected " + to_string(expected.base_images()[j]));
    for (std::size_t i = 0; i < tgt.graded_count(); ++i)
        if (actual.graded_images()[i] != expected.graded_images()[i])
            report.fail(context + ": image of " + tgt.graded_symbols()[i].name + " is " +
                        to_string(actual.graded_images()[i]) + ", expected " + to_string(expected.graded_images()[i]));
}

} // namespace

CheckReport check_cocycle(const Atlas& atlas, const std::vector<ChartTriple>& triples) {
    CheckReport report;
    for (const auto& t : triples) {
        const auto composite = compose(atlas.transition(t.i, t.j), atlas.transition(t.j, t.k));
        compare_images(report, "triple (" + t.i + "," + t.j + "," + t.k + ")", composite, atlas.transition(t.i, t.k));
    }
    return report;
}

CheckReport check_cocycle(const Atlas& atlas) {
    CheckReport report = check_transitions_invertible(atlas);
    const CheckReport triples = check_cocycle(atlas, default_triples(atlas));
    for (const auto& f : triples.failures) report.fail(f);
    return report;
}

CheckReport check_coboundary(const Atlas& twisted, const Atlas& split,
                             const std::map<std::string, ChartCorrection>& corrections) {
    CheckReport report;
    auto correction = [&](const std::string& id) -> ChartCorrection {
        auto it = corrections.find(id);
        if (it != corrections.end()) return it->second;
        auto id_morphism = GradedMorphism::identity(twisted.chart(id).table, twisted.order());
        return {id_morphism, id_morphism};
    };
    for (const auto& [id, c] : corrections)
        if (!is_inverse_pair(c.forward, c.inverse)) report.fail("correction on " + id + " is not invertible");
    for (const auto& [key, t] : twisted.transitions()) {
        const auto& [from, to] = key;
        if (!split.has_transition(from, to)) {
            report.fail("split model has no transition " + from + " -> " + to);
            continue;
        }
        const auto corrected = compose(correction(from).inverse, compose(t, correction(to).forward));
        compare_images(report, "transition " + from + " -> " + to, corrected, split.transition(from, to));
    }
    return report;
}

// Projective line.

namespace {

void validate(const LineBundleSpec& spec) {
    if (spec.kind == BundleCase::N) {
        if (spec.first_degree == 0 || is_odd(spec.first_degree) || spec.second_degree != 2 * spec.first_degree)
            throw Error(ErrorKind::InvalidArgument, "N case needs generator degrees (d, 2d) with d even and nonzero");
    } else {
        if (!is_odd(spec.first_degree) || spec.second_degree != -spec.first_degree)
            throw Error(ErrorKind::InvalidArgument, "Z case needs generator degrees (d, -d) with d odd");
    }
}

LaurentCoefficient x_power(int e) { return LaurentCoefficient::variable(1, 0, e); }

// f(x) -> f(1/x), the same Laurent polynomial re-read in the other chart.
LaurentCoefficient invert_argument(const LaurentCoefficient& f) {
    const LaurentCoefficient image = x_power(-1);
    return f.substitute(std::span<const LaurentCoefficient>(&image, 1), 1);
}

struct Cp1Tables {
    TablePtr u0;
    TablePtr u1;
};

Cp1Tables cp1_tables(const LineBundleSpec& spec) {
    const bool n = spec.kind == BundleCase::N;
    const std::string a = n ? "xi" : "z";
    const std::string b = n ? "psi" : "w";
    VariableTable u0({"x"}, {{a + "0", spec.first_degree}, {b + "0", spec.second_degree}});
    VariableTable u1({"y"}, {{a + "1", spec.first_degree}, {b + "1", spec.second_degree}});
    return {make_table(std::move(u0)), make_table(std::move(u1))};
}

// Series c * (generator monomial with the given exponents) over a chart.
GradedSeries chart_term(const TablePtr& t, int order, const LaurentCoefficient& c, int e_first, int e_second) {
    return GradedSeries::term(t, order, GradedMonomial{{e_first, e_second}}, c);
}

} // namespace

int obstruction_exponent(const LineBundleSpec& spec) {
    return spec.kind == BundleCase::N ? 2 * spec.k - spec.l - 2 : spec.k + spec.l - 4;
}

long global_section_count(int m) {
    long count = 0;
    const int reach = std::abs(m) + 1;
    for (int j = -reach; j <= reach; ++j) {
        const bool regular_on_u0 = j >= 0;
        const bool regular_on_u1 = m - j >= 0;
        if (regular_on_u0 && regular_on_u1) ++count;
    }
    return count;
}

long obstruction_dimension(const LineBundleSpec& spec) { return global_section_count(obstruction_exponent(spec)); }

LaurentCoefficient section_twist(const LineBundleSpec& spec, std::span<const Rational> section) {
    const long dim = obstruction_dimension(spec);
    if (static_cast<long>(section.size()) != dim)
        throw Error(ErrorKind::DimensionMismatch, "section has " + std::to_string(section.size()) +
                                                      " coordinates, obstruction space has dimension " +
                                                      std::to_string(dim));
    // Exponents strictly between the ranges reachable by chart corrections.
    const int first = spec.kind == BundleCase::N ? -2 * spec.k + 1 : -spec.k - spec.l + 1;
    LaurentCoefficient twist(1);
    for (std::size_t t = 0; t < section.size(); ++t) twist.add_term({first + static_cast<int>(t)}, section[t]);
    return twist;
}

Atlas build_cp1_atlas(const LineBundleSpec& spec, const LaurentCoefficient& twist, int order) {
    validate(spec);
    if (twist.arity() != 1) throw Error(ErrorKind::TableMismatch, "twist must be a Laurent polynomial in x");
    const auto [u0, u1] = cp1_tables(spec);
    const int k = spec.k, l = spec.l;
    const Rational half(1, 2);

    std::vector<GradedSeries> to_u1_base, to_u1_graded, to_u0_base, to_u0_graded;
    if (spec.kind == BundleCase::N) {
        // y = 1/x, xi1 = x^-k xi0, psi1 = x^-l psi0 + twist/2 * xi0^2
        to_u1_base.push_back(GradedSeries::constant(u0, order, x_power(-1)));
        to_u1_graded.push_back(chart_term(u0, order, x_power(-k), 1, 0));
        to_u1_graded.push_back(chart_term(u0, order, x_power(-l), 0, 1) +
                               chart_term(u0, order, twist * half, 2, 0));
        // x = 1/y, xi0 = y^-k xi1, psi0 = y^-l psi1 - y^(-l-2k) twist(1/y)/2 * xi1^2
        to_u0_base.push_back(GradedSeries::constant(u1, order, x_power(-1)));
        to_u0_graded.push_back(chart_term(u1, order, x_power(-k), 1, 0));
        to_u0_graded.push_back(chart_term(u1, order, x_power(-l), 0, 1) -
                               chart_term(u1, order, x_power(-l - 2 * k) * invert_argument(twist) * half, 2, 0));
    } else {
        // y = 1/x + twist * z0 w0, z1 = x^-k z0, w1 = x^-l w0
        to_u1_base.push_back(GradedSeries::constant(u0, order, x_power(-1)) + chart_term(u0, order, twist, 1, 1));
        to_u1_graded.push_back(chart_term(u0, order, x_power(-k), 1, 0));
        to_u1_graded.push_back(chart_term(u0, order, x_power(-l), 0, 1));
        // x = 1/y + y^(-2-k-l) twist(1/y) z1 w1, z0 = y^-k z1, w0 = y^-l w1
        to_u0_base.push_back(GradedSeries::constant(u1, order, x_power(-1)) +
                             chart_term(u1, order, x_power(-2 - k - l) * invert_argument(twist), 1, 1));
        to_u0_graded.push_back(chart_term(u1, order, x_power(-k), 1, 0));
        to_u0_graded.push_back(chart_term(u1, order, x_power(-l), 0, 1));
    }

    Atlas atlas(order);
    atlas.add_chart({"U0", u0, {false}});
    atlas.add_chart({"U1", u1, {false}});
    atlas.add_transition("U0", "U1", GradedMorphism(u0, u1, std::move(to_u1_base), std::move(to_u1_graded)));
    atlas.add_transition("U1", "U0", GradedMorphism(u1, u0, std::move(to_u0_base), std::move(to_u0_graded)));
    return atlas;
}

Atlas build_cp1_example(const LineBundleSpec& spec, std::span<const Rational> section, int order) {
    return build_cp1_atlas(spec, section_twist(spec, section), order);
}

LaurentCoefficient cp1_coboundary_twist(const LineBundleSpec& spec, const LaurentCoefficient& gamma0,
                                        const LaurentCoefficient& gamma1) {
    if (spec.kind == BundleCase::N)
        return x_power(-spec.l) * gamma0 - x_power(-2 * spec.k) * invert_argument(gamma1);
    return -(x_power(-2) * gamma0) - x_power(-spec.k - spec.l) * invert_argument(gamma1);
}

std::map<std::string, ChartCorrection> cp1_corrections(const LineBundleSpec& spec, const Atlas& atlas,
                                                       const LaurentCoefficient& gamma0,
                                                       const LaurentCoefficient& gamma1) {
    validate(spec);
    const int order = atlas.order();
    std::map<std::string, ChartCorrection> out;
    auto make = [&](const std::string& id, const LaurentCoefficient& gamma) {
        const TablePtr& t = atlas.chart(id).table;
        const auto id_morphism = GradedMorphism::identity(t, order);
        if (spec.kind == BundleCase::N) {
            const std::string& psi = t->graded_symbols()[1].name;
            const auto shift = chart_term(t, order, gamma * Rational(1, 2), 2, 0);
            out.emplace(id, ChartCorrection{id_morphism.with_image(psi, id_morphism.image(psi) + shift),
                                            id_morphism.with_image(psi, id_morphism.image(psi) - shift)});
        } else {
            const std::string& x = t->base_symbols()[0];
            const auto shift = chart_term(t, order, gamma, 1, 1);
            out.emplace(id, ChartCorrection{id_morphism.with_image(x, id_morphism.image(x) + shift),
                                            id_morphism.with_image(x, id_morphism.image(x) - shift)});
        }
    };
    make("U0", gamma0);
    make("U1", gamma1);
    return out;
}

LaurentCoefficient transported_reverse_twist(const LineBundleSpec& spec, const Atlas& atlas) {
    validate(spec);
    const auto forward = atlas.transition("U0", "U1");
    const auto reverse = atlas.transition("U1", "U0");
    auto coeff = [&](const GradedSeries& s, int a, int b) { return s.coefficient(GradedMonomial{{a, b}}); };
    const auto& first_image = reverse.graded_images()[0];
    const auto& second_image = reverse.graded_images()[1];
    if (spec.kind == BundleCase::N) {
        // psi0 = s(y) psi1 + phi10(y)/2 * xi1^2 with xi0 = f(y) xi1
        const auto phi10 = coeff(second_image, 2, 0) * Rational(2);
        const auto frame = coeff(second_image, 0, 1) * coeff(first_image, 1, 0).pow(2);
        return invert_argument(phi10) * invert_argument(frame).pow(-1);
    }
    // x = g(y) + theta10(y) z1 w1; moving the correction through y(x)
    // multiplies it by dy/dx and by the frame change of z1 w1.
    const auto theta10 = coeff(reverse.base_images()[0], 1, 1);
    const auto dy_dx = forward.base_images()[0].base_part().derivative(0);
    const auto frame = coeff(first_image, 1, 0) * coeff(second_image, 0, 1);
    return dy_dx * invert_argument(theta10) * invert_argument(frame).pow(-1);
}

ExponentWindow ExponentWindow::default_for(const LineBundleSpec& spec) {
    const int r = 2 * (std::abs(spec.k) + std::abs(spec.l) + 2);
    return {-r, r};
}

namespace {

using ResidualKey = std::tuple<std::string, std::string, GradedMonomial, BaseExponents>;
using Residual = std::map<ResidualKey, Rational>;

Residual residual(const Atlas& twisted, const Atlas& split, const std::map<std::string, ChartCorrection>& corrections) {
    Residual out;
    for (const auto& [key, t] : twisted.transitions()) {
        const auto& [from, to] = key;
        const auto& g_from = corrections.at(from);
        const auto& g_to = corrections.at(to);
        const auto corrected = compose(g_from.inverse, compose(t, g_to.forward));
        const auto expected = split.transition(from, to);
        const VariableTable& tgt = *expected.target();
        const std::string tag = from + "->" + to;
        auto add = [&](const std::string& symbol, const GradedSeries& diff) {
            diff.for_each_term([&](const GradedMonomial& m, const LaurentCoefficient& c) {
                for (const auto& [e, r] : c.terms()) out[{tag, symbol, m, e}] += r;
            });
        };
        for (std::size_t j = 0; j < tgt.base_arity(); ++j)
            add(tgt.base_symbols()[j], corrected.base_images()[j] - expected.base_images()[j]);
        for (std::size_t i = 0; i < tgt.graded_count(); ++i)
            add(tgt.graded_symbols()[i].name, corrected.graded_images()[i] - expected.graded_images()[i]);
    }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

// Solves A u = rhs exactly; returns false when inconsistent.
bool solve_linear(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs, std::size_t unknowns,
                  std::vector<Rational>& solution) {
    const std::size_t n_rows = rows.size();
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < unknowns && r < n_rows; ++c) {
        std::size_t p = r;
        while (p < n_rows && rows[p][c] == 0) ++p;
        if (p == n_rows) continue;
        std::swap(rows[p], rows[r]);
        std::swap(rhs[p], rhs[r]);
        const Rational inv = 1 / rows[r][c];
        for (auto& v : rows[r]) v *= inv;
        rhs[r] *= inv;
        for (std::size_t i = 0; i < n_rows; ++i) {
            if (i == r || rows[i][c] == 0) continue;
            const Rational factor = rows[i][c];
            for (std::size_t j = c; j < unknowns; ++j) rows[i][j] -= factor * rows[r][j];
            rhs[i] -= factor * rhs[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < n_rows; ++i)
        if (rhs[i] != 0) return false;
    solution.assign(unknowns, 0);
    for (std::size_t i = 0; i < r; ++i) solution[pivot_col[i]] = rhs[i];
    return true;
}

} // namespace

SplittingSearch search_cp1_splitting(const LineBundleSpec& spec, const Atlas& twisted, ExponentWindow window) {
    validate(spec);
    if (window.lo > window.hi) throw Error(ErrorKind::InvalidArgument, "empty exponent window");
    const Atlas split = build_cp1_atlas(spec, LaurentCoefficient(1), twisted.order());

    struct Unknown {
        int chart;
        int exponent;
    };
    std::vector<Unknown> unknowns;
    const std::string ids[2] = {"U0", "U1"};
    for (int c = 0; c < 2; ++c) {
        const bool laurent = twisted.chart(ids[c]).laurent_allowed[0];
        for (int e = window.lo; e <= window.hi; ++e)
            if (laurent || e >= 0) unknowns.push_back({c, e});
    }

    auto gammas = [&](const std::vector<Rational>& values) {
        std::pair<LaurentCoefficient, LaurentCoefficient> g{LaurentCoefficient(1), LaurentCoefficient(1)};
        for (std::size_t u = 0; u < unknowns.size(); ++u) {
            auto& target = unknowns[u].chart == 0 ? g.first : g.second;
            target.add_term({unknowns[u].exponent}, values[u]);
        }
        return g;
    };
    auto eval = [&](const std::vector<Rational>& values) {
        const auto [g0, g1] = gammas(values);
        return residual(twisted, split, cp1_corrections(spec, twisted, g0, g1));
    };

    const Residual base = eval(std::vector<Rational>(unknowns.size(), 0));
    std::vector<Residual> columns;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        std::vector<Rational> values(unknowns.size(), 0);
        values[u] = 1;
        Residual col = eval(values);
        for (const auto& [key, v] : base) col[key] -= v;
        columns.push_back(std::move(col));
    }

    std::map<ResidualKey, std::size_t> row_of;
    for (const auto& [key, v] : base) row_of.emplace(key, row_of.size());
    for (const auto& col : columns)
        for (const auto& [key, v] : col) row_of.emplace(key, row_of.size());
    std::vector<std::vector<Rational>> rows(row_of.size(), std::vector<Rational>(unknowns.size(), 0));
    std::vector<Rational> rhs(row_of.size(), 0);
    for (const auto& [key, v] : base) rhs[row_of.at(key)] = -v;
    for (std::size_t u = 0; u < columns.size(); ++u)
        for (const auto& [key, v] : columns[u]) rows[row_of.at(key)][u] = v;

    SplittingSearch out;
    out.unknowns = unknowns.size();
    const std::string window_text = "[" + std::to_string(window.lo) + ", " + std::to_string(window.hi) + "]";
    std::vector<Rational> solution;
    if (!solve_linear(std::move(rows), std::move(rhs), unknowns.size(), solution)) {
        out.summary = "no splitting within window " + window_text;
        return out;
    }
    std::tie(out.gamma0, out.gamma1) = gammas(solution);
    const auto check = check_coboundary(twisted, split, cp1_corrections(spec, twisted, out.gamma0, out.gamma1));
    out.found = check.passed;
    out.summary = check.passed ? "splits within window " + window_text
                               : "linear solution within window " + window_text + " failed verification";
    return out;
}

VariableTable fibered_product(const VariableTable& plus, const VariableTable& minus) {
    if (plus.base_symbols() != minus.base_symbols())
        throw Error(ErrorKind::TableMismatch, "positive and negative parts live over different bases");
    VariableTable out;
    for (const auto& b : plus.base_symbols()) out.add_base(b);
    for (const auto& g : plus.graded_symbols()) {
        if (g.degree < 0) throw Error(ErrorKind::InvalidArgument, "positive part has negative generator " + g.name);
        out.add_graded(g.name, g.degree);
    }
    for (const auto& g : minus.graded_symbols()) {
        if (g.degree > 0) throw Error(ErrorKind::InvalidArgument, "negative part has positive generator " + g.name);
        out.add_graded(g.name, g.degree);
    }
    return out;
}

namespace {

GradedMorphism kill_generators(TablePtr table, int order, bool negative) {
    GradedMorphism out = GradedMorphism::identity(table, order);
    for (const auto& g : table->graded_symbols())
        if ((g.degree < 0) == negative) out = out.with_image(g.name, GradedSeries::zero(table, order));
    return out;
}

} // namespace

GradedMorphism kill_negative(TablePtr table, int order) { return kill_generators(std::move(table), order, true); }
GradedMorphism kill_positive(TablePtr table, int order) { return kill_generators(std::move(table), order, false); }

} // namespace gradkernel
