#include "gradkernel/normal_form.hpp"

#include "gradkernel/diophantine.hpp"
#include "gradkernel/error.hpp"

namespace gradkernel {

namespace {

struct EvenSplit {
    std::vector<std::size_t> positive; // indices of even generators of positive degree
    std::vector<std::size_t> negative;
    std::vector<int> a;
    std::vector<int> b;
};

EvenSplit split_even(const VariableTable& table) {
    EvenSplit s;
    for (std::size_t i = 0; i < table.graded_count(); ++i) {
        if (table.odd(i)) continue;
        if (table.degree(i) > 0) {
            s.positive.push_back(i);
            s.a.push_back(table.degree(i));
        } else {
            s.negative.push_back(i);
            s.b.push_back(-table.degree(i));
        }
    }
    return s;
}

GradedMonomial to_monomial(const VariableTable& table, const EvenSplit& split, const Solution& s) {
    GradedMonomial m = unit_monomial(table);
    for (std::size_t k = 0; k < split.positive.size(); ++k) m.exponents[split.positive[k]] = s.p[k];
    for (std::size_t k = 0; k < split.negative.size(); ++k) m.exponents[split.negative[k]] = s.q[k];
    return m;
}

Solution to_solution(const EvenSplit& split, const GradedMonomial& m) {
    Solution s;
    for (std::size_t i : split.positive) s.p.push_back(m.exponents[i]);
    for (std::size_t i : split.negative) s.q.push_back(m.exponents[i]);
    return s;
}

} // namespace

bool operator==(const NormalForm& lhs, const NormalForm& rhs) {
    return same_table(lhs.table, rhs.table) && lhs.degree == rhs.degree && lhs.basis == rhs.basis &&
           lhs.parts == rhs.parts;
}

std::vector<GradedMonomial> degree_zero_monomial_basis(const VariableTable& table) {
    const EvenSplit split = split_even(table);
    std::vector<GradedMonomial> out;
    for (const auto& s : hilbert_basis(split.a, split.b)) out.push_back(to_monomial(table, split, s));
    return out;
}

NormalForm to_normal_form(const HomogeneousComponent& f) {
    const VariableTable& table = *f.table();
    const EvenSplit split = split_even(table);
    const auto basis_solutions = hilbert_basis(split.a, split.b);
    std::map<Solution, std::size_t> basis_index;
    for (std::size_t k = 0; k < basis_solutions.size(); ++k) basis_index.emplace(basis_solutions[k], k);

    NormalForm nf;
    nf.table = f.table();
    nf.degree = f.degree();
    for (const auto& s : basis_solutions) nf.basis.push_back(to_monomial(table, split, s));

    std::map<int, HilbertData> by_target;
    std::map<GradedMonomial, Tail> parts;
    for (const auto& [m, c] : f.terms()) {
        GradedMonomial odd_part = unit_monomial(table);
        for (std::size_t i = 0; i < table.graded_count(); ++i)
            if (table.odd(i)) odd_part.exponents[i] = m.exponents[i];
        const int target = f.degree() - monomial_degree(table, odd_part);
        auto it = by_target.find(target);
        if (it == by_target.end())
            it = by_target.emplace(target, hilbert_data(DegreeEquation(split.a, split.b, target))).first;

        const auto dec = decompose_solution(to_solution(split, m), it->second);
        GradedMonomial leading = to_monomial(table, split, dec.minimal);
        for (std::size_t i = 0; i < table.graded_count(); ++i) leading.exponents[i] += odd_part.exponents[i];
        TailExponents exps(basis_solutions.size(), 0);
        for (const auto& [g, n] : dec.multiplicities) exps[basis_index.at(g)] = static_cast<int>(n);

        Tail& tail = parts[leading];
        auto [jt, inserted] = tail.try_emplace(exps, c);
        if (!inserted) {
            jt->second += c;
            if (jt->second.is_zero()) tail.erase(jt);
        }
    }
    for (auto& [leading, tail] : parts)
        if (!tail.empty()) nf.parts.push_back({leading, std::move(tail)});
    return nf;
}

HomogeneousComponent from_normal_form(const NormalForm& nf, int order) {
    if (!nf.table) throw Error(ErrorKind::InvalidArgument, "normal form without a table");
    HomogeneousComponent out(nf.table, nf.degree, order);
    for (const auto& part : nf.parts) {
        for (const auto& [exps, c] : part.tail) {
            if (exps.size() != nf.basis.size()) throw Error(ErrorKind::InvalidArgument, "tail exponent arity mismatch");
            GradedMonomial m = part.leading;
            for (std::size_t k = 0; k < exps.size(); ++k)
                for (std::size_t i = 0; i < m.exponents.size(); ++i) m.exponents[i] += exps[k] * nf.basis[k].exponents[i];
            out.add_term(m, c);
        }
    }
    return out;
}

namespace {

std::string tail_to_string(const Tail& tail, std::span<const std::string> base_names) {
    std::string out;
    for (const auto& [exps, c] : tail) {
        std::string mono;
        for (std::size_t k = 0; k < exps.size(); ++k) {
            if (exps[k] == 0) continue;
            if (!mono.empty()) mono += '*';
            mono += "z" + std::to_string(k + 1);
            if (exps[k] != 1) mono += '^' + std::to_string(exps[k]);
        }
        std::string text;
        if (mono.empty()) {
            text = c.to_string(base_names);
        } else if (c.needs_parentheses()) {
            text = "(" + c.to_string(base_names) + ")*" + mono;
        } else if (c.is_constant() && c.constant_term() == 1) {
            text = mono;
        } else if (c.is_constant() && c.constant_term() == -1) {
            text = "-" + mono;
        } else {
            text = c.to_string(base_names) + "*" + mono;
        }
        if (out.empty()) {
            out = text;
        } else if (text.front() == '-') {
            out += " - " + text.substr(1);
        } else {
            out += " + " + text;
        }
    }
    return out.empty() ? "0" : out;
}

} // namespace

std::string to_string(const NormalForm& nf) {
    const VariableTable& table = *nf.table;
    std::string out = "degree " + std::to_string(nf.degree) + "\n";
    for (std::size_t k = 0; k < nf.basis.size(); ++k)
        out += "  z" + std::to_string(k + 1) + " = " + to_string(table, nf.basis[k]) + "\n";
    for (const auto& part : nf.parts)
        out += "  [" + to_string(table, part.leading) + "] * (" + tail_to_string(part.tail, table.base_symbols()) + ")\n";
    return out;
}

} // namespace gradkernel
