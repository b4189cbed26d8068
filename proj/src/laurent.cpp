#include "gradkernel/laurent.hpp"

#include "gradkernel/error.hpp"

#include <cstdlib>

namespace gradkernel {

LaurentCoefficient LaurentCoefficient::constant(std::size_t arity, const Rational& value) {
    LaurentCoefficient c(arity);
    c.add_term(BaseExponents(arity, 0), value);
    return c;
}

LaurentCoefficient LaurentCoefficient::variable(std::size_t arity, std::size_t index, int exponent) {
    if (index >= arity) throw Error(ErrorKind::InvalidArgument, "base symbol index out of range");
    BaseExponents e(arity, 0);
    e[index] = exponent;
    LaurentCoefficient c(arity);
    c.add_term(e, 1);
    return c;
}

LaurentCoefficient LaurentCoefficient::monomial(BaseExponents exponents, const Rational& value) {
    LaurentCoefficient c(exponents.size());
    c.add_term(exponents, value);
    return c;
}

bool LaurentCoefficient::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    for (int e : terms_.begin()->first)
        if (e != 0) return false;
    return true;
}

Rational LaurentCoefficient::constant_term() const { return coefficient(BaseExponents(arity_, 0)); }

Rational LaurentCoefficient::coefficient(const BaseExponents& exponents) const {
    auto it = terms_.find(exponents);
    return it == terms_.end() ? Rational(0) : it->second;
}

void LaurentCoefficient::add_term(const BaseExponents& exponents, const Rational& value) {
    if (exponents.size() != arity_) throw Error(ErrorKind::TableMismatch, "exponent vector has wrong arity");
    if (value == 0) return;
    auto [it, inserted] = terms_.try_emplace(exponents, value);
    if (!inserted) {
        it->second += value;
        if (it->second == 0) terms_.erase(it);
    }
}

void LaurentCoefficient::check_arity(const LaurentCoefficient& other) const {
    if (arity_ != other.arity_)
        throw Error(ErrorKind::TableMismatch, "coefficients over different base symbol sets");
}

LaurentCoefficient& LaurentCoefficient::operator+=(const LaurentCoefficient& other) {
    check_arity(other);
    for (const auto& [e, v] : other.terms_) add_term(e, v);
    return *this;
}

LaurentCoefficient& LaurentCoefficient::operator-=(const LaurentCoefficient& other) {
    check_arity(other);
    for (const auto& [e, v] : other.terms_) add_term(e, -v);
    return *this;
}

LaurentCoefficient operator*(const LaurentCoefficient& lhs, const LaurentCoefficient& rhs) {
    lhs.check_arity(rhs);
    LaurentCoefficient out(lhs.arity_);
    BaseExponents e(lhs.arity_);
    for (const auto& [e1, v1] : lhs.terms_) {
        for (const auto& [e2, v2] : rhs.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
            out.add_term(e, v1 * v2);
        }
    }
    return out;
}

LaurentCoefficient& LaurentCoefficient::operator*=(const LaurentCoefficient& other) {
    *this = *this * other;
    return *this;
}

LaurentCoefficient& LaurentCoefficient::operator*=(const Rational& scalar) {
    if (scalar == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= scalar;
    return *this;
}

LaurentCoefficient LaurentCoefficient::operator-() const {
    LaurentCoefficient out = *this;
    for (auto& [e, v] : out.terms_) v = -v;
    return out;
}

LaurentCoefficient LaurentCoefficient::pow(int exponent) const {
    if (exponent < 0) {
        if (!is_unit())
            throw Error(ErrorKind::NonInvertibleCoefficient,
                        "negative power of a coefficient with " + std::to_string(terms_.size()) + " terms");
        const auto& [e, v] = *terms_.begin();
        BaseExponents inv(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) inv[i] = -e[i];
        Rational r = 1 / v;
        return monomial(inv, r).pow(-exponent);
    }
    LaurentCoefficient result = constant(arity_, 1);
    LaurentCoefficient base = *this;
    unsigned n = static_cast<unsigned>(exponent);
    while (n) {
        if (n & 1u) result *= base;
        n >>= 1u;
        if (n) base *= base;
    }
    return result;
}

LaurentCoefficient LaurentCoefficient::derivative(std::size_t index) const {
    if (index >= arity_) throw Error(ErrorKind::InvalidArgument, "base symbol index out of range");
    LaurentCoefficient out(arity_);
    for (const auto& [e, v] : terms_) {
        if (e[index] == 0) continue;
        BaseExponents d = e;
        --d[index];
        out.add_term(d, v * e[index]);
    }
    return out;
}

std::vector<LaurentCoefficient> LaurentCoefficient::taylor_shift(std::size_t index, int order) const {
    if (order < 0) throw Error(ErrorKind::InvalidArgument, "negative Taylor order");
    if (order > kMaxTaylorOrder)
        throw Error(ErrorKind::OrderTooLarge,
                    "Taylor order " + std::to_string(order) + " exceeds " + std::to_string(kMaxTaylorOrder));
    std::vector<LaurentCoefficient> out;
    out.reserve(static_cast<std::size_t>(order) + 1);
    out.push_back(*this);
    for (int k = 1; k <= order; ++k) {
        LaurentCoefficient next = out.back().derivative(index);
        next *= Rational(1, k);
        out.push_back(std::move(next));
    }
    return out;
}

LaurentCoefficient LaurentCoefficient::substitute(std::span<const LaurentCoefficient> images,
                                                  std::size_t target_arity) const {
    if (images.size() != arity_) throw Error(ErrorKind::TableMismatch, "substitution arity mismatch");
    for (const auto& img : images)
        if (img.arity() != target_arity) throw Error(ErrorKind::TableMismatch, "substitution image arity mismatch");
    LaurentCoefficient out(target_arity);
    std::vector<std::map<int, LaurentCoefficient>> powers(arity_);
    for (const auto& [e, v] : terms_) {
        LaurentCoefficient term = constant(target_arity, v);
        for (std::size_t i = 0; i < arity_; ++i) {
            if (e[i] == 0) continue;
            auto it = powers[i].find(e[i]);
            if (it == powers[i].end()) it = powers[i].emplace(e[i], images[i].pow(e[i])).first;
            term *= it->second;
        }
        out += term;
    }
    return out;
}

namespace {

std::string monomial_text(const BaseExponents& e, std::span<const std::string> names) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!out.empty()) out += '*';
        out += names[i];
        if (e[i] != 1) out += '^' + std::to_string(e[i]);
    }
    return out;
}

} // namespace

std::string LaurentCoefficient::to_string(std::span<const std::string> names) const {
    if (names.size() != arity_) throw Error(ErrorKind::TableMismatch, "name list arity mismatch");
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, v] = *it;
        const bool negative = v < 0;
        const Rational mag = negative ? Rational(-v) : v;
        const std::string mono = monomial_text(e, names);
        std::string body;
        if (mono.empty()) {
            body = gradkernel::to_string(mag);
        } else if (mag == 1) {
            body = mono;
        } else {
            body = gradkernel::to_string(mag) + "*" + mono;
        }
        if (first) {
            out = negative ? "-" + body : body;
            first = false;
        } else {
            out += negative ? " - " : " + ";
            out += body;
        }
    }
    return out;
}

bool LaurentCoefficient::needs_parentheses() const { return terms_.size() > 1; }

} // namespace gradkernel
