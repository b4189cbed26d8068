#pragma once

#include <gmpxx.h>

#include <string>

namespace gradkernel {

using Rational = mpq_class;
using Integer = mpz_class;

/// Canonical text form: `n` for integers, `n/d` otherwise.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Generalized binomial coefficient C(n, k) for any integer n and k >= 0.
inline Rational binomial(long n, long k) {
    Rational r = 1;
    for (long i = 0; i < k; ++i) {
        r *= Rational(n - i);
        r /= Rational(i + 1);
    }
    return r;
}

} // namespace gradkernel
