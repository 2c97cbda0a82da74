#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace silver {

// Exact rational arithmetic. mpq_class already guarantees the invariants we
// need (lowest terms, positive denominator) as long as values are built
// through its arithmetic operators or canonicalized on construction.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Serializes as "p/q" (q always printed, including q = 1, so the format is
// uniform and trivially parseable).
inline std::string rational_to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Parses "p/q" or a bare integer "p".
inline Rational rational_from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("rational: empty string");
    Rational q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw std::invalid_argument("rational: cannot parse '" + s + "'");
    if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
        throw std::invalid_argument("rational: zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

inline int rational_sign(const Rational& q) { return sgn(q); }

}  // namespace silver
