#pragma once

#include <silver/interval.hpp>
#include <silver/radical.hpp>

#include <cstdint>
#include <map>
#include <string>

namespace silver {

// Monomial over the symbols C_1..C_32: bit (k-1) set means C_k is present.
// Canonical forms never need a power >= 2 (squares are reduced away), so a
// set of indices is a complete representation.
using Monomial = std::uint32_t;

// Orders monomials by their index sequences lexicographically, with the
// empty monomial first; gives the deterministic term order used by
// serialization and iteration.
struct MonomialLess {
    bool operator()(Monomial x, Monomial y) const {
        while (x != 0 && y != 0) {
            const int bx = __builtin_ctz(x), by = __builtin_ctz(y);
            if (bx != by) return bx < by;
            x &= x - 1;
            y &= y - 1;
        }
        return x == 0 && y != 0;
    }
};

// Element of the commutative ring Q(sqrt2)[C_1..C_K] modulo the relations
// C_k^2 = C_k + rho^{2k} - 1. Under the real embedding C_k stands for
// c_k = (1 + sqrt(4 rho^{2k} - 3))/2, which satisfies exactly that monic
// quadratic. Canonical form: square-free monomials, no zero coefficients.
class CertScalar {
  public:
    using TermMap = std::map<Monomial, RadicalScalar, MonomialLess>;

    CertScalar() = default;
    CertScalar(long v) { set_constant(RadicalScalar(v)); }  // NOLINT
    CertScalar(const RadicalScalar& v) { set_constant(v); }  // NOLINT

    // The symbol C_k (k >= 1).
    static CertScalar C(int k);

    const TermMap& terms() const { return terms_; }
    // Highest symbol index present (0 for radical-only values).
    int max_level() const { return max_level_; }

    bool is_zero() const { return terms_.empty(); }
    // The purely radical part (coefficient of the empty monomial).
    RadicalScalar constant_part() const;
    bool is_radical() const { return max_level_ == 0; }

    CertScalar operator-() const;
    CertScalar& operator+=(const CertScalar& o);
    CertScalar& operator-=(const CertScalar& o);
    friend CertScalar operator+(CertScalar x, const CertScalar& y) { return x += y; }
    friend CertScalar operator-(CertScalar x, const CertScalar& y) { return x -= y; }
    friend CertScalar operator*(const CertScalar& x, const CertScalar& y);
    CertScalar& operator*=(const CertScalar& o) { return *this = *this * o; }
    friend bool operator==(const CertScalar& x, const CertScalar& y) { return x.terms_ == y.terms_; }
    friend bool operator!=(const CertScalar& x, const CertScalar& y) { return !(x == y); }

    // Serializes as "coef*C{k1}*C{k2} + ..." with terms in monomial order;
    // unit coefficients elided, rational coefficients as "p/q", general
    // radicals parenthesized. Round-trips bit-exactly via from_string.
    std::string to_string() const;
    static CertScalar from_string(const std::string& s);

  private:
    void set_constant(const RadicalScalar& v);
    void add_term(Monomial m, const RadicalScalar& c);
    void recompute_level();
    TermMap terms_;
    int max_level_ = 0;
};

inline CertScalar operator*(const RadicalScalar& c, const CertScalar& x) {
    return CertScalar(c) * x;
}

// Sign decision for a CertScalar under the real embedding.
struct SignVerdict {
    enum Kind { Zero, Positive, Negative } verdict;
    // Bits of interval precision that certified the verdict (0 for Zero,
    // which is decided structurally from the canonical form).
    mpfr_prec_t certified_precision;
};

// Interval enclosure of the real value of c_k = (1 + sqrt(4 rho^{2k} - 3))/2.
MpfrInterval eval_c_symbol(int k, mpfr_prec_t bits);

// Interval enclosure of x under the canonical embedding C_k -> c_k.
MpfrInterval eval_cert(const CertScalar& x, mpfr_prec_t bits);

// Adaptive sign oracle: Zero for the canonical zero form; otherwise evaluates
// at doubling precision (from 64 bits up to max_bits) until the enclosure
// excludes 0. Throws PrecisionExhausted if the cap is reached, rather than
// guessing (which could mask a non-canonical zero).
SignVerdict ring_sign(const CertScalar& x, mpfr_prec_t max_bits = 4096);

}  // namespace silver
