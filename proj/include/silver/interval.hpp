#pragma once

#include <silver/radical.hpp>

#include <mpfr.h>

#include <stdexcept>
#include <string>

namespace silver {

// Raised when the adaptive sign oracle cannot separate a (non-canonically-
// zero) value from 0 within the precision cap. Surfaced to the caller;
// never silently resolved.
class PrecisionExhausted : public std::runtime_error {
  public:
    explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Directed-rounding interval [lo, hi] on MPFR numbers. Every operation
// rounds the lower endpoint down and the upper endpoint up, so the interval
// always encloses the exact real result. Precision (bits) is fixed per
// value; combining operands of different precision rounds into the larger.
class MpfrInterval {
  public:
    explicit MpfrInterval(mpfr_prec_t prec = 64);
    MpfrInterval(const MpfrInterval& o);
    MpfrInterval(MpfrInterval&& o) noexcept;
    MpfrInterval& operator=(MpfrInterval o);
    ~MpfrInterval();

    static MpfrInterval from_long(long v, mpfr_prec_t prec);
    static MpfrInterval from_double(double v, mpfr_prec_t prec);
    static MpfrInterval from_rational(const Rational& q, mpfr_prec_t prec);
    static MpfrInterval from_radical(const RadicalScalar& x, mpfr_prec_t prec);
    static MpfrInterval pos_infinity(mpfr_prec_t prec);

    mpfr_prec_t precision() const { return prec_; }
    const mpfr_t& lo() const { return lo_; }
    const mpfr_t& hi() const { return hi_; }

    MpfrInterval operator-() const;
    MpfrInterval& operator+=(const MpfrInterval& o);
    MpfrInterval& operator-=(const MpfrInterval& o);
    MpfrInterval& operator*=(const MpfrInterval& o);
    MpfrInterval& operator/=(const MpfrInterval& o);
    friend MpfrInterval operator+(MpfrInterval x, const MpfrInterval& y) { return x += y; }
    friend MpfrInterval operator-(MpfrInterval x, const MpfrInterval& y) { return x -= y; }
    friend MpfrInterval operator*(MpfrInterval x, const MpfrInterval& y) { return x *= y; }
    friend MpfrInterval operator/(MpfrInterval x, const MpfrInterval& y) { return x /= y; }

    // Enclosure of sqrt; requires lo >= 0.
    MpfrInterval sqrt() const;
    // Enclosure of x^y for x >= 1 (monotone in both endpoints as used here).
    static MpfrInterval pow(const MpfrInterval& x, const MpfrInterval& y);
    // Enclosure of the natural log; requires lo > 0.
    MpfrInterval log() const;
    // Enclosure of |value|.
    MpfrInterval abs_enclosure() const;
    // Enclosure of max(x, y) (endpoint-wise max).
    static MpfrInterval max_enclosure(const MpfrInterval& x, const MpfrInterval& y);

    bool contains_zero() const;
    // {-1, 0, +1} when decidable from the enclosure; 0 means the interval
    // straddles (or touches) zero, not that the value is zero.
    int sign_if_separated() const;
    bool is_exact_zero() const;  // lo == hi == 0

    // True if this interval is contained in o (used by the nesting tests).
    bool subset_of(const MpfrInterval& o) const;
    bool contains(double v) const;

    double midpoint_double() const;
    double hi_double_up() const;   // upper endpoint rounded up to double
    double lo_double_down() const;
    double width_double() const;
    // Decimal rendering of the midpoint at the given significant digits.
    std::string to_decimal(int digits) const;
    std::string to_string() const;  // "[lo, hi]" diagnostic form

  private:
    void swap(MpfrInterval& o) noexcept;
    mpfr_prec_t prec_;
    mpfr_t lo_, hi_;
};

// Interval enclosure of a RadicalScalar at the requested precision.
MpfrInterval eval_radical(const RadicalScalar& x, mpfr_prec_t bits);

}  // namespace silver
