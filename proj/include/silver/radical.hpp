#pragma once

#include <silver/rational.hpp>

#include <iosfwd>
#include <string>

namespace silver {

// Exact element of the quadratic field Q(sqrt2), stored as a + b*sqrt2 with
// exact rationals a, b. The representation is unique because sqrt2 is
// irrational. Field operations are closed; sign is exactly decidable by
// rational casework (never floating point).
class RadicalScalar {
  public:
    RadicalScalar() : a_(0), b_(0) {}
    RadicalScalar(long v) : a_(v), b_(0) {}  // NOLINT(google-explicit-constructor)
    RadicalScalar(Rational a) : a_(std::move(a)), b_(0) {}  // NOLINT
    RadicalScalar(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

    static RadicalScalar sqrt2() { return RadicalScalar(Rational(0), Rational(1)); }
    // The silver ratio 1 + sqrt2.
    static RadicalScalar rho() { return RadicalScalar(Rational(1), Rational(1)); }
    // rho^e for any integer e; rho^{-1} = sqrt2 - 1 exactly.
    static RadicalScalar rho_pow(long e);

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }

    bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
    bool is_one() const { return a_ == 1 && sgn(b_) == 0; }

    RadicalScalar operator-() const { return RadicalScalar(-a_, -b_); }
    RadicalScalar& operator+=(const RadicalScalar& o) {
        a_ += o.a_;
        b_ += o.b_;
        return *this;
    }
    RadicalScalar& operator-=(const RadicalScalar& o) {
        a_ -= o.a_;
        b_ -= o.b_;
        return *this;
    }
    RadicalScalar& operator*=(const RadicalScalar& o) {
        // (a + b s)(c + d s) = ac + 2bd + (ad + bc) s
        Rational na = a_ * o.a_ + 2 * b_ * o.b_;
        Rational nb = a_ * o.b_ + b_ * o.a_;
        a_ = std::move(na);
        b_ = std::move(nb);
        return *this;
    }
    RadicalScalar& operator/=(const RadicalScalar& o);

    friend RadicalScalar operator+(RadicalScalar x, const RadicalScalar& y) { return x += y; }
    friend RadicalScalar operator-(RadicalScalar x, const RadicalScalar& y) { return x -= y; }
    friend RadicalScalar operator*(RadicalScalar x, const RadicalScalar& y) { return x *= y; }
    friend RadicalScalar operator/(RadicalScalar x, const RadicalScalar& y) { return x /= y; }
    friend bool operator==(const RadicalScalar& x, const RadicalScalar& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const RadicalScalar& x, const RadicalScalar& y) { return !(x == y); }

    RadicalScalar inverse() const;
    // Integer exponent power (negative exponents via field inverse).
    RadicalScalar pow(long e) const;

    // Serializes as "p/q + r/s*sqrt2" (always the full two-part form; the
    // round-trip is bit-exact).
    std::string to_string() const;
    static RadicalScalar from_string(const std::string& s);

  private:
    Rational a_, b_;
};

// Exact sign in {-1, 0, +1}, decided by comparing a^2 against 2 b^2 with sign
// casework on a and b.
int radical_sign(const RadicalScalar& x);

std::ostream& operator<<(std::ostream& os, const RadicalScalar& x);

}  // namespace silver
