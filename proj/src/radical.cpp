#include <silver/radical.hpp>

#include <ostream>
#include <stdexcept>

namespace silver {

RadicalScalar RadicalScalar::rho_pow(long e) {
    RadicalScalar base = e >= 0 ? rho() : RadicalScalar(Rational(-1), Rational(1));  // rho or 1/rho
    if (e < 0) e = -e;
    RadicalScalar acc(1);
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

RadicalScalar RadicalScalar::inverse() const {
    // 1/(a + b s) = (a - b s)/(a^2 - 2 b^2); the norm a^2 - 2b^2 is nonzero
    // for nonzero elements because sqrt2 is irrational.
    if (is_zero()) throw std::domain_error("RadicalScalar: division by zero");
    Rational norm = a_ * a_ - 2 * b_ * b_;
    return RadicalScalar(a_ / norm, -b_ / norm);
}

RadicalScalar& RadicalScalar::operator/=(const RadicalScalar& o) { return *this *= o.inverse(); }

RadicalScalar RadicalScalar::pow(long e) const {
    RadicalScalar base = e >= 0 ? *this : inverse();
    if (e < 0) e = -e;
    RadicalScalar acc(1);
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

int radical_sign(const RadicalScalar& x) {
    const int sa = sgn(x.a());
    const int sb = sgn(x.b());
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: the sign is decided by |a| vs |b|*sqrt2, i.e. by
    // comparing a^2 with 2 b^2; the larger magnitude term wins.
    const Rational a2 = x.a() * x.a();
    const Rational b2 = 2 * x.b() * x.b();
    const int c = cmp(a2, b2);
    if (c == 0) {
        // a^2 = 2 b^2 with a, b nonzero would make sqrt2 rational.
        throw std::logic_error("RadicalScalar: impossible norm tie");
    }
    return c > 0 ? sa : sb;
}

std::string RadicalScalar::to_string() const {
    return rational_to_string(a_) + " + " + rational_to_string(b_) + "*sqrt2";
}

RadicalScalar RadicalScalar::from_string(const std::string& s) {
    const std::string sep = " + ";
    const std::string suffix = "*sqrt2";
    const auto pos = s.find(sep);
    if (pos == std::string::npos)
        throw std::invalid_argument("RadicalScalar: missing ' + ' in '" + s + "'");
    const std::string left = s.substr(0, pos);
    std::string right = s.substr(pos + sep.size());
    if (right.size() < suffix.size() || right.compare(right.size() - suffix.size(), suffix.size(), suffix) != 0)
        throw std::invalid_argument("RadicalScalar: missing '*sqrt2' in '" + s + "'");
    right = right.substr(0, right.size() - suffix.size());
    return RadicalScalar(rational_from_string(left), rational_from_string(right));
}

std::ostream& operator<<(std::ostream& os, const RadicalScalar& x) { return os << x.to_string(); }

}  // namespace silver
