#include <silver/cert_scalar.hpp>

#include <stdexcept>
#include <vector>

namespace silver {

CertScalar CertScalar::C(int k) {
    if (k < 1 || k > 32) throw std::invalid_argument("CertScalar::C: level out of range");
    CertScalar r;
    r.terms_.emplace(Monomial(1u) << (k - 1), RadicalScalar(1));
    r.max_level_ = k;
    return r;
}

void CertScalar::set_constant(const RadicalScalar& v) {
    terms_.clear();
    if (!v.is_zero()) terms_.emplace(Monomial(0), v);
    max_level_ = 0;
}

RadicalScalar CertScalar::constant_part() const {
    const auto it = terms_.find(Monomial(0));
    return it == terms_.end() ? RadicalScalar() : it->second;
}

void CertScalar::add_term(Monomial m, const RadicalScalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void CertScalar::recompute_level() {
    Monomial all = 0;
    for (const auto& [m, c] : terms_) all |= m;
    max_level_ = all == 0 ? 0 : 32 - __builtin_clz(all);
}

CertScalar CertScalar::operator-() const {
    CertScalar r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    r.max_level_ = max_level_;
    return r;
}

CertScalar& CertScalar::operator+=(const CertScalar& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    recompute_level();
    return *this;
}

CertScalar& CertScalar::operator-=(const CertScalar& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    recompute_level();
    return *this;
}

CertScalar operator*(const CertScalar& x, const CertScalar& y) {
    CertScalar result;
    for (const auto& [mx, cx] : x.terms_) {
        for (const auto& [my, cy] : y.terms_) {
            // Distinct symbols multiply freely; a repeated C_k contributes a
            // square, reduced by C_k^2 = C_k + rho^{2k} - 1.
            Monomial common = mx & my;
            std::vector<std::pair<Monomial, RadicalScalar>> poly{{mx ^ my, cx * cy}};
            while (common != 0) {
                const int bit = __builtin_ctz(common);
                common &= common - 1;
                const RadicalScalar tail = RadicalScalar::rho_pow(2L * (bit + 1)) - RadicalScalar(1);
                std::vector<std::pair<Monomial, RadicalScalar>> next;
                next.reserve(poly.size() * 2);
                for (const auto& [m, c] : poly) {
                    next.emplace_back(m | (Monomial(1u) << bit), c);
                    next.emplace_back(m, c * tail);
                }
                poly = std::move(next);
            }
            for (const auto& [m, c] : poly) result.add_term(m, c);
        }
    }
    result.recompute_level();
    return result;
}

std::string CertScalar::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) out += " + ";
        first = false;
        std::string mono;
        for (Monomial bits = m; bits != 0; bits &= bits - 1) {
            if (!mono.empty()) mono += "*";
            mono += "C" + std::to_string(__builtin_ctz(bits) + 1);
        }
        const bool rational_only = sgn(c.b()) == 0;
        if (mono.empty()) {
            out += rational_only ? rational_to_string(c.a()) : "(" + c.to_string() + ")";
        } else if (c.is_one()) {
            out += mono;
        } else if (rational_only) {
            out += rational_to_string(c.a()) + "*" + mono;
        } else {
            out += "(" + c.to_string() + ")*" + mono;
        }
    }
    return out;
}

namespace {

// Splits on " + " at parenthesis depth 0 only.
std::vector<std::string> split_terms(const std::string& s) {
    std::vector<std::string> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        else if (s[i] == ')') --depth;
        else if (depth == 0 && s.compare(i, 3, " + ") == 0) {
            parts.push_back(s.substr(start, i - start));
            i += 2;
            start = i + 1;
        }
    }
    parts.push_back(s.substr(start));
    return parts;
}

Monomial parse_monomial(const std::string& s) {
    Monomial m = 0;
    std::size_t pos = 0;
    while (pos < s.size()) {
        if (s[pos] != 'C') throw std::invalid_argument("CertScalar: bad monomial '" + s + "'");
        std::size_t end = s.find('*', pos);
        if (end == std::string::npos) end = s.size();
        const int k = std::stoi(s.substr(pos + 1, end - pos - 1));
        if (k < 1 || k > 32) throw std::invalid_argument("CertScalar: symbol index out of range");
        m |= Monomial(1u) << (k - 1);
        pos = end == s.size() ? end : end + 1;
    }
    return m;
}

}  // namespace

CertScalar CertScalar::from_string(const std::string& s) {
    CertScalar r;
    if (s == "0") return r;
    for (const std::string& term : split_terms(s)) {
        if (term.empty()) throw std::invalid_argument("CertScalar: empty term in '" + s + "'");
        RadicalScalar coef(1);
        std::string mono_part = term;
        if (term[0] == '(') {
            const std::size_t close = term.find(')');
            if (close == std::string::npos)
                throw std::invalid_argument("CertScalar: unbalanced parens in '" + term + "'");
            coef = RadicalScalar::from_string(term.substr(1, close - 1));
            mono_part = term.substr(close + 1);
            if (!mono_part.empty()) {
                if (mono_part[0] != '*')
                    throw std::invalid_argument("CertScalar: expected '*' after coefficient");
                mono_part = mono_part.substr(1);
            }
        } else if (term[0] != 'C') {
            // Rational coefficient, possibly followed by "*C...".
            const std::size_t star = term.find("*C");
            if (star == std::string::npos) {
                coef = RadicalScalar(rational_from_string(term));
                mono_part.clear();
            } else {
                coef = RadicalScalar(rational_from_string(term.substr(0, star)));
                mono_part = term.substr(star + 1);
            }
        }
        r.add_term(parse_monomial(mono_part), coef);
    }
    r.recompute_level();
    return r;
}

MpfrInterval eval_c_symbol(int k, mpfr_prec_t bits) {
    // c_k = (1 + sqrt(4 rho^{2k} - 3)) / 2 with rho^{2k} exact first.
    const RadicalScalar inner = RadicalScalar(4) * RadicalScalar::rho_pow(2L * k) - RadicalScalar(3);
    MpfrInterval iv = MpfrInterval::from_radical(inner, bits).sqrt();
    iv += MpfrInterval::from_long(1, bits);
    iv /= MpfrInterval::from_long(2, bits);
    return iv;
}

MpfrInterval eval_cert(const CertScalar& x, mpfr_prec_t bits) {
    MpfrInterval total(bits);
    std::map<int, MpfrInterval> cache;
    for (const auto& [m, c] : x.terms()) {
        MpfrInterval term = MpfrInterval::from_radical(c, bits);
        for (Monomial bitsleft = m; bitsleft != 0; bitsleft &= bitsleft - 1) {
            const int k = __builtin_ctz(bitsleft) + 1;
            auto it = cache.find(k);
            if (it == cache.end()) it = cache.emplace(k, eval_c_symbol(k, bits)).first;
            term *= it->second;
        }
        total += term;
    }
    return total;
}

SignVerdict ring_sign(const CertScalar& x, mpfr_prec_t max_bits) {
    if (max_bits < 64) throw std::invalid_argument("ring_sign: max_bits must be >= 64");
    if (x.is_zero()) return {SignVerdict::Zero, 0};
    for (mpfr_prec_t bits = 64; bits <= max_bits; bits *= 2) {
        const MpfrInterval iv = eval_cert(x, bits);
        const int s = iv.sign_if_separated();
        if (s > 0) return {SignVerdict::Positive, bits};
        if (s < 0) return {SignVerdict::Negative, bits};
    }
    throw PrecisionExhausted("ring_sign: interval still straddles 0 at " +
                             std::to_string(max_bits) + " bits for " + x.to_string());
}

}  // namespace silver
