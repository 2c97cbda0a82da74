#include <silver/schedule.hpp>

#include <cmath>
#include <stdexcept>

namespace silver {

std::vector<double> Schedule::to_doubles() const {
    std::vector<double> out;
    out.reserve(steps.size());
    for (const RadicalScalar& s : steps)
        out.push_back(MpfrInterval::from_radical(s, 64).midpoint_double());
    return out;
}

int valuation(std::uint64_t t) {
    if (t == 0) throw std::invalid_argument("valuation: t must be >= 1");
    return __builtin_ctzll(t);
}

RadicalScalar silver_step(std::uint64_t t) {
    return RadicalScalar(1) + RadicalScalar::rho_pow(valuation(t + 1) - 1);
}

Schedule schedule_direct(int k) {
    if (k < 1) throw std::invalid_argument("schedule_direct: k must be >= 1");
    Schedule s;
    s.k = k;
    const std::uint64_t n = (std::uint64_t(1) << k) - 1;
    s.steps.reserve(n);
    for (std::uint64_t t = 0; t < n; ++t) s.steps.push_back(silver_step(t));
    return s;
}

Schedule schedule_recursive(int k) {
    if (k < 1) throw std::invalid_argument("schedule_recursive: k must be >= 1");
    Schedule s;
    s.k = 1;
    s.steps = {RadicalScalar::sqrt2()};
    for (int level = 1; level < k; ++level) {
        // [h, 1 + rho^{level-1}, h] doubles the horizon plus one.
        std::vector<RadicalScalar> next = s.steps;
        next.push_back(RadicalScalar(1) + RadicalScalar::rho_pow(level - 1));
        next.insert(next.end(), s.steps.begin(), s.steps.end());
        s.steps = std::move(next);
        s.k = level + 1;
    }
    return s;
}

RadicalScalar step_sum(int k) {
    if (k < 1) throw std::invalid_argument("step_sum: k must be >= 1");
    // Cache rho^{v-1} for v = 0..k-1 (the only exponents that occur).
    std::vector<RadicalScalar> pow_cache;
    pow_cache.reserve(k);
    for (int v = 0; v < k; ++v) pow_cache.push_back(RadicalScalar::rho_pow(v - 1));
    const std::uint64_t n = (std::uint64_t(1) << k) - 1;
    Rational acc_a(0), acc_b(0);
    for (std::uint64_t u = 1; u <= n; ++u) {
        // u = t + 1 for step indices t = 0..n-1.
        const RadicalScalar& p = pow_cache[static_cast<std::size_t>(valuation(u))];
        acc_a += 1 + p.a();
        acc_b += p.b();
    }
    const RadicalScalar total(acc_a, acc_b);
    const RadicalScalar expected = RadicalScalar::rho_pow(k) - RadicalScalar(1);
    if (total != expected) throw std::logic_error("step_sum: sum does not match rho^k - 1");
    return total;
}

RateInfo rate(int k, mpfr_prec_t bits) {
    if (k < 0) throw std::invalid_argument("rate: k must be >= 0");
    RateInfo info;
    info.k = k;
    if (k == 0) {
        info.r = MpfrInterval::from_rational(make_rational(1, 2), bits);
        info.c = CertScalar(1);
        info.upper_bound = MpfrInterval::pos_infinity(bits);
        return info;
    }
    const RadicalScalar inner = RadicalScalar(4) * RadicalScalar::rho_pow(2L * k) - RadicalScalar(3);
    MpfrInterval denom = MpfrInterval::from_radical(inner, bits).sqrt();
    denom += MpfrInterval::from_long(1, bits);
    info.r = MpfrInterval::from_long(1, bits) / denom;
    info.c = CertScalar::C(k);
    const std::uint64_t n = (std::uint64_t(1) << k) - 1;
    // log2(rho) as an enclosure, then n^{log2 rho} (monotone for n >= 1).
    const MpfrInterval log2rho =
        MpfrInterval::from_radical(RadicalScalar::rho(), bits).log() /
        MpfrInterval::from_long(2, bits).log();
    const MpfrInterval n_pow =
        MpfrInterval::pow(MpfrInterval::from_long(static_cast<long>(n), bits), log2rho);
    info.upper_bound = MpfrInterval::from_long(1, bits) / (MpfrInterval::from_long(2, bits) * n_pow);
    return info;
}

IterationBound iteration_bound(double M, double R2, double eps) {
    if (!(M > 0) || !(R2 > 0) || !(eps > 0))
        throw std::invalid_argument("iteration_bound: arguments must be positive");
    IterationBound out;
    const double log2rho = std::log2(1.0 + std::sqrt(2.0));
    out.closed_form_n = std::pow(M * R2 / (2.0 * eps), 1.0 / log2rho);
    for (int k = 0; k <= 62; ++k) {
        for (mpfr_prec_t bits = 128; bits <= 4096; bits *= 2) {
            const MpfrInterval lhs = rate(k, bits).r *
                                     MpfrInterval::from_double(M, bits) *
                                     MpfrInterval::from_double(R2, bits);
            if (mpfr_cmp_d(lhs.hi(), eps) <= 0) {
                out.k = k;
                out.n = (1L << k) - 1;
                return out;
            }
            if (mpfr_cmp_d(lhs.lo(), eps) > 0) break;  // certainly too large; next k
            // Enclosure straddles eps: refine.
            if (bits == 4096)
                throw PrecisionExhausted("iteration_bound: cannot separate r_k from eps");
        }
    }
    throw std::domain_error("iteration_bound: eps too small for 62 doubling levels");
}

}  // namespace silver
