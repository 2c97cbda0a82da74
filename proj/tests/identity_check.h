#pragma once

// Independent numeric cross-check of the certificate aggregation identity.
// A synthetic trajectory is drawn with i.i.d. Gaussian gradients, values,
// and starting point (the fixed point is the origin with gradient zero and
// a random value), the points are propagated through the exact stepsizes,
// and both sides of the identity are evaluated in directed-rounding
// interval arithmetic. The two sides must agree far beyond the interval
// widths; nothing symbolic is reused on the evaluation path.

#include <silver/certificate.hpp>
#include <silver/engine.hpp>
#include <silver/interval.hpp>
#include <silver/schedule.hpp>

#include <algorithm>
#include <cstdint>
#include <vector>

namespace silver::testing {

using IVec = std::vector<MpfrInterval>;

inline IVec interval_vector(const Vector& v, mpfr_prec_t bits) {
    IVec out;
    out.reserve(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(MpfrInterval::from_double(v(i), bits));
    }
    return out;
}

inline IVec zero_vector(int dim, mpfr_prec_t bits) {
    return IVec(static_cast<std::size_t>(dim), MpfrInterval(bits));
}

inline MpfrInterval dot(const IVec& a, const IVec& b, mpfr_prec_t bits) {
    MpfrInterval acc(bits);
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline IVec minus(IVec a, const IVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

struct IdentityProbe {
    double residual_hi = 0.0;  // certified upper bound on |lhs - rhs|
    double scale = 1.0;        // max(1, sum of |multiplier * pair term|)

    bool ok(double rel_tol) const { return residual_hi <= rel_tol * scale; }
};

// Evaluates both sides of the aggregation identity at level k on one random
// synthetic trajectory of the given dimension.
inline IdentityProbe identity_probe(int k, std::uint64_t seed, int dim, mpfr_prec_t bits) {
    const int n = (1 << k) - 1;
    const MultiplierMatrix lambda = k == 0 ? base_cert_n0() : build_cert(k);

    std::vector<MpfrInterval> steps;
    if (k >= 1) {
        for (const RadicalScalar& s : schedule_direct(k).steps) {
            steps.push_back(MpfrInterval::from_radical(s, bits));
        }
    }

    GaussianSource rng(seed);
    std::vector<IVec> xs, gs;
    std::vector<MpfrInterval> fs;
    xs.push_back(interval_vector(rng.vector(dim), bits));
    for (int t = 0; t <= n; ++t) {
        gs.push_back(interval_vector(rng.vector(dim), bits));
        fs.push_back(MpfrInterval::from_double(rng.next(), bits));
        if (t < n) {
            IVec next = xs.back();
            for (int c = 0; c < dim; ++c) next[static_cast<std::size_t>(c)] -= steps[static_cast<std::size_t>(t)] * gs.back()[static_cast<std::size_t>(c)];
            xs.push_back(std::move(next));
        }
    }
    const IVec star_point = zero_vector(dim, bits);
    const IVec star_grad = zero_vector(dim, bits);
    const MpfrInterval fstar = MpfrInterval::from_double(rng.next(), bits);

    auto point = [&](const Index& i) -> const IVec& { return i.is_star() ? star_point : xs[static_cast<std::size_t>(i.t)]; };
    auto grad = [&](const Index& i) -> const IVec& { return i.is_star() ? star_grad : gs[static_cast<std::size_t>(i.t)]; };
    auto value = [&](const Index& i) -> const MpfrInterval& { return i.is_star() ? fstar : fs[static_cast<std::size_t>(i.t)]; };

    const MpfrInterval two = MpfrInterval::from_long(2, bits);
    auto pair_term = [&](const Index& i, const Index& j) {
        const IVec dg = minus(grad(j), grad(i));
        const IVec dx = minus(point(j), point(i));
        return two * (value(i) - value(j)) + two * dot(grad(j), dx, bits) - dot(dg, dg, bits);
    };

    MpfrInterval lhs(bits);
    MpfrInterval scale_acc = MpfrInterval::from_long(1, bits);
    for (const auto& [key, coef] : lambda.entries()) {
        const MpfrInterval term = eval_cert(coef, bits) * pair_term(key.first, key.second);
        lhs += term;
        scale_acc += term.abs_enclosure();
    }

    const MpfrInterval ck = k == 0 ? MpfrInterval::from_long(1, bits) : eval_c_symbol(k, bits);
    const IVec last = [&] {
        IVec v = xs.back();
        for (int c = 0; c < dim; ++c) v[static_cast<std::size_t>(c)] -= ck * gs.back()[static_cast<std::size_t>(c)];
        return v;
    }();
    const MpfrInterval rhs = dot(xs.front(), xs.front(), bits) - dot(last, last, bits) +
                             two * ck * (fstar - fs.back());

    IdentityProbe probe;
    probe.residual_hi = (lhs - rhs).abs_enclosure().hi_double_up();
    probe.scale = std::max(1.0, scale_acc.hi_double_up());
    return probe;
}

}  // namespace silver::testing
