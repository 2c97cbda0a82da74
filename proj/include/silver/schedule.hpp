#pragma once

#include <silver/cert_scalar.hpp>
#include <silver/interval.hpp>
#include <silver/radical.hpp>

#include <cstdint>
#include <vector>

namespace silver {

// The stepsize schedule at level k: exactly n = 2^k - 1 positive exact steps.
// The sequence is palindromic around the center spike at index 2^{k-1} - 1:
// level k is [prefix, center, prefix] with prefix the level-(k-1) schedule.
struct Schedule {
    int k = 0;
    std::vector<RadicalScalar> steps;

    std::size_t horizon() const { return steps.size(); }
    std::vector<double> to_doubles() const;
};

// 2-adic valuation: the exponent of the largest power of 2 dividing t.
// Rejects t = 0.
int valuation(std::uint64_t t);

// The t-th stepsize (0-indexed): 1 + rho^{valuation(t+1) - 1}, with the
// negative exponent meaning the exact field inverse rho^{-1} = sqrt2 - 1.
RadicalScalar silver_step(std::uint64_t t);

// Builds the level-k schedule from the per-index formula.
Schedule schedule_direct(int k);

// Builds the level-k schedule by the palindromic recursion from the length-1
// base; equals schedule_direct(k) entrywise.
Schedule schedule_recursive(int k);

// Exact sum of the level-k steps, computed by streaming summation and
// asserted equal to rho^k - 1. Never materializes the schedule, so large k
// (<= 20 in the tests) stays fast.
RadicalScalar step_sum(int k);

// Rate data at level k: certified enclosure of r_k = 1/(1 + sqrt(4 rho^{2k}
// - 3)), the symbolic c_k = 1/(2 r_k), and the asymptotic upper bound
// 1/(2 n^{log2 rho}) with n = 2^k - 1. k = 0 is the degenerate base level
// with r_0 = 1/2, c_0 = 1 (the bound is +infinity there since n = 0).
struct RateInfo {
    int k = 0;
    MpfrInterval r;
    CertScalar c;
    MpfrInterval upper_bound;
};

RateInfo rate(int k, mpfr_prec_t bits);

// Smallest horizon of the form n = 2^k - 1 with r_k * M * R2 <= eps,
// decided soundly on interval enclosures (precision raised adaptively).
// closed_form_n is the exponent bound (M R2 / (2 eps))^{1 / log2 rho},
// reported for comparison.
struct IterationBound {
    long n = 0;
    int k = 0;
    double closed_form_n = 0.0;
};

IterationBound iteration_bound(double M, double R2, double eps);

}  // namespace silver
