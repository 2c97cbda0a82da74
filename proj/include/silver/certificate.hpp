#pragma once

#include <silver/gram.hpp>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace silver {

// Non-negative multipliers lambda_{ij} over ordered pairs of distinct
// indices in {0..n, *}. The diagonal is structurally absent (Q_ii = 0), and
// canonically-zero entries are dropped, so the stored support equals the
// nonzero support.
class MultiplierMatrix {
  public:
    using Key = std::pair<Index, Index>;
    using EntryMap = std::map<Key, CertScalar>;

    explicit MultiplierMatrix(int n) : n_(n) {}

    int horizon() const { return n_; }
    const EntryMap& entries() const { return entries_; }
    std::size_t support_size() const { return entries_.size(); }

    void add(const Index& i, const Index& j, const CertScalar& value);
    void set(const Index& i, const Index& j, const CertScalar& value);
    // Zero if absent.
    CertScalar at(const Index& i, const Index& j) const;

  private:
    int n_;
    EntryMap entries_;
};

// Horizon-0 certificate: the single multiplier lambda_{*0} = 1.
MultiplierMatrix base_cert_n0();

// Horizon-1 certificate (level k=1) with multipliers
// lambda_{01} = rho, lambda_{10} = 1, lambda_{1*} = sqrt2,
// lambda_{*0} = sqrt2, lambda_{*1} = C_1.
MultiplierMatrix base_cert_n1();

// One recursive gluing step: takes a level-k certificate sigma (horizon
// n = 2^k - 1) and produces the level-(k+1) certificate at horizon 2n + 1 as
// the sum of three pieces: two embedded copies of sigma (the second shifted
// by n+1 and scaled by 1 + 2 rho), a rank-one correction on rows
// {n, 2n+1, *} against the middle columns, and a sparse 3x3 correction on
// {n, 2n+1, *}.
MultiplierMatrix glue(const MultiplierMatrix& sigma, int k);

// The level-k certificate, built by gluing up from the horizon-1 base.
MultiplierMatrix build_cert(int k);

// Outcome of the exact verification at level k.
struct VerifyReport {
    int k = 0;
    bool identity_ok = false;
    bool residual_canonically_zero = false;
    MpfrInterval residual_max_abs;
    std::string residual_detail;  // first offending coefficient if any
    bool nonneg_ok = false;
    std::string nonneg_detail;
    bool sparsity_ok = false;
    bool lemma2_ok = false;
    // Filled by the verify command, which composes verify() with the helper
    // decompositions (they are separate operations and need k >= 1).
    std::optional<bool> helper_linear_ok;
    std::optional<bool> helper_quadratic_ok;

    bool core_pass() const { return identity_ok && nonneg_ok && sparsity_ok && lemma2_ok; }
    bool full_pass() const {
        return core_pass() && helper_linear_ok.value_or(true) && helper_quadratic_ok.value_or(true);
    }
};

// Exact verification of the rate identity at level k >= 0: expands
// sum lambda_ij Q_ij into a GramForm and compares, coefficient by
// coefficient, with ||x0||^2 - ||x_n - C_k g_n||^2 + 2 C_k (fstar - f_n).
// Also checks non-negativity of every stored multiplier (adaptive interval
// sign with the given cap), the star-column sparsity, and the closed-form
// star multipliers.
VerifyReport verify(const MultiplierMatrix& lambda, int k, mpfr_prec_t sign_bits_cap = 4096);

// The three closed-form star multipliers at level k:
// sigma_{n*} = rho^k - 1, sigma_{*n} = C_k, sigma_{*t} = alpha_t for t < n.
bool check_star_multipliers(const MultiplierMatrix& sigma, int k);

// Star-column sparsity: the (i, *) entry is absent/zero for every i < n.
bool check_star_sparsity(const MultiplierMatrix& sigma);

// The linear-form decomposition of one gluing step at level k: vectors
// (e, s, l) over the value basis u = (f_n, f_{2n+1}, fstar), where e is the
// gluing error 2 C_{k+1} (fstar - f_{2n+1}) minus the linear part of the two
// embedded copies, s is the rank-one correction sum and l the sparse
// correction sum. check: all off-support value coefficients vanish,
// e - s - l = 0 canonically, and each vector matches its closed form.
struct HelperLinear {
    std::array<CertScalar, 3> e, s, l;
    bool ok = false;
    std::string detail;
};

HelperLinear helper_linear_forms(int k);

// The quadratic-form decomposition of the same gluing step: symmetric 4x4
// matrices (E, S, L) over v = (x_n, g_n, x_{2n+1}, g_{2n+1}). check:
// E - S - L = 0 canonically, and each closed-form matrix reproduces, through
// the v coordinates, the independently expanded Gram form of its piece
// (which also proves the pieces are supported on v alone).
struct HelperQuadratic {
    CertMatrix4 E, S, L;
    bool ok = false;
    std::string detail;
};

HelperQuadratic helper_quadratic_forms(int k);

enum class ExportFormat { Exact, Csv };

// Serializes all stored multipliers in deterministic (row-major, star-last)
// order; exact scalar strings plus a decimal column.
std::string export_cert(const MultiplierMatrix& lambda, ExportFormat format);

}  // namespace silver
