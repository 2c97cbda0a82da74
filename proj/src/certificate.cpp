#include <silver/certificate.hpp>

#include <sstream>
#include <stdexcept>

namespace silver {

namespace {

Index it(int t) { return Index::iterate(t); }
Index star() { return Index::star_index(); }

// 1 + 2*rho = 3 + 2*sqrt2
RadicalScalar one_plus_two_rho() {
    return RadicalScalar(Rational(3), Rational(2));
}

// The six sparse-correction entries added on rows/columns {n, N, *} when a
// level-k certificate at horizon n is glued to horizon N = 2n + 1.
struct SparseCorrection {
    CertScalar n_N, n_star, N_n, N_star, star_n, star_N;
};

SparseCorrection sparse_correction(int k) {
    const RadicalScalar rho = RadicalScalar::rho();
    const RadicalScalar sqrt2 = RadicalScalar::sqrt2();
    const RadicalScalar one(1);
    SparseCorrection d;
    d.n_N = CertScalar(rho);
    d.n_star = CertScalar(one - RadicalScalar::rho_pow(k));
    d.N_n = CertScalar(RadicalScalar::rho_pow(k));
    d.N_star = CertScalar(rho + rho - sqrt2 * RadicalScalar::rho_pow(k + 1));
    d.star_n = CertScalar(one + RadicalScalar::rho_pow(k - 1)) - CertScalar::C(k);
    d.star_N = CertScalar::C(k + 1) - one_plus_two_rho() * CertScalar::C(k);
    return d;
}

// Applies fn(i, j, value) to every rank-one correction entry: rows
// {n, N, *} against columns {n+1..2n} with weights rho*alpha_t * (1, 1, -2).
template <typename Fn>
void for_each_rank_one_entry(int k, Fn&& fn) {
    const int n = (1 << k) - 1;
    const int bign = 2 * n + 1;
    const RadicalScalar rho = RadicalScalar::rho();
    for (int t = n + 1; t <= 2 * n; ++t) {
        const RadicalScalar w = rho * silver_step(static_cast<std::uint64_t>(t));
        fn(it(n), it(t), CertScalar(w));
        fn(it(bign), it(t), CertScalar(w));
        fn(star(), it(t), CertScalar(RadicalScalar(-2) * w));
    }
}

template <typename Fn>
void for_each_sparse_entry(int k, Fn&& fn) {
    const int n = (1 << k) - 1;
    const int bign = 2 * n + 1;
    const SparseCorrection d = sparse_correction(k);
    fn(it(n), it(bign), d.n_N);
    fn(it(n), star(), d.n_star);
    fn(it(bign), it(n), d.N_n);
    fn(it(bign), star(), d.N_star);
    fn(star(), it(n), d.star_n);
    fn(star(), it(bign), d.star_N);
}

// Applies fn to both embedded copies of sigma: the identity copy and the
// shifted copy (iterates moved up by n+1, star fixed) scaled by 1 + 2*rho.
template <typename Fn>
void for_each_embedded_entry(const MultiplierMatrix& sigma, Fn&& fn) {
    const int n = sigma.horizon();
    const RadicalScalar scale = one_plus_two_rho();
    auto shift = [n](const Index& i) {
        return i.is_star() ? star() : it(i.t + n + 1);
    };
    for (const auto& [key, value] : sigma.entries()) {
        fn(key.first, key.second, value);
        fn(shift(key.first), shift(key.second), scale * value);
    }
}

std::string pair_name(const Index& i, const Index& j) {
    return "(" + i.to_string() + "," + j.to_string() + ")";
}

}  // namespace

void MultiplierMatrix::add(const Index& i, const Index& j, const CertScalar& value) {
    if (i == j) throw std::invalid_argument("multiplier on the diagonal: " + pair_name(i, j));
    const Key key{i, j};
    auto pos = entries_.find(key);
    if (pos == entries_.end()) {
        if (!value.is_zero()) entries_.emplace(key, value);
        return;
    }
    pos->second = pos->second + value;
    if (pos->second.is_zero()) entries_.erase(pos);
}

void MultiplierMatrix::set(const Index& i, const Index& j, const CertScalar& value) {
    if (i == j) throw std::invalid_argument("multiplier on the diagonal: " + pair_name(i, j));
    const Key key{i, j};
    if (value.is_zero()) {
        entries_.erase(key);
    } else {
        entries_[key] = value;
    }
}

CertScalar MultiplierMatrix::at(const Index& i, const Index& j) const {
    auto pos = entries_.find(Key{i, j});
    return pos == entries_.end() ? CertScalar(0) : pos->second;
}

MultiplierMatrix base_cert_n0() {
    MultiplierMatrix m(0);
    m.add(star(), it(0), CertScalar(1));
    return m;
}

MultiplierMatrix base_cert_n1() {
    MultiplierMatrix m(1);
    m.add(it(0), it(1), CertScalar(RadicalScalar::rho()));
    m.add(it(1), it(0), CertScalar(1));
    m.add(it(1), star(), CertScalar(RadicalScalar::sqrt2()));
    m.add(star(), it(0), CertScalar(RadicalScalar::sqrt2()));
    m.add(star(), it(1), CertScalar::C(1));
    return m;
}

MultiplierMatrix glue(const MultiplierMatrix& sigma, int k) {
    if (k < 1) throw std::invalid_argument("glue: level must be >= 1");
    const int n = (1 << k) - 1;
    if (sigma.horizon() != n) {
        throw std::invalid_argument("glue: certificate horizon " + std::to_string(sigma.horizon()) +
                                    " does not match level " + std::to_string(k));
    }
    if (!check_star_sparsity(sigma)) {
        throw std::invalid_argument("glue: input certificate lacks star-column sparsity");
    }
    MultiplierMatrix out(2 * n + 1);
    auto acc = [&out](const Index& i, const Index& j, const CertScalar& v) { out.add(i, j, v); };
    for_each_embedded_entry(sigma, acc);
    for_each_rank_one_entry(k, acc);
    for_each_sparse_entry(k, acc);
    return out;
}

MultiplierMatrix build_cert(int k) {
    if (k < 1) throw std::invalid_argument("build_cert: level must be >= 1");
    MultiplierMatrix m = base_cert_n1();
    for (int level = 1; level < k; ++level) m = glue(m, level);
    return m;
}

bool check_star_sparsity(const MultiplierMatrix& sigma) {
    const int n = sigma.horizon();
    for (const auto& [key, value] : sigma.entries()) {
        (void)value;  // stored entries are never canonically zero
        if (key.second.is_star() && !key.first.is_star() && key.first.t < n) return false;
    }
    return true;
}

bool check_star_multipliers(const MultiplierMatrix& sigma, int k) {
    if (k < 0 || sigma.horizon() != (1 << k) - 1) return false;
    const int n = sigma.horizon();
    // (n, *) = rho^k - 1
    const CertScalar want_n_star(RadicalScalar::rho_pow(k) - RadicalScalar(1));
    if (!(sigma.at(it(n), star()) - want_n_star).is_zero()) return false;
    // (*, n) = C_k (level 0 degenerates to the constant 1)
    const CertScalar want_star_n = k == 0 ? CertScalar(1) : CertScalar::C(k);
    if (!(sigma.at(star(), it(n)) - want_star_n).is_zero()) return false;
    // (*, t) = alpha_t for every t < n
    for (int t = 0; t < n; ++t) {
        const CertScalar want(silver_step(static_cast<std::uint64_t>(t)));
        if (!(sigma.at(star(), it(t)) - want).is_zero()) return false;
    }
    return true;
}

VerifyReport verify(const MultiplierMatrix& lambda, int k, mpfr_prec_t sign_bits_cap) {
    if (k < 0) throw std::invalid_argument("verify: level must be >= 0");
    const int n = (1 << k) - 1;
    if (lambda.horizon() != n) {
        throw std::invalid_argument("verify: certificate horizon " +
                                    std::to_string(lambda.horizon()) +
                                    " does not match level " + std::to_string(k));
    }
    VerifyReport report;
    report.k = k;

    Schedule sched;
    if (k >= 1) {
        sched = schedule_direct(k);
    } else {
        sched.k = 0;
        sched.steps.clear();
    }

    // Left side: the multiplier-weighted sum of co-coercivity forms.
    GramForm lhs = GramForm::zero(n);
    for (const auto& [key, value] : lambda.entries()) {
        lhs.add_scaled(value, expand_Q(key.first, key.second, sched));
    }

    // Right side: ||x0||^2 - ||x_n - C_k g_n||^2 + 2 C_k (fstar - f_n).
    const CertScalar ck = k == 0 ? CertScalar(1) : CertScalar::C(k);
    GramForm rhs = GramForm::zero(n);
    {
        const CertVector x0 = x_coords(it(0), n, sched.steps);
        rhs.add_symmetric_outer(CertScalar(1), x0, x0);
        const CertVector w = x_coords(it(n), n, sched.steps) - g_coords(it(n), n) * ck;
        rhs.add_symmetric_outer(CertScalar(-1), w, w);
        const CertScalar two_ck = CertScalar(2) * ck;
        rhs.lin_add(rhs.f_slot(star()), two_ck);
        rhs.lin_add(rhs.f_slot(it(n)), CertScalar(0) - two_ck);
    }

    const GramForm residual = lhs - rhs;
    report.identity_ok = residual.canonically_zero();
    report.residual_canonically_zero = report.identity_ok;
    report.residual_max_abs = residual.max_abs_coefficient(256);
    if (!report.identity_ok) report.residual_detail = residual.first_nonzero_description();

    // Non-negativity of every stored multiplier, by exact/interval sign.
    report.nonneg_ok = true;
    for (const auto& [key, value] : lambda.entries()) {
        const SignVerdict verdict = ring_sign(value, sign_bits_cap);
        if (verdict.verdict == SignVerdict::Kind::Negative) {
            report.nonneg_ok = false;
            if (report.nonneg_detail.empty()) {
                report.nonneg_detail = "negative multiplier at " +
                                       pair_name(key.first, key.second) + " = " + value.to_string();
            }
        }
    }

    report.sparsity_ok = check_star_sparsity(lambda);
    report.lemma2_ok = check_star_multipliers(lambda, k);
    return report;
}

namespace {

// Linear f-coefficients of the multiplier-weighted co-coercivity sum,
// restricted to (f_n, f_N, fstar) after asserting every other coefficient
// cancels. Returns false (with detail) if some off-support coefficient
// survives.
template <typename ForEach>
bool restricted_linear_sum(int k, const Schedule& sched, ForEach&& for_each,
                           std::array<CertScalar, 3>& out, const char* label,
                           std::string& detail) {
    const int n = (1 << k) - 1;
    const int bign = 2 * n + 1;
    GramForm sum = GramForm::zero(bign);
    for_each([&](const Index& i, const Index& j, const CertScalar& v) {
        sum.add_scaled(v, expand_Q(i, j, sched));
    });
    for (int slot = 0; slot <= bign + 1; ++slot) {
        if (slot == n || slot == bign || slot == bign + 1) continue;
        if (!sum.lin_at(slot).is_zero()) {
            detail = std::string(label) + ": unexpected value coefficient at f_" +
                     std::to_string(slot);
            return false;
        }
    }
    out = {sum.lin_at(n), sum.lin_at(bign), sum.lin_at(bign + 1)};
    return true;
}

bool vectors_match(const std::array<CertScalar, 3>& got, const std::array<CertScalar, 3>& want,
                   const char* label, std::string& detail) {
    for (int i = 0; i < 3; ++i) {
        if (!(got[i] - want[i]).is_zero()) {
            detail = std::string(label) + ": component " + std::to_string(i + 1) +
                     " is " + got[i].to_string() + ", expected " + want[i].to_string();
            return false;
        }
    }
    return true;
}

}  // namespace

HelperLinear helper_linear_forms(int k) {
    if (k < 1) throw std::invalid_argument("helper_linear_forms: level must be >= 1");
    HelperLinear h;
    const int n = (1 << k) - 1;
    const int bign = 2 * n + 1;
    const MultiplierMatrix sigma = build_cert(k);
    const Schedule sched = schedule_direct(k + 1);

    // e: the gluing error 2 C_{k+1} (fstar - f_N) minus the linear part of
    // the two embedded copies.
    std::array<CertScalar, 3> theta_lin;
    if (!restricted_linear_sum(
            k, sched,
            [&](auto&& fn) { for_each_embedded_entry(sigma, fn); },
            theta_lin, "embedded copies", h.detail)) {
        return h;
    }
    const CertScalar two_ck1 = CertScalar(2) * CertScalar::C(k + 1);
    h.e = {CertScalar(0) - theta_lin[0], CertScalar(0) - two_ck1 - theta_lin[1],
           two_ck1 - theta_lin[2]};

    if (!restricted_linear_sum(
            k, sched,
            [&](auto&& fn) { for_each_rank_one_entry(k, fn); },
            h.s, "rank-one correction", h.detail)) {
        return h;
    }
    if (!restricted_linear_sum(
            k, sched,
            [&](auto&& fn) { for_each_sparse_entry(k, fn); },
            h.l, "sparse correction", h.detail)) {
        return h;
    }
    (void)bign;

    for (int i = 0; i < 3; ++i) {
        if (!(h.e[i] - h.s[i] - h.l[i]).is_zero()) {
            h.detail = "e - s - l has nonzero component " + std::to_string(i + 1);
            return h;
        }
    }

    // Closed forms. With C = C_k, C' = C_{k+1}, rho the step ratio:
    //   e = (2C, -2C' + (1+2rho)2C, 2C' - (2+2rho)2C)
    //   s = 2rho(rho^k - 1) * (1, 1, -2)
    //   l = e - s, componentwise.
    const CertScalar two_ck = CertScalar(2) * (k == 0 ? CertScalar(1) : CertScalar::C(k));
    const RadicalScalar rho = RadicalScalar::rho();
    const CertScalar sc(RadicalScalar(2) * rho * (RadicalScalar::rho_pow(k) - RadicalScalar(1)));
    const std::array<CertScalar, 3> want_e = {
        two_ck,
        CertScalar(0) - two_ck1 + one_plus_two_rho() * two_ck,
        two_ck1 - (RadicalScalar(2) + RadicalScalar(2) * rho) * two_ck,
    };
    const std::array<CertScalar, 3> want_s = {sc, sc, CertScalar(0) - CertScalar(2) * sc};
    const std::array<CertScalar, 3> want_l = {
        want_e[0] - want_s[0], want_e[1] - want_s[1], want_e[2] - want_s[2]};
    if (!vectors_match(h.e, want_e, "e", h.detail)) return h;
    if (!vectors_match(h.s, want_s, "s", h.detail)) return h;
    if (!vectors_match(h.l, want_l, "l", h.detail)) return h;

    h.ok = true;
    return h;
}

namespace {

CertMatrix4 symmetric_from_upper(CertMatrix4 m) {
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < a; ++b) m(a, b) = m(b, a);
    return m;
}

// Quadratic part of the multiplier-weighted co-coercivity sum over the
// given entry generator, as a GramForm at horizon N = 2^{k+1} - 1.
template <typename ForEach>
GramForm quadratic_sum(int k, const Schedule& sched, ForEach&& for_each) {
    const int bign = 2 * ((1 << k) - 1) + 1;
    GramForm sum = GramForm::zero(bign);
    for_each([&](const Index& i, const Index& j, const CertScalar& v) {
        sum.add_scaled(v, expand_Q(i, j, sched));
    });
    // Drop the linear part; only the quadratic coefficients are compared.
    for (int slot = 0; slot <= bign + 1; ++slot) {
        sum.lin_add(slot, CertScalar(0) - sum.lin_at(slot));
    }
    return sum;
}

// The quadratic form <M, v v^T> for v = (x_n, g_n, x_N, g_N), pushed into
// the Gram basis. Off-diagonal entries of the symmetric 4x4 matrix
// contribute twice (once per side of the diagonal).
GramForm gram_of_4x4(const CertMatrix4& m, int k, const Schedule& sched) {
    const int n = (1 << k) - 1;
    const int bign = 2 * n + 1;
    const std::array<CertVector, 4> basis = {
        x_coords(it(n), bign, sched.steps), g_coords(it(n), bign),
        x_coords(it(bign), bign, sched.steps), g_coords(it(bign), bign)};
    GramForm out = GramForm::zero(bign);
    for (int a = 0; a < 4; ++a) {
        for (int b = a; b < 4; ++b) {
            if (m(a, b).is_zero()) continue;
            const CertScalar coef = a == b ? m(a, b) : CertScalar(2) * m(a, b);
            out.add_symmetric_outer(coef, basis[a], basis[b]);
        }
    }
    return out;
}

bool gram_forms_equal(const GramForm& x, const GramForm& y, const char* label,
                      std::string& detail) {
    const GramForm diff = x - y;
    if (diff.canonically_zero()) return true;
    detail = std::string(label) + ": mismatch at " + diff.first_nonzero_description();
    return false;
}

}  // namespace

HelperQuadratic helper_quadratic_forms(int k) {
    if (k < 1) throw std::invalid_argument("helper_quadratic_forms: level must be >= 1");
    HelperQuadratic h;
    const int n = (1 << k) - 1;
    const int bign = 2 * n + 1;
    const MultiplierMatrix sigma = build_cert(k);
    const Schedule sched = schedule_direct(k + 1);

    const CertScalar ck = CertScalar::C(k);
    const CertScalar ck1 = CertScalar::C(k + 1);
    const RadicalScalar rho = RadicalScalar::rho();
    const CertScalar two_rho(rho + rho);
    const CertScalar opt(one_plus_two_rho());
    const CertScalar an(RadicalScalar(1) + RadicalScalar::rho_pow(k - 1));  // alpha_n

    // Closed forms over v = (x_n, g_n, x_N, g_N); upper triangles.
    CertMatrix4 e4 = CertMatrix4::Constant(CertScalar(0));
    e4(0, 0) = CertScalar(0) - two_rho;
    e4(0, 1) = opt * an - ck;
    e4(1, 1) = ck * ck - opt * an * an;
    e4(2, 2) = two_rho;
    e4(2, 3) = ck1 - opt * ck;
    e4(3, 3) = opt * ck * ck - ck1 * ck1;

    const SparseCorrection d = sparse_correction(k);
    CertMatrix4 s4 = CertMatrix4::Constant(CertScalar(0));
    s4(0, 1) = d.N_n + d.star_n;
    s4(0, 3) = CertScalar(0) - d.n_N;
    s4(1, 1) = CertScalar(0) - (d.n_star + d.star_n + d.N_n + d.n_N);
    s4(1, 2) = CertScalar(0) - d.N_n;
    s4(1, 3) = d.n_N + d.N_n;
    s4(2, 3) = d.n_N + d.star_N;
    s4(3, 3) = CertScalar(0) - (d.n_N + d.N_n + d.N_star + d.star_N);

    const CertScalar rho_c(rho);
    const CertScalar rkm1(RadicalScalar::rho_pow(k - 1));
    const CertScalar rk(RadicalScalar::rho_pow(k));
    CertMatrix4 l4 = CertMatrix4::Constant(CertScalar(0));
    l4(0, 0) = rho_c * CertScalar(-2);
    l4(0, 1) = rho_c * (CertScalar(2) + rkm1);
    l4(0, 3) = rho_c;
    l4(1, 1) = rho_c * (CertScalar(-1) - rk - CertScalar(2) * rkm1);
    l4(1, 2) = rho_c * rkm1;
    l4(1, 3) = rho_c * (CertScalar(-1) - rkm1);
    l4(2, 2) = rho_c * CertScalar(2);
    l4(2, 3) = CertScalar(0) - rho_c;
    l4(3, 3) = rho_c * (CertScalar(1) - rk);

    h.E = symmetric_from_upper(e4);
    h.S = symmetric_from_upper(s4);
    h.L = symmetric_from_upper(l4);

    // E - S - L = 0, entrywise.
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            if (!(h.E(a, b) - h.S(a, b) - h.L(a, b)).is_zero()) {
                h.detail = "E - S - L nonzero at (" + std::to_string(a + 1) + "," +
                           std::to_string(b + 1) + ")";
                return h;
            }
        }
    }

    // Each closed form must reproduce the directly expanded quadratic part
    // of its piece; equality in the full Gram basis also proves the pieces
    // are supported on (x_n, g_n, x_N, g_N) alone.
    GramForm error_gram = GramForm::zero(bign);
    {
        const CertVector x0 = x_coords(it(0), bign, sched.steps);
        error_gram.add_symmetric_outer(CertScalar(1), x0, x0);
        const CertVector w =
            x_coords(it(bign), bign, sched.steps) - g_coords(it(bign), bign) * ck1;
        error_gram.add_symmetric_outer(CertScalar(-1), w, w);
        const GramForm theta_quad = quadratic_sum(
            k, sched, [&](auto&& fn) { for_each_embedded_entry(sigma, fn); });
        error_gram.add_scaled(CertScalar(-1), theta_quad);
    }
    if (!gram_forms_equal(error_gram, gram_of_4x4(h.E, k, sched), "E", h.detail)) return h;

    const GramForm delta_quad =
        quadratic_sum(k, sched, [&](auto&& fn) { for_each_sparse_entry(k, fn); });
    if (!gram_forms_equal(delta_quad, gram_of_4x4(h.S, k, sched), "S", h.detail)) return h;

    const GramForm xi_quad =
        quadratic_sum(k, sched, [&](auto&& fn) { for_each_rank_one_entry(k, fn); });
    if (!gram_forms_equal(xi_quad, gram_of_4x4(h.L, k, sched), "L", h.detail)) return h;

    h.ok = true;
    return h;
}

std::string export_cert(const MultiplierMatrix& lambda, ExportFormat format) {
    std::ostringstream out;
    if (format == ExportFormat::Csv) out << "i,j,exact,decimal\n";
    for (const auto& [key, value] : lambda.entries()) {
        const std::string decimal = eval_cert(value, 256).to_decimal(17);
        if (format == ExportFormat::Exact) {
            out << pair_name(key.first, key.second) << " = " << value.to_string() << " ~ "
                << decimal << "\n";
        } else {
            out << key.first.to_string() << "," << key.second.to_string() << ","
                << value.to_string() << "," << decimal << "\n";
        }
    }
    return out.str();
}

}  // namespace silver
