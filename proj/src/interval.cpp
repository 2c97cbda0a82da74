#include <silver/interval.hpp>

#include <algorithm>
#include <cstdio>
#include <utility>
#include <vector>

namespace silver {

MpfrInterval::MpfrInterval(mpfr_prec_t prec) : prec_(std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN)) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

MpfrInterval::MpfrInterval(const MpfrInterval& o) : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

MpfrInterval::MpfrInterval(MpfrInterval&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(lo_, MPFR_PREC_MIN);
    mpfr_init2(hi_, MPFR_PREC_MIN);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

MpfrInterval& MpfrInterval::operator=(MpfrInterval o) {
    swap(o);
    return *this;
}

void MpfrInterval::swap(MpfrInterval& o) noexcept {
    std::swap(prec_, o.prec_);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

MpfrInterval::~MpfrInterval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

MpfrInterval MpfrInterval::from_long(long v, mpfr_prec_t prec) {
    MpfrInterval r(prec);
    mpfr_set_si(r.lo_, v, MPFR_RNDD);
    mpfr_set_si(r.hi_, v, MPFR_RNDU);
    return r;
}

MpfrInterval MpfrInterval::from_double(double v, mpfr_prec_t prec) {
    MpfrInterval r(prec);
    mpfr_set_d(r.lo_, v, MPFR_RNDD);
    mpfr_set_d(r.hi_, v, MPFR_RNDU);
    return r;
}

MpfrInterval MpfrInterval::from_rational(const Rational& q, mpfr_prec_t prec) {
    MpfrInterval r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
}

MpfrInterval MpfrInterval::pos_infinity(mpfr_prec_t prec) {
    MpfrInterval r(prec);
    mpfr_set_inf(r.lo_, 1);
    mpfr_set_inf(r.hi_, 1);
    return r;
}

MpfrInterval MpfrInterval::from_radical(const RadicalScalar& x, mpfr_prec_t prec) {
    MpfrInterval r(prec);
    mpfr_t s2lo, s2hi, t;
    mpfr_init2(s2lo, prec);
    mpfr_init2(s2hi, prec);
    mpfr_init2(t, prec);
    mpfr_sqrt_ui(s2lo, 2, MPFR_RNDD);
    mpfr_sqrt_ui(s2hi, 2, MPFR_RNDU);
    const int sb = sgn(x.b());
    // lo = a + b*sqrt2 rounded down: for b >= 0 use the low sqrt2, else high.
    mpfr_mul_q(t, sb >= 0 ? s2lo : s2hi, x.b().get_mpq_t(), MPFR_RNDD);
    mpfr_add_q(r.lo_, t, x.a().get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(t, sb >= 0 ? s2hi : s2lo, x.b().get_mpq_t(), MPFR_RNDU);
    mpfr_add_q(r.hi_, t, x.a().get_mpq_t(), MPFR_RNDU);
    mpfr_clear(s2lo);
    mpfr_clear(s2hi);
    mpfr_clear(t);
    return r;
}

MpfrInterval MpfrInterval::operator-() const {
    MpfrInterval r(prec_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

MpfrInterval& MpfrInterval::operator+=(const MpfrInterval& o) {
    if (o.prec_ > prec_) {
        MpfrInterval widened(o.prec_);
        mpfr_set(widened.lo_, lo_, MPFR_RNDD);
        mpfr_set(widened.hi_, hi_, MPFR_RNDU);
        swap(widened);
    }
    mpfr_add(lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(hi_, hi_, o.hi_, MPFR_RNDU);
    return *this;
}

MpfrInterval& MpfrInterval::operator-=(const MpfrInterval& o) { return *this += -o; }

MpfrInterval& MpfrInterval::operator*=(const MpfrInterval& o) {
    const mpfr_prec_t p = std::max(prec_, o.prec_);
    MpfrInterval r(p);
    // Enclose by min/max of the four endpoint products, each computed with
    // both rounding directions.
    mpfr_t cand;
    mpfr_init2(cand, p);
    bool first = true;
    const mpfr_t* xs[2] = {&lo_, &hi_};
    const mpfr_t* ys[2] = {&o.lo_, &o.hi_};
    for (const mpfr_t* x : xs) {
        for (const mpfr_t* y : ys) {
            mpfr_mul(cand, *x, *y, MPFR_RNDD);
            if (first || mpfr_cmp(cand, r.lo_) < 0) mpfr_set(r.lo_, cand, MPFR_RNDD);
            mpfr_mul(cand, *x, *y, MPFR_RNDU);
            if (first || mpfr_cmp(cand, r.hi_) > 0) mpfr_set(r.hi_, cand, MPFR_RNDU);
            first = false;
        }
    }
    mpfr_clear(cand);
    swap(r);
    return *this;
}

MpfrInterval& MpfrInterval::operator/=(const MpfrInterval& o) {
    if (o.contains_zero()) throw std::domain_error("MpfrInterval: division by interval containing 0");
    const mpfr_prec_t p = std::max(prec_, o.prec_);
    MpfrInterval inv(p);
    // o has constant sign; the reciprocal endpoints swap.
    mpfr_ui_div(inv.lo_, 1, o.hi_, MPFR_RNDD);
    mpfr_ui_div(inv.hi_, 1, o.lo_, MPFR_RNDU);
    return *this *= inv;
}

MpfrInterval MpfrInterval::sqrt() const {
    if (mpfr_sgn(lo_) < 0) throw std::domain_error("MpfrInterval: sqrt of possibly-negative interval");
    MpfrInterval r(prec_);
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
}

MpfrInterval MpfrInterval::pow(const MpfrInterval& x, const MpfrInterval& y) {
    if (mpfr_cmp_ui(x.lo_, 1) < 0)
        throw std::domain_error("MpfrInterval: pow requires base >= 1");
    const mpfr_prec_t p = std::max(x.prec_, y.prec_);
    MpfrInterval r(p);
    // For base >= 1, x^y is monotone increasing in both arguments.
    mpfr_pow(r.lo_, x.lo_, y.lo_, MPFR_RNDD);
    mpfr_pow(r.hi_, x.hi_, y.hi_, MPFR_RNDU);
    return r;
}

MpfrInterval MpfrInterval::log() const {
    if (mpfr_sgn(lo_) <= 0) throw std::domain_error("MpfrInterval: log requires positive interval");
    MpfrInterval r(prec_);
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
}

MpfrInterval MpfrInterval::abs_enclosure() const {
    MpfrInterval r(prec_);
    if (mpfr_sgn(lo_) >= 0) {
        mpfr_set(r.lo_, lo_, MPFR_RNDD);
        mpfr_set(r.hi_, hi_, MPFR_RNDU);
    } else if (mpfr_sgn(hi_) <= 0) {
        mpfr_neg(r.lo_, hi_, MPFR_RNDD);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    } else {
        mpfr_set_zero(r.lo_, 1);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
        if (mpfr_cmp(hi_, r.hi_) > 0) mpfr_set(r.hi_, hi_, MPFR_RNDU);
    }
    return r;
}

MpfrInterval MpfrInterval::max_enclosure(const MpfrInterval& x, const MpfrInterval& y) {
    MpfrInterval r(std::max(x.prec_, y.prec_));
    mpfr_max(r.lo_, x.lo_, y.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, x.hi_, y.hi_, MPFR_RNDU);
    return r;
}

bool MpfrInterval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

int MpfrInterval::sign_if_separated() const {
    if (mpfr_sgn(lo_) > 0) return 1;
    if (mpfr_sgn(hi_) < 0) return -1;
    return 0;
}

bool MpfrInterval::is_exact_zero() const { return mpfr_zero_p(lo_) && mpfr_zero_p(hi_); }

bool MpfrInterval::subset_of(const MpfrInterval& o) const {
    return mpfr_cmp(o.lo_, lo_) <= 0 && mpfr_cmp(hi_, o.hi_) <= 0;
}

bool MpfrInterval::contains(double v) const {
    return mpfr_cmp_d(lo_, v) <= 0 && mpfr_cmp_d(hi_, v) >= 0;
}

double MpfrInterval::midpoint_double() const {
    mpfr_t m;
    mpfr_init2(m, prec_);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    const double d = mpfr_get_d(m, MPFR_RNDN);
    mpfr_clear(m);
    return d;
}

double MpfrInterval::hi_double_up() const { return mpfr_get_d(hi_, MPFR_RNDU); }
double MpfrInterval::lo_double_down() const { return mpfr_get_d(lo_, MPFR_RNDD); }

double MpfrInterval::width_double() const {
    mpfr_t w;
    mpfr_init2(w, prec_);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    const double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

std::string MpfrInterval::to_decimal(int digits) const {
    mpfr_t m;
    mpfr_init2(m, prec_);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    char fmt[32];
    std::snprintf(fmt, sizeof(fmt), "%%.%dRg", digits);
    char* out = nullptr;
    mpfr_asprintf(&out, fmt, m);
    std::string s(out);
    mpfr_free_str(out);
    mpfr_clear(m);
    return s;
}

std::string MpfrInterval::to_string() const {
    char* lo_s = nullptr;
    char* hi_s = nullptr;
    mpfr_asprintf(&lo_s, "%.20Rg", lo_);
    mpfr_asprintf(&hi_s, "%.20Rg", hi_);
    std::string s = std::string("[") + lo_s + ", " + hi_s + "]";
    mpfr_free_str(lo_s);
    mpfr_free_str(hi_s);
    return s;
}

MpfrInterval eval_radical(const RadicalScalar& x, mpfr_prec_t bits) {
    return MpfrInterval::from_radical(x, bits);
}

}  // namespace silver
