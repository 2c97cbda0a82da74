#include <silver/gram.hpp>

#include <stdexcept>
#include <vector>

namespace silver {

GramForm::GramForm(int n) : n_(n) {
    quad_ = CertMatrix::Constant(n + 2, n + 2, CertScalar());
    lin_ = CertVector::Constant(n + 2, CertScalar());
}

GramForm GramForm::zero(int n) { return GramForm(n); }

void GramForm::add_symmetric_outer(const CertScalar& coef, const CertVector& a,
                                   const CertVector& b) {
    if (coef.is_zero()) return;
    std::vector<int> nza, nzb;
    for (int u = 0; u < dim(); ++u) {
        if (!a(u).is_zero()) nza.push_back(u);
        if (!b(u).is_zero()) nzb.push_back(u);
    }
    // Each ordered product term coef/2 * a_u b_v appears in the dense
    // symmetric matrix at (u, v) and (v, u); both map to one stored
    // upper-triangle slot, so off-diagonal slots take the term once and
    // diagonal slots take it twice.
    const RadicalScalar half(make_rational(1, 2));
    for (int u : nza) {
        for (int v : nzb) {
            const CertScalar p = half * (coef * (a(u) * b(v)));
            if (u == v) {
                quad_add(u, u, p + p);
            } else {
                quad_add(u, v, p);
            }
        }
    }
}

GramForm& GramForm::operator+=(const GramForm& o) {
    if (o.n_ != n_) throw std::invalid_argument("GramForm: horizon mismatch");
    for (int u = 0; u < dim(); ++u) {
        lin_(u) += o.lin_(u);
        for (int v = u; v < dim(); ++v) quad_(u, v) += o.quad_(u, v);
    }
    return *this;
}

void GramForm::add_scaled(const CertScalar& coef, const GramForm& o) {
    if (o.n_ != n_) throw std::invalid_argument("GramForm: horizon mismatch");
    if (coef.is_zero()) return;
    for (int u = 0; u < dim(); ++u) {
        if (!o.lin_(u).is_zero()) lin_(u) += coef * o.lin_(u);
        for (int v = u; v < dim(); ++v)
            if (!o.quad_(u, v).is_zero()) quad_(u, v) += coef * o.quad_(u, v);
    }
}

GramForm GramForm::operator-(const GramForm& o) const {
    if (o.n_ != n_) throw std::invalid_argument("GramForm: horizon mismatch");
    GramForm r(*this);
    for (int u = 0; u < dim(); ++u) {
        r.lin_(u) -= o.lin_(u);
        for (int v = u; v < dim(); ++v) r.quad_(u, v) -= o.quad_(u, v);
    }
    return r;
}

bool GramForm::canonically_zero() const {
    for (int u = 0; u < dim(); ++u) {
        if (!lin_(u).is_zero()) return false;
        for (int v = u; v < dim(); ++v)
            if (!quad_(u, v).is_zero()) return false;
    }
    return true;
}

MpfrInterval GramForm::max_abs_coefficient(mpfr_prec_t bits) const {
    MpfrInterval best(bits);  // [0, 0]
    auto consider = [&](const CertScalar& c) {
        if (c.is_zero()) return;
        best = MpfrInterval::max_enclosure(best, eval_cert(c, bits).abs_enclosure());
    };
    for (int u = 0; u < dim(); ++u) {
        consider(lin_(u));
        for (int v = u; v < dim(); ++v) consider(quad_(u, v));
    }
    return best;
}

std::string GramForm::first_nonzero_description() const {
    for (int u = 0; u < dim(); ++u)
        if (!lin_(u).is_zero())
            return "lin[" + std::string(u == n_ + 1 ? "*" : std::to_string(u)) + "] = " +
                   lin_(u).to_string();
    for (int u = 0; u < dim(); ++u)
        for (int v = u; v < dim(); ++v)
            if (!quad_(u, v).is_zero())
                return "quad[" + std::to_string(u) + "," + std::to_string(v) + "] = " +
                       quad_(u, v).to_string();
    return "(all coefficients zero)";
}

CertVector x_coords(const Index& i, int n, const std::vector<RadicalScalar>& steps) {
    CertVector v = CertVector::Constant(n + 2, CertScalar());
    if (i.is_star()) return v;
    v(0) = CertScalar(1);
    for (int s = 0; s < i.t; ++s) v(1 + s) -= CertScalar(steps[s]);
    return v;
}

CertVector g_coords(const Index& i, int n) {
    CertVector v = CertVector::Constant(n + 2, CertScalar());
    if (!i.is_star()) v(i.t + 1) = CertScalar(1);
    return v;
}

GramForm expand_Q(const Index& i, const Index& j, const Schedule& sched) {
    if (i == j) {
        throw std::invalid_argument("expand_Q: pair indices must differ (got " + i.to_string() +
                                    ")");
    }
    const int n = static_cast<int>(sched.horizon());
    GramForm q = GramForm::zero(n);
    q.lin_add(q.f_slot(i), CertScalar(2));
    q.lin_add(q.f_slot(j), CertScalar(-2));
    const CertVector xi = x_coords(i, n, sched.steps);
    const CertVector xj = x_coords(j, n, sched.steps);
    const CertVector gi = g_coords(i, n);
    const CertVector gj = g_coords(j, n);
    const CertVector diff = xj - xi;
    const CertVector gdiff = gj - gi;
    q.add_symmetric_outer(CertScalar(2), gj, diff);
    q.add_symmetric_outer(CertScalar(-1), gdiff, gdiff);
    return q;
}

}  // namespace silver
