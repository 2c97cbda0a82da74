#pragma once

#include <silver/cert_scalar.hpp>
#include <silver/schedule.hpp>

#include <Eigen/Core>

#include <string>

// Let Eigen matrices carry CertScalar entries.
namespace Eigen {
template <>
struct NumTraits<silver::CertScalar> {
    using Real = silver::CertScalar;
    using NonInteger = silver::CertScalar;
    using Nested = silver::CertScalar;
    using Literal = long;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 32,
        MulCost = 64,
    };
    static inline silver::CertScalar epsilon() { return silver::CertScalar(0); }
    static inline silver::CertScalar dummy_precision() { return silver::CertScalar(0); }
    static inline int digits10() { return 0; }
};
}  // namespace Eigen

namespace silver {

using CertMatrix = Eigen::Matrix<CertScalar, Eigen::Dynamic, Eigen::Dynamic>;
using CertVector = Eigen::Matrix<CertScalar, Eigen::Dynamic, 1>;
using CertMatrix4 = Eigen::Matrix<CertScalar, 4, 4>;

// Trajectory index: one of the iterates 0..n or the minimizer (star).
// Total order puts star last, giving deterministic iteration everywhere.
struct Index {
    int t = 0;
    bool star = false;

    static Index iterate(int t) { return Index{t, false}; }
    static Index star_index() { return Index{0, true}; }
    bool is_star() const { return star; }
    std::string to_string() const { return star ? "*" : std::to_string(t); }

    friend bool operator==(const Index& a, const Index& b) {
        return a.star == b.star && (a.star || a.t == b.t);
    }
    friend bool operator!=(const Index& a, const Index& b) { return !(a == b); }
    friend bool operator<(const Index& a, const Index& b) {
        if (a.star != b.star) return !a.star;  // star sorts last
        return !a.star && a.t < b.t;
    }
};

// Exact quadratic + linear functional of a trajectory at horizon n.
// quad is a symmetric (n+2)x(n+2) CertScalar matrix over the Gram basis
// (x0, g0, ..., gn), stored as its upper triangle (entries below the
// diagonal are kept at zero and resolved through quad_at). The represented
// quadratic value is the full double sum over all (u, v). lin is over the
// value basis (f0, ..., fn, fstar).
class GramForm {
  public:
    static GramForm zero(int n);

    int horizon() const { return n_; }
    int dim() const { return n_ + 2; }

    const CertScalar& quad_at(int u, int v) const {
        return u <= v ? quad_(u, v) : quad_(v, u);
    }
    void quad_add(int u, int v, const CertScalar& c) {
        if (u <= v) quad_(u, v) += c;
        else quad_(v, u) += c;
    }
    const CertScalar& lin_at(int slot) const { return lin_(slot); }
    void lin_add(int slot, const CertScalar& c) { lin_(slot) += c; }
    int f_slot(const Index& i) const { return i.is_star() ? n_ + 1 : i.t; }

    // Accumulates coef * <a-vector, b-vector> as a symmetric contribution:
    // quad[u][v] += coef * (a_u b_v + a_v b_u) / 2 over all pairs.
    void add_symmetric_outer(const CertScalar& coef, const CertVector& a, const CertVector& b);

    GramForm& operator+=(const GramForm& o);
    void add_scaled(const CertScalar& coef, const GramForm& o);
    GramForm operator-(const GramForm& o) const;

    bool canonically_zero() const;
    // Enclosure of the largest |coefficient| (quad and lin) at the given
    // precision; exactly [0, 0] for the canonical zero form.
    MpfrInterval max_abs_coefficient(mpfr_prec_t bits) const;
    // Human-readable location of the first nonzero coefficient, for reports.
    std::string first_nonzero_description() const;

  private:
    explicit GramForm(int n);
    int n_;
    CertMatrix quad_;
    CertVector lin_;
};

// Gram-basis coordinates of the iterate x_i (star maps to the zero vector;
// the minimizer is the origin by convention) under the given exact schedule:
// x_t = x0 - sum_{s<t} alpha_s g_s.
CertVector x_coords(const Index& i, int n, const std::vector<RadicalScalar>& steps);
// Coordinates of the gradient g_i (zero vector for star).
CertVector g_coords(const Index& i, int n);

// Expands the co-coercivity quantity
//   Q_ij = 2(f_i - f_j) + 2<g_j, x_j - x_i> - ||g_j - g_i||^2
// into an exact GramForm at the schedule's horizon.
GramForm expand_Q(const Index& i, const Index& j, const Schedule& sched);

}  // namespace silver
