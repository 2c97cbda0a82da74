#include <silver/engine.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace silver {

double GaussianSource::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Uniforms in (0, 1]: top 53 bits of the engine output, shifted into
    // (0, 2^53] before scaling, so log(u1) is always finite.
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

Vector GaussianSource::vector(int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = next();
    return v;
}

Matrix GaussianSource::matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = next();
    return m;
}

namespace {

class QuadraticOracle final : public Oracle {
  public:
    QuadraticOracle(Matrix a, Vector xstar)
        : a_(std::move(a)), xstar_(std::move(xstar)) {}

    int dimension() const override { return static_cast<int>(xstar_.size()); }
    double smoothness() const override { return 1.0; }
    Evaluation eval(const Vector& x) const override {
        const Vector d = x - xstar_;
        Evaluation e;
        e.gradient = a_ * d;
        e.value = 0.5 * d.dot(e.gradient);
        return e;
    }
    Vector minimizer() const override { return xstar_; }
    double min_value() const override { return 0.0; }
    std::string name() const override { return "quadratic"; }

  private:
    Matrix a_;
    Vector xstar_;
};

// f(x) = tau * log sum_i exp(<b_i, x> / tau) over the sign-symmetric row
// set {rows} U {-rows}. The symmetry puts the minimizer exactly at the
// origin with value tau * log(2 * #rows); tau = 2 sigma_max(rows)^2 makes
// the analytic smoothness bound equal to 1.
class LogSumExpOracle final : public Oracle {
  public:
    LogSumExpOracle(Matrix rows, double tau) : rows_(std::move(rows)), tau_(tau) {}

    int dimension() const override { return static_cast<int>(rows_.cols()); }
    double smoothness() const override { return 1.0; }
    Evaluation eval(const Vector& x) const override {
        const Vector z = rows_ * x / tau_;
        const int m = static_cast<int>(z.size());
        double zmax = 0.0;
        for (int i = 0; i < m; ++i) zmax = std::max(zmax, std::abs(z(i)));
        double total = 0.0;
        Vector weights(2 * m);
        for (int i = 0; i < m; ++i) {
            weights(i) = std::exp(z(i) - zmax);
            weights(m + i) = std::exp(-z(i) - zmax);
            total += weights(i) + weights(m + i);
        }
        Evaluation e;
        e.value = tau_ * (zmax + std::log(total));
        e.gradient = Vector::Zero(dimension());
        for (int i = 0; i < m; ++i) {
            e.gradient += ((weights(i) - weights(m + i)) / total) * rows_.row(i).transpose();
        }
        return e;
    }
    Vector minimizer() const override { return Vector::Zero(dimension()); }
    double min_value() const override {
        return tau_ * std::log(2.0 * static_cast<double>(rows_.rows()));
    }
    std::string name() const override { return "logsumexp"; }

  private:
    Matrix rows_;
    double tau_;
};

// f(x) = huber_delta(||d .* (x - center)||) with diagonal scales in (0, 1]
// whose largest entry is 1; the gradient is then exactly 1-Lipschitz and
// the minimum value 0 is attained at the center.
class HuberOracle final : public Oracle {
  public:
    HuberOracle(Vector scales, Vector center, double delta)
        : scales_(std::move(scales)), center_(std::move(center)), delta_(delta) {}

    int dimension() const override { return static_cast<int>(center_.size()); }
    double smoothness() const override { return 1.0; }
    Evaluation eval(const Vector& x) const override {
        const Vector y = scales_.cwiseProduct(x - center_);
        const double r = y.norm();
        Evaluation e;
        if (r <= delta_) {
            e.value = 0.5 * r * r;
            e.gradient = scales_.cwiseProduct(y);
        } else {
            e.value = delta_ * r - 0.5 * delta_ * delta_;
            e.gradient = scales_.cwiseProduct(y) * (delta_ / r);
        }
        return e;
    }
    Vector minimizer() const override { return center_; }
    double min_value() const override { return 0.0; }
    std::string name() const override { return "huber"; }

  private:
    Vector scales_;
    Vector center_;
    double delta_;
};

class PlantedNonconvexOracle final : public Oracle {
  public:
    explicit PlantedNonconvexOracle(int dim) : dim_(dim) {}

    int dimension() const override { return dim_; }
    double smoothness() const override { return 1.0; }
    Evaluation eval(const Vector& x) const override {
        Evaluation e;
        e.value = -0.5 * x.squaredNorm();
        e.gradient = -x;
        return e;
    }
    Vector minimizer() const override { return Vector::Zero(dim_); }
    double min_value() const override { return 0.0; }
    std::string name() const override { return "planted-nonconvex"; }

  private:
    int dim_;
};

void require_dim(int dim) {
    if (dim < 1) throw std::invalid_argument("oracle dimension must be >= 1");
}

}  // namespace

std::unique_ptr<Oracle> make_quadratic(const Matrix& a, const Vector& xstar) {
    return std::make_unique<QuadraticOracle>(a, xstar);
}

std::unique_ptr<Oracle> make_planted_nonconvex(int dim) {
    require_dim(dim);
    return std::make_unique<PlantedNonconvexOracle>(dim);
}

std::unique_ptr<Oracle> make_oracle(const std::string& fn, int dim, std::uint64_t seed) {
    require_dim(dim);
    GaussianSource rng(seed);
    if (fn == "quadratic") {
        // Random rotation times a spectrum in [0, 1] with top eigenvalue
        // pinned to 1, so the smoothness constant is exactly 1.
        const Matrix g = rng.matrix(dim, dim);
        const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
        Vector spectrum(dim);
        spectrum(0) = 1.0;
        for (int i = 1; i < dim; ++i) {
            const double u = static_cast<double>(rng.engine()() >> 11) * 0x1.0p-53;
            spectrum(i) = u;
        }
        const Matrix a = q * spectrum.asDiagonal() * q.transpose();
        const Vector xstar = rng.vector(dim);
        return std::make_unique<QuadraticOracle>(a, xstar);
    }
    if (fn == "logsumexp") {
        const int m = std::max(3, dim);
        const Matrix rows = rng.matrix(m, dim);
        const double sigma_max = rows.jacobiSvd().singularValues()(0);
        return std::make_unique<LogSumExpOracle>(rows, 2.0 * sigma_max * sigma_max);
    }
    if (fn == "huber") {
        Vector scales(dim);
        scales(0) = 1.0;
        for (int i = 1; i < dim; ++i) {
            const double u = static_cast<double>(rng.engine()() >> 11) * 0x1.0p-53;
            scales(i) = 0.25 + 0.75 * u;  // keep scales in (0, 1]
        }
        const Vector center = rng.vector(dim);
        return std::make_unique<HuberOracle>(scales, center, 1.0);
    }
    throw std::invalid_argument("unknown objective: " + fn);
}

namespace {

void record(const Oracle& oracle, const Vector& x, Trajectory& traj) {
    if (!x.allFinite()) throw NonFinite("iterate is not finite at step " +
                                        std::to_string(traj.points.size()));
    Evaluation e = oracle.eval(x);
    if (!std::isfinite(e.value) || !e.gradient.allFinite()) {
        throw NonFinite("objective evaluation is not finite at step " +
                        std::to_string(traj.points.size()));
    }
    traj.points.push_back(x);
    traj.gradients.push_back(std::move(e.gradient));
    traj.values.push_back(e.value);
}

}  // namespace

Trajectory run_gd(const Oracle& oracle, const Vector& x0, const std::vector<double>& sched) {
    if (sched.empty()) throw std::invalid_argument("run_gd: schedule must be nonempty");
    if (x0.size() != oracle.dimension()) {
        throw std::invalid_argument("run_gd: starting point has wrong dimension");
    }
    for (double a : sched) {
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw std::invalid_argument("run_gd: stepsizes must be positive and finite");
        }
    }
    Trajectory traj;
    traj.smoothness = oracle.smoothness();
    traj.schedule_name = "custom";
    record(oracle, x0, traj);
    for (double a : sched) {
        const Vector next =
            traj.points.back() - (a / traj.smoothness) * traj.gradients.back();
        record(oracle, next, traj);
        traj.steps_used.push_back(a);
    }
    return traj;
}

Trajectory run_constant(const Oracle& oracle, const Vector& x0, double alpha_bar, int n) {
    if (!(alpha_bar > 0.0) || !(alpha_bar < 2.0)) {
        throw std::invalid_argument("run_constant: stepsize must lie in (0, 2)");
    }
    if (n < 1) throw std::invalid_argument("run_constant: need at least one step");
    Trajectory traj = run_gd(oracle, x0, std::vector<double>(n, alpha_bar));
    traj.schedule_name = "constant";
    return traj;
}

Trajectory run_nesterov(const Oracle& oracle, const Vector& x0, int n) {
    if (n < 1) throw std::invalid_argument("run_nesterov: need at least one step");
    if (x0.size() != oracle.dimension()) {
        throw std::invalid_argument("run_nesterov: starting point has wrong dimension");
    }
    const double m = oracle.smoothness();
    Trajectory traj;
    traj.smoothness = m;
    traj.schedule_name = "nesterov";
    record(oracle, x0, traj);
    Vector y = x0;
    Vector x_prev = x0;
    double tau = 1.0;
    for (int t = 0; t < n; ++t) {
        Evaluation at_y = oracle.eval(y);
        if (!std::isfinite(at_y.value) || !at_y.gradient.allFinite()) {
            throw NonFinite("objective evaluation is not finite at extrapolated point");
        }
        const Vector x_next = y - at_y.gradient / m;
        const double tau_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tau * tau));
        y = x_next + ((tau - 1.0) / tau_next) * (x_next - x_prev);
        x_prev = x_next;
        record(oracle, x_next, traj);
        traj.steps_used.push_back(1.0);
        tau = tau_next;
    }
    return traj;
}

AuditResult cocoercivity_audit(const Trajectory& traj, const Vector& xstar, double fstar) {
    const int n = traj.horizon();
    const double m = traj.smoothness;
    // Normalize to unit smoothness: same points, values and gradients
    // divided by M (steps already absorb M inside run_gd).
    std::vector<const Vector*> xs;
    std::vector<Vector> gs;
    std::vector<double> fs;
    std::vector<std::string> labels;
    for (int t = 0; t <= n; ++t) {
        xs.push_back(&traj.points[t]);
        gs.push_back(traj.gradients[t] / m);
        fs.push_back(traj.values[t] / m);
        labels.push_back(std::to_string(t));
    }
    xs.push_back(&xstar);
    gs.push_back(Vector::Zero(xstar.size()));
    fs.push_back(fstar / m);
    labels.push_back("*");

    AuditResult result;
    result.scale = 1.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        result.scale = std::max({result.scale, xs[i]->squaredNorm(), gs[i].squaredNorm(),
                                 std::abs(fs[i])});
    }
    bool first = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (i == j) continue;
            const double q = 2.0 * (fs[i] - fs[j]) + 2.0 * gs[j].dot(*xs[j] - *xs[i]) -
                             (gs[j] - gs[i]).squaredNorm();
            if (first || q < result.min_q) {
                first = false;
                result.min_q = q;
                result.argmin_i = labels[i];
                result.argmin_j = labels[j];
            }
        }
    }
    return result;
}

BoundCheck bound_check(const Trajectory& traj, const Vector& xstar, double fstar, int k) {
    if (k < 0) throw std::invalid_argument("bound_check: level must be >= 0");
    const long horizon = (1L << k) - 1;
    if (traj.horizon() != horizon) {
        throw std::invalid_argument("bound_check: trajectory horizon " +
                                    std::to_string(traj.horizon()) +
                                    " does not match level " + std::to_string(k));
    }
    BoundCheck b;
    b.lhs = traj.values.back() - fstar;
    const double rk = rate(k, 128).r.midpoint_double();
    b.rhs = rk * traj.smoothness * (traj.points.front() - xstar).squaredNorm();
    b.pass = b.lhs <= b.rhs * (1.0 + 1e-9);
    return b;
}

}  // namespace silver
