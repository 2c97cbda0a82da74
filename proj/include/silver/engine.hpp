#pragma once

#include <silver/schedule.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace silver {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Raised when an objective value, gradient, or iterate stops being finite.
class NonFinite : public std::runtime_error {
  public:
    explicit NonFinite(const std::string& what) : std::runtime_error(what) {}
};

struct Evaluation {
    double value = 0.0;
    Vector gradient;
};

// A smooth convex objective with an M-Lipschitz gradient and a known
// minimizer. All built-in oracles are constructed so that the minimizer and
// minimum value are analytic (no reference solve needed).
class Oracle {
  public:
    virtual ~Oracle() = default;
    virtual int dimension() const = 0;
    virtual double smoothness() const = 0;
    virtual Evaluation eval(const Vector& x) const = 0;
    virtual Vector minimizer() const = 0;
    virtual double min_value() const = 0;
    virtual std::string name() const = 0;
};

// Factory for the built-in objectives: "quadratic" (random rotated PSD
// quadratic with top curvature 1), "logsumexp" (smoothed max over a
// sign-symmetric set of random linear forms, temperature chosen so the
// analytic smoothness bound is 1), "huber" (Huber loss of a scaled distance
// to a random center). All are 1-smooth and convex with known minimizers.
std::unique_ptr<Oracle> make_oracle(const std::string& fn, int dim, std::uint64_t seed);

// Deterministic quadratic (1/2)(x - xstar)^T a (x - xstar) for tests.
std::unique_ptr<Oracle> make_quadratic(const Matrix& a, const Vector& xstar);

// Test-only concave objective -||x||^2/2 posing as convex; the
// co-coercivity audit must flag trajectories generated from it.
std::unique_ptr<Oracle> make_planted_nonconvex(int dim);

struct Trajectory {
    std::vector<Vector> points;      // x_0 .. x_n
    std::vector<Vector> gradients;   // g_0 .. g_n
    std::vector<double> values;      // f_0 .. f_n
    std::vector<double> steps_used;  // normalized steps alpha_0 .. alpha_{n-1}
    std::string schedule_name;
    double smoothness = 1.0;

    int horizon() const { return static_cast<int>(points.size()) - 1; }
};

// Plain gradient descent x_{t+1} = x_t - (alpha_t / M) g_t, recording every
// iterate, gradient, and value.
Trajectory run_gd(const Oracle& oracle, const Vector& x0, const std::vector<double>& sched);

// Constant schedule alpha_t = alpha_bar for n steps; alpha_bar must lie in
// the open interval (0, 2).
Trajectory run_constant(const Oracle& oracle, const Vector& x0, double alpha_bar, int n);

// Momentum-extrapolation accelerated baseline in its standard smooth-convex
// form; records the main iterate sequence x_0 .. x_n.
Trajectory run_nesterov(const Oracle& oracle, const Vector& x0, int n);

struct AuditResult {
    double min_q = 0.0;
    std::string argmin_i, argmin_j;
    double scale = 1.0;  // normalization for tolerances, >= 1
};

// Evaluates the co-coercivity quantity
//   Q_ij = 2(f_i - f_j) + 2<g_j, x_j - x_i> - ||g_j - g_i||^2
// over all ordered pairs of trajectory indices plus the minimizer row
// (x = xstar, g = 0, f = fstar), after normalizing the trajectory to unit
// smoothness. Returns the minimum and where it occurs. Non-negative (up to
// roundoff) exactly when the data is consistent with some 1-smooth convex
// function.
AuditResult cocoercivity_audit(const Trajectory& traj, const Vector& xstar, double fstar);

struct BoundCheck {
    double lhs = 0.0;   // f_n - fstar
    double rhs = 0.0;   // r_k * M * ||x0 - xstar||^2
    bool pass = false;  // lhs <= rhs * (1 + 1e-9)
};

// Checks the level-k convergence guarantee on a trajectory run with the
// level-k schedule (horizon 2^k - 1).
BoundCheck bound_check(const Trajectory& traj, const Vector& xstar, double fstar, int k);

// Standard normal samples via Box-Muller over uniforms built from the top
// 53 bits of a 64-bit engine; deterministic given the seed.
class GaussianSource {
  public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}
    double next();
    Vector vector(int dim);
    Matrix matrix(int rows, int cols);
    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace silver
