#pragma once

// Scalar numerical building blocks shared by the norm, field and quadrature
// modules: 1-D rules, bracketing solvers, bounded maximizers, low-discrepancy
// sequences and a portable seeded generator.

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace carnot {

struct NodesWeights {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Gauss-Legendre rule with n nodes mapped to [a, b].
NodesWeights gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Composite Gauss-Legendre: `panels` equal panels of `per_panel` nodes each.
NodesWeights composite_gauss_legendre(int panels, int per_panel, double a,
                                      double b);

// Periodic trapezoid rule on [0, 2*pi).
NodesWeights periodic_trapezoid(int n);

struct Extremum {
  double arg = 0.0;
  double value = 0.0;
};

// Golden-section search for the maximum of a unimodal f on [a, b]. The
// endpoints are compared against the interior optimum, so monotone
// functions return the better endpoint.
Extremum golden_section_maximize(const std::function<double(double)>& f,
                                 double a, double b, double tol = 1e-12,
                                 int max_iter = 200);

// Evaluate f at `nodes` equispaced points of [a, b] (inclusive) and return
// the best node. Ties keep the node of smallest |arg|, then smallest arg.
Extremum dense_scan_maximize(const std::function<double(double)>& f, double a,
                             double b, int nodes);

// Solve f(x) = target for f increasing on [lo, hi] by bisection until the
// bracket is narrower than `tol`. Throws std::runtime_error when the target
// is not bracketed.
double bisect_increasing(const std::function<double(double)>& f, double target,
                         double lo, double hi, double tol,
                         int max_iter = 400);

// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b].
struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};
AdaptiveResult adaptive_gauss_kronrod(const std::function<double(double)>& f,
                                      double a, double b, double abs_tol,
                                      double rel_tol, int max_intervals = 2000);

// Radical-inverse Halton point of index + 1 (the all-zero point is skipped);
// coordinates in (0, 1).
Eigen::VectorXd halton(std::uint64_t index, int dim);

// SplitMix64: a fully specified generator, so seeded runs are bit-identical
// across standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform double in [0, 1) from the top 53 bits.
  double uniform();
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  // Standard normal via Box-Muller.
  double normal();

 private:
  std::uint64_t state_;
};

// C-infinity step: 0 for x <= 0, 1 for x >= 1, psi(x)/(psi(x)+psi(1-x)) with
// psi(x) = exp(-1/x) in between.
double smooth_step(double x);
double smooth_step_derivative(double x);

// Global maximization over a box by quasi-random multistart: f is evaluated
// at `samples` Halton points of [lo, hi], then the `refine` best points are
// polished by sweeps of golden-section search along each coordinate with a
// shrinking window. Ties keep the lexicographically smallest argument.
struct MultistartResult {
  Eigen::VectorXd arg;
  double value = 0.0;
  long evaluations = 0;
};
MultistartResult multistart_maximize(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int samples,
    int refine = 8, int sweeps = 4);

// Pairwise (cascade) summation, used for deterministic reductions.
double pairwise_sum(const double* values, std::size_t n);

}  // namespace carnot
