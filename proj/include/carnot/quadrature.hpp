#pragma once

// Integration over step-two groups.
//
// The polar chart uses Phi(omega, lambda) = (omega (1+lambda^2)^{-1/4},
// lambda |omega|^2 (1+lambda^2)^{-1/2}), under which
//   dz dt = |omega|^2 (1+lambda^2)^{-(n+1)/2} d omega d lambda.
// With omega = rho sigma and lambda = tan(beta) the weight becomes
// rho^{2n+1} cos(beta)^{n-1}, and the chart is
//   z = rho sqrt(cos beta) sigma,  t = rho^2 sin beta.

#include <cstdint>
#include <functional>
#include <string>

#include "carnot/group.hpp"

namespace carnot {

enum class QuadMethod { tensor_grid, monte_carlo };
enum class Chart { phi_polar, ambient };
// How the chart parameter lambda is discretized in phi_polar.
//   atan        lambda = tan(beta), beta in (-pi/2, pi/2)
//   log_window  lambda = exp(s) on [lambda_lo, lambda_hi] only (lambda > 0),
//               for integrands supported there
enum class LambdaMap { atan, log_window };

const char* to_string(QuadMethod m);
const char* to_string(Chart c);
QuadMethod quad_method_from_string(const std::string& name);

struct QuadratureSpec {
  QuadMethod method = QuadMethod::tensor_grid;
  Chart chart = Chart::phi_polar;

  // Tensor grid sizes: Koranyi radius, sphere angle, lambda. The ambient
  // chart uses `radial_nodes` per axis.
  int radial_nodes = 200;
  int angle_nodes = 200;
  int lambda_nodes = 200;
  // Gauss-Legendre nodes per panel of the composite rules.
  int per_panel = 8;

  // Integrand support: Koranyi radius within [r_min, r_max]. The ambient box
  // is |z_k| <= r_max, |t_j| <= r_max^2.
  double r_min = 0.25;
  double r_max = 2.0;

  LambdaMap lambda_map = LambdaMap::atan;
  double lambda_lo = 1e-2;
  double lambda_hi = 1e2;

  // Monte Carlo: `samples` points split over `shifts` independent
  // randomizations (randomly shifted Halton points when quasi_random).
  long samples = 10'000'000;
  int shifts = 8;
  bool quasi_random = true;
  std::uint64_t seed = 20240917;

  // Tensor grids: also integrate on a half-size grid and report the
  // difference as the error indicator.
  bool error_estimate = true;
};

struct QuadResult {
  Eigen::VectorXd values;
  // Grid-refinement difference or Monte Carlo standard error, per value.
  Eigen::VectorXd errors;
  long evaluations = 0;
  std::string method;
};

// Vector-valued integrand: writes `count` values for the point.
using Integrand = std::function<void(const Point&, double* out)>;

// Throws std::runtime_error on a non-finite integrand sample.
QuadResult integrate_many(const StepTwoGroup& g, const Integrand& f, int count,
                          const QuadratureSpec& q);

QuadResult integrate(const StepTwoGroup& g,
                     const std::function<double(const Point&)>& f,
                     const QuadratureSpec& q);

// Chart map and weight (for tests and diagnostics).
Point phi_chart(const HVector& omega, double lambda);

}  // namespace carnot
