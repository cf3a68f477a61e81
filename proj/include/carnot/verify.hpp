#pragma once

// Numerical checks of the Hardy machinery: integral identities, quotients
// against the bounds, the sharpness family and the counterexample search.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carnot/bounds.hpp"
#include "carnot/quadrature.hpp"
#include "carnot/test_function.hpp"
#include "carnot/zfield.hpp"

namespace carnot {

struct Report {
  std::string check;
  // Named computed values (each side of an identity, quotients, maxima...).
  std::vector<std::pair<std::string, double>> values;
  std::optional<double> bound;
  bool pass = false;
  double tolerance = 0.0;
  std::string tolerance_kind = "relative";
  // Quadrature or search diagnostics (error indicators, sample counts).
  std::vector<std::pair<std::string, double>> diagnostics;
  std::string note;

  double value(const std::string& name) const;
};

// Support-adapted quadrature for a test function: the Koranyi radius range
// covering {r2 < d < R2}, from the empirical ratio d/rho with a margin.
QuadratureSpec support_quadrature(const TestFunction& u, QuadratureSpec base = {});

// || w(f - g) ||^2 = ||f||_p^p + (p-1)||g||_p^p - p (|g|^{p-2} g, f) on the
// counting measure, with the weight integral computed by adaptive
// Gauss-Kronrod per sample. Tolerance 1e-14 at p = 2, 1e-10 otherwise.
Report check_w_identity(double p, const std::vector<double>& f,
                        const std::vector<double>& g);
double w_weight_squared(double p, double f, double g);

// I1 = int |u|^{p-2} u <grad u, Z> / d^{p theta - 1}
// I2 = int |u|^{p-2} u (E u) / d^{p theta}
// I3 = -((Q - p theta)/p) int |u|^p / d^{p theta}
Report check_ibp_identity(const ZFieldSpec& spec, const TestFunction& u,
                          const QuadratureSpec& quad, double rel_tol = 2e-3,
                          double abs_tol = 1e-4);

// The same triple for several (p, theta) pairs in one quadrature pass.
std::vector<Report> check_ibp_identity_grid(
    const NormModel& d, const TestFunction& u,
    const std::vector<std::pair<double, double>>& p_theta,
    const QuadratureSpec& quad, double rel_tol = 2e-3, double abs_tol = 1e-4);

struct Quotients {
  double projected_numerator = 0.0;
  double full_numerator = 0.0;
  double denominator = 0.0;
  double projected = 0.0;
  double full = 0.0;
  Eigen::VectorXd errors;  // quadrature error indicators of the three integrals
};

// Both Hardy quotients of u: the pairing with Z_d and the full gradient.
Quotients hardy_quotients(const ZFieldSpec& spec, const TestFunction& u,
                          const QuadratureSpec& quad);
double hardy_quotient(const ZFieldSpec& spec, const TestFunction& u,
                      const QuadratureSpec& quad, bool projected);

struct SharpnessPoint {
  double eps = 0.0;
  double quotient = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double quad_error = 0.0;
};

struct SharpnessResult {
  std::vector<SharpnessPoint> points;
  double target = 0.0;          // |(Q - p theta)/p|^p
  double fit_C = 0.0;           // excess ~ C / log(1/eps)
  double fit_residual = 0.0;    // max relative residual of that fit
  double growth_slope = 0.0;    // denominator ~ slope log(1/eps) + intercept
  double growth_intercept = 0.0;
  bool decreasing = false;
  bool above_target = false;
  bool log_growth = false;
  Report report;
};

// Quadrature for the sharpness family: polar chart, lambda on a log window
// [eps, 1/eps] with panels narrow enough to resolve the cut-off ramps.
QuadratureSpec sharpness_quadrature(const NormModel& d, double eps,
                                    QuadratureSpec base = {});

// Requires <z, B^{-1} grad_z d> = 0 (std::invalid_argument otherwise).
SharpnessResult sharpness_sequence(const ZFieldSpec& spec,
                                   const std::vector<double>& eps_list,
                                   const QuadratureSpec& base = {});

// |<grad u, Z>/d^{theta-1} + ((Q - p theta)/p) u/d^theta| for
// u = |t/|z|^2|^{(Q-2)/(2p)}, gradients of u by central differences.
double extremal_residual(const ZFieldSpec& spec, const Point& x,
                         DiffScheme scheme = DiffScheme::fd());

struct ScanOptions {
  int samples = 100000;
  int refine = 8;
  double threshold = 1e-6;
};

// Search for B(z, t) = |Z(z,t)|^2 - |Z(z,0)|^2 > 0 on the (1/2, 1) group
// with the Balogh-Tyson gauge, or on H^2 with the Koranyi gauge when
// `isotropic_control` is set (that scan passes when max B <= threshold).
Report counterexample_scan(double p_theta = 2.0, bool isotropic_control = false,
                           const ScanOptions& opt = {});

struct ProductOptions {
  int samples = 100000;
  int refine = 8;
  bool identity = true;  // also run the integral identity by Monte Carlo
  long mc_samples = 10'000'000;
  std::uint64_t seed = 20240917;
};

// Sampled sup of |Z_rho|^2 on (H^n)^N with the product field, compared to
// ((n+1)/n)^2, plus the integral identity for one bump.
std::vector<Report> product_check(int n, int N, double p, double theta,
                                  const ProductOptions& opt = {});

// Weak forms of the divergence identities for V = t/d^{p theta+1} B^{-1} grad d
// and V = z/d^{p theta}: int <V, grad phi> = -int RHS phi.
std::vector<Report> check_divergence_identities(const NormModel& d, double p_theta,
                                                const TestFunction& phi,
                                                const QuadratureSpec& quad,
                                                double rel_tol = 2e-3);

// int (Eu) v + int u (Ev) + Q int u v = 0.
Report check_euler_adjoint(const TestFunction& u, const TestFunction& v,
                           const QuadratureSpec& quad, double rel_tol = 2e-3);

}  // namespace carnot
