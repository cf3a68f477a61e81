#pragma once

// Compactly supported test functions with analytic jets.
//
//   bump             u = eta(d) m(z, t)
//   extremal_cutoff  u = |lambda|^a g_eps(lambda) eta(d),  lambda = t/|z|^2
//
// eta is a smooth plateau in the gauge value: 1 on [r1, R1], 0 outside
// (r2, R2). The modulation m = c0 + sum_k a_k z_k/rho + sum_j b_j t_j/rho^2
// is homogeneous of degree 0 in the Koranyi gauge rho, so the support stays
// inside the annulus.

#include <string>

#include "carnot/group.hpp"
#include "carnot/norms.hpp"
#include "carnot/numerics.hpp"

namespace carnot {

struct Plateau {
  double r2 = 0.25;
  double r1 = 0.5;
  double R1 = 1.5;
  double R2 = 2.0;

  double value(double r) const;
  double derivative(double r) const;
};

// C-infinity cut-off in lambda: 0 on (-inf, eps] and [1/eps, inf), 1 on
// [2 eps, 1/(2 eps)].
struct LambdaCutoff {
  double eps = 1e-2;

  double value(double lam) const;
  double derivative(double lam) const;
};

struct Modulation {
  double c0 = 1.0;
  Eigen::VectorXd a;  // coefficients of z_k/rho (size 2n or empty)
  Eigen::VectorXd b;  // coefficients of t_j/rho^2 (size h or empty)
};

struct FieldJet {
  double value = 0.0;
  HVector hgrad;
  VVector dt;
};

class TestFunction {
 public:
  enum class Kind { bump, extremal_cutoff };

  static TestFunction bump(const NormModel& d, Plateau eta = {}, Modulation m = {});
  // Exponent a defaults to (Q - 2)/(2p).
  static TestFunction extremal_cutoff(const NormModel& d, double p, double eps,
                                      Plateau eta = {});

  Kind kind() const { return kind_; }
  const NormModel& norm() const { return norm_; }
  const Plateau& plateau() const { return eta_; }
  const LambdaCutoff& cutoff() const { return cutoff_; }
  double exponent() const { return exponent_; }

  double value(const Point& x) const;
  // Value, horizontal gradient and vertical derivatives; zero outside the
  // support. `scheme` selects how the gauge's own derivatives are taken.
  FieldJet jet(const Point& x, DiffScheme scheme = DiffScheme::analytic()) const;
  // Same, reusing an already evaluated gauge jet at x.
  FieldJet jet_from_norm(const Point& x, const NormJet& dj) const;

  ScalarField as_scalar_field() const;
  std::string describe() const;

 private:
  TestFunction(Kind kind, const NormModel& d) : kind_(kind), norm_(d) {}

  Kind kind_;
  NormModel norm_;
  Plateau eta_;
  Modulation mod_;
  double exponent_ = 0.0;
  LambdaCutoff cutoff_;
};

// Seeded random bump: plateau radii jittered inside [0.25, 2] and a random
// modulation that keeps m >= 1/2.
TestFunction random_bump(const NormModel& d, SplitMix64& rng);

}  // namespace carnot
