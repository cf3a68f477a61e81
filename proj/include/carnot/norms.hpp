#pragma once

// Homogeneous gauges on step-two groups: Koranyi, the generalized Koranyi
// gauge built on the symplectic norm, the Carnot-Caratheodory distance on
// H^n, and the Balogh-Tyson gauge on the (1/2, 1) group.

#include <cmath>
#include <cstdint>

#include "carnot/group.hpp"
#include "carnot/numerics.hpp"

namespace carnot {

// Stable trigonometric ratios used by the CC parametrization.
double one_minus_cos_over_sq(double nu);  // (1 - cos nu) / nu^2
double nu_minus_sin(double nu);           // nu - sin nu without cancellation
double nu_minus_sin_over_sq(double nu);   // (nu - sin nu) / nu^2
// mu(nu) = (nu - sin nu) / (1 - cos nu): odd, increasing on (-2pi, 2pi).
double cc_mu(double nu);
double cc_mu_derivative(double nu);

template <typename Scalar>
Scalar koranyi_value(const PointT<Scalar>& x) {
  using std::sqrt;
  const Scalar z2 = x.z.squaredNorm();
  return sqrt(sqrt(z2 * z2 + x.t.squaredNorm()));
}

// |z|_B = sqrt(sum_i lambda_i / 4 * (z_{2i-1}^2 + z_{2i}^2)).
template <typename Scalar>
Scalar symplectic_norm_squared(const StepTwoGroup& g, const HorizontalT<Scalar>& z) {
  Scalar s(0);
  for (int i = 0; i < g.blocks(); ++i)
    s += Scalar(0.25 * g.couplings()(0, i)) *
         (z[2 * i] * z[2 * i] + z[2 * i + 1] * z[2 * i + 1]);
  return s;
}

template <typename Scalar>
Scalar symplectic_norm(const StepTwoGroup& g, const HorizontalT<Scalar>& z) {
  using std::sqrt;
  return sqrt(symplectic_norm_squared<Scalar>(g, z));
}

template <typename Scalar>
Scalar koranyi_B_value(const StepTwoGroup& g, const PointT<Scalar>& x) {
  using std::sqrt;
  if (g.vertical_dim() != 1)
    throw std::invalid_argument("koranyi_B: needs one vertical direction");
  const Scalar s = symplectic_norm_squared<Scalar>(g, x.z);
  return sqrt(sqrt(s * s + x.t[0] * x.t[0]));
}

// Printed closed form on R^4 x R for lambda = (1/2, 1).
template <typename Scalar>
Scalar balogh_tyson_value(const PointT<Scalar>& x) {
  using std::hypot;
  using std::pow;
  const Scalar q = (x.z[0] * x.z[0] + x.z[1] * x.z[1]) / Scalar(2);
  const Scalar w = q + x.z[2] * x.z[2] + x.z[3] * x.z[3];
  const Scalar s = hypot(w, x.t[0]);
  if (s == Scalar(0)) return Scalar(0);
  return pow(s, Scalar(0.25)) * pow(q + s, Scalar(0.375)) /
         pow(w + s, Scalar(0.125));
}

struct HGradDt {
  HVector hgrad;
  VVector dt;
};

HGradDt koranyi_derivatives(const StepTwoGroup& g, const Point& x);
HVector koranyi_hgrad(const StepTwoGroup& g, const Point& x);
HGradDt koranyi_B_derivatives(const StepTwoGroup& g, const Point& x);

// Polar coordinates adapted to the CC distance on H^n.
struct CCPolar {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  double nu = 0.0;
  double r = 0.0;
};

Point cc_from_polar(const CCPolar& p);
CCPolar cc_invert(const Point& x);
double cc_value(const Point& x);
HVector cc_hgrad(const Point& x);
double cc_dt(const Point& x);
// Gradient data from an already inverted point.
HVector cc_hgrad_from_polar(const CCPolar& p);

enum class NormKind { koranyi, koranyi_B, cc, balogh_tyson };

const char* to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& name);

class NormModel {
 public:
  // Validates that the gauge is defined on the group.
  NormModel(NormKind kind, StepTwoGroup group);

  NormKind kind() const { return kind_; }
  const StepTwoGroup& group() const { return group_; }
  bool has_analytic_gradient() const { return kind_ != NormKind::balogh_tyson; }

 private:
  NormKind kind_;
  StepTwoGroup group_;
};

struct NormJet {
  double value = 0.0;
  HVector hgrad;
  VVector dt;
};

double norm_value(const NormModel& d, const Point& x);

// Value, horizontal gradient and vertical derivatives. Analytic evaluators
// are used when the gauge has them unless `scheme` forces finite
// differences. Throws std::domain_error on the singular set (the origin, or
// the center for the CC distance).
NormJet norm_jet(const NormModel& d, const Point& x,
                 DiffScheme scheme = DiffScheme::analytic());

ScalarField as_scalar_field(const NormModel& d);

// <z, B^{-1} grad_z d>; vanishes for gauges invariant under the block
// rotations.
double rotation_defect(const NormModel& d, const Point& x);

struct RatioRange {
  double min = 0.0;
  double max = 0.0;
};

// Empirical range of num/den on the Koranyi unit sphere.
RatioRange norm_ratio_range(const NormModel& num, const NormModel& den,
                            int samples = 20000, std::uint64_t seed = 7);

// Random point with the given Koranyi radius, Gaussian direction.
Point random_koranyi_sphere_point(const StepTwoGroup& g, SplitMix64& rng,
                                  double radius = 1.0);

}  // namespace carnot
