#pragma once

// The horizontal field Z_d that replaces the Euler field in the Hardy
// integration by parts, and its supremum.
//
// All three variants share one formula. Pick weights W (n x h) with
// sum_i W_ij lambda_i^{(j')} = delta_jj', so that
//   d/dt_j = sum_i W_ij [X_{2i}, X_{2i-1}].
// Then
//   Z_d = z/d + sum_i c_i z^{(i)}/d - 2 p theta sum_i tau_i / d^2 nabla_i^perp d
// with c_i = sum_j W_ij lambda_i^{(j)} and tau_i = sum_j W_ij t_j.
//
//   single   W_i    = 1/(n lambda_i)
//   product  W_ij   = 1/(|S_j| lambda_i^{(j)}) for block i in factor j
//   general  W_{i_k j} = (A^{-1})_{jk}, zero on unselected blocks

#include <optional>
#include <string>

#include "carnot/group.hpp"
#include "carnot/norms.hpp"

namespace carnot {

enum class ZVariant { single, product, general };

const char* to_string(ZVariant v);
ZVariant zvariant_from_string(const std::string& name);

// The natural variant for a group: single for h = 1, product when every
// block couples to exactly one vertical direction, general otherwise.
ZVariant default_variant(const StepTwoGroup& g);

struct ZFieldSpec {
  NormModel norm;
  double p = 2.0;
  double theta = 1.0;
  ZVariant variant = ZVariant::single;

  const StepTwoGroup& group() const { return norm.group(); }
  double Q() const { return group().homogeneous_dimension(); }
};

// Validates p >= 2 and that the variant applies to the group.
ZFieldSpec make_zfield_spec(const NormModel& norm, double p, double theta,
                            std::optional<ZVariant> variant = std::nullopt);

Eigen::MatrixXd z_weights(const StepTwoGroup& g, ZVariant variant);

HVector z_field_from_jet(const ZFieldSpec& spec, const Point& x,
                         const NormJet& jet);
HVector z_field_at(const ZFieldSpec& spec, const Point& x,
                   DiffScheme scheme = DiffScheme::analytic());

// |Z_rho|^2 for the Koranyi gauge as a function of lambda = t/|z|^2.
double z_profile_koranyi(double Q, double p, double theta, double lam);

// |Z_{delta_cc}|^2 on H^n as a function of nu; even, g(0) = (Q/(Q-2))^2.
double g_cc(double Q, double p, double theta, double nu);

// Squared norm sum_i lambda_i/4 |v^{(i)}|^2 of a horizontal vector.
double b_norm_squared(const StepTwoGroup& g, const HVector& v);

enum class SupMethod { closed_form, scan_golden, multistart };
const char* to_string(SupMethod m);

struct SupResult {
  // Upper estimate of sup |Z_d| (not squared). For the generalized Koranyi
  // gauge this is sqrt(4/lambda_min) sup |Z|_B, the quantity the bound uses.
  double sup_value = 0.0;
  // Name and value of the profile parameter at the maximum ("s" / "lambda"
  // for Koranyi, "nu" for CC), or the maximizing point for sampled sups.
  std::string arg_name;
  double arg = 0.0;
  std::optional<Point> arg_point;
  SupMethod method = SupMethod::closed_form;
  long samples = 0;
  // Independent numeric confirmation of a closed-form sup (squared profile
  // maximum from golden-section or dense scan); NaN when not applicable.
  double numeric_check = 0.0;
};

struct SupOptions {
  int samples = 100000;
  int scan_nodes = 10001;
  int refine = 8;
};

SupResult sup_z_norm(const ZFieldSpec& spec, const SupOptions& opt = {});

// Closed-form maximum of sqrt(1 - s)(alpha + beta s) over s in [0, 1).
struct ProfileMax {
  double value = 0.0;
  double s = 0.0;
};
ProfileMax koranyi_profile_max(double Q, double p, double theta);

}  // namespace carnot
