#include "carnot/zfield.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/LU>

#include "carnot/numerics.hpp"

namespace carnot {

const char* to_string(ZVariant v) {
  switch (v) {
    case ZVariant::single: return "single";
    case ZVariant::product: return "product";
    case ZVariant::general: return "general";
  }
  return "unknown";
}

ZVariant zvariant_from_string(const std::string& name) {
  if (name == "single") return ZVariant::single;
  if (name == "product") return ZVariant::product;
  if (name == "general") return ZVariant::general;
  throw std::invalid_argument("unknown Z variant '" + name + "'");
}

const char* to_string(SupMethod m) {
  switch (m) {
    case SupMethod::closed_form: return "closed_form";
    case SupMethod::scan_golden: return "scan_golden";
    case SupMethod::multistart: return "multistart";
  }
  return "unknown";
}

namespace {

bool is_product_structure(const StepTwoGroup& g) {
  const auto& c = g.couplings();
  for (int i = 0; i < g.blocks(); ++i) {
    int coupled = 0;
    for (int j = 0; j < g.vertical_dim(); ++j) coupled += c(j, i) != 0.0;
    if (coupled != 1) return false;
  }
  for (int j = 0; j < g.vertical_dim(); ++j)
    if (c.row(j).isZero()) return false;
  return true;
}

}  // namespace

ZVariant default_variant(const StepTwoGroup& g) {
  if (g.vertical_dim() == 1) return ZVariant::single;
  if (is_product_structure(g)) return ZVariant::product;
  return ZVariant::general;
}

ZFieldSpec make_zfield_spec(const NormModel& norm, double p, double theta,
                            std::optional<ZVariant> variant) {
  if (!(p >= 2.0) || !std::isfinite(p))
    throw std::invalid_argument("Z field: p must be >= 2");
  if (!std::isfinite(theta)) throw std::invalid_argument("Z field: theta must be finite");
  const ZVariant v = variant.value_or(default_variant(norm.group()));
  z_weights(norm.group(), v);  // validates the variant against the group
  return ZFieldSpec{norm, p, theta, v};
}

Eigen::MatrixXd z_weights(const StepTwoGroup& g, ZVariant variant) {
  const int n = g.blocks();
  const int h = g.vertical_dim();
  const auto& c = g.couplings();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, h);
  switch (variant) {
    case ZVariant::single:
      if (h != 1)
        throw std::invalid_argument("single variant needs one vertical direction");
      for (int i = 0; i < n; ++i) w(i, 0) = 1.0 / (n * c(0, i));
      break;
    case ZVariant::product: {
      if (!is_product_structure(g))
        throw std::invalid_argument(
            "product variant needs every block coupled to exactly one direction");
      for (int j = 0; j < h; ++j) {
        int members = 0;
        for (int i = 0; i < n; ++i) members += c(j, i) != 0.0;
        for (int i = 0; i < n; ++i)
          if (c(j, i) != 0.0) w(i, j) = 1.0 / (members * c(j, i));
      }
      break;
    }
    case ZVariant::general: {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(g.selection_matrix());
      if (!lu.isInvertible())
        throw std::invalid_argument("general variant: matrix A is not invertible");
      const Eigen::MatrixXd ainv = lu.inverse();
      const auto& sel = g.selected_blocks();
      for (int k = 0; k < h; ++k)
        for (int j = 0; j < h; ++j) w(sel[k], j) += ainv(j, k);
      break;
    }
  }
  return w;
}

HVector z_field_from_jet(const ZFieldSpec& spec, const Point& x,
                         const NormJet& jet) {
  const StepTwoGroup& g = spec.group();
  const double d = jet.value;
  if (!(d > 0.0)) throw std::domain_error("Z field: d must be positive");
  const Eigen::MatrixXd w = z_weights(g, spec.variant);
  const auto& c = g.couplings();
  const double ptheta = spec.p * spec.theta;
  HVector z = x.z / d;
  for (int i = 0; i < g.blocks(); ++i) {
    double ci = 0.0, tau = 0.0;
    for (int j = 0; j < g.vertical_dim(); ++j) {
      ci += w(i, j) * c(j, i);
      tau += w(i, j) * x.t[j];
    }
    const double s = 2.0 * ptheta * tau / (d * d);
    // nabla_i^perp d = (-X_{2i} d, X_{2i-1} d) on block i.
    z[2 * i] += ci * x.z[2 * i] / d + s * jet.hgrad[2 * i + 1];
    z[2 * i + 1] += ci * x.z[2 * i + 1] / d - s * jet.hgrad[2 * i];
  }
  return z;
}

HVector z_field_at(const ZFieldSpec& spec, const Point& x, DiffScheme scheme) {
  return z_field_from_jet(spec, x, norm_jet(spec.norm, x, scheme));
}

namespace {

void require_q(double Q) {
  if (!(Q > 2.0)) throw std::invalid_argument("profile needs Q > 2");
}

}  // namespace

double z_profile_koranyi(double Q, double p, double theta, double lam) {
  require_q(Q);
  const double pt = p * theta;
  const double alpha = (Q / (Q - 2.0)) * (Q / (Q - 2.0));
  const double beta = pt * (pt - 2.0 * Q) / ((Q - 2.0) * (Q - 2.0));
  if (std::isinf(lam)) return 0.0;
  const double l2 = lam * lam;
  const double s = l2 / (1.0 + l2);
  return (alpha + beta * s) / std::sqrt(1.0 + l2);
}

double g_cc(double Q, double p, double theta, double nu) {
  require_q(Q);
  if (!(std::abs(nu) <= 2.0 * std::numbers::pi))
    throw std::invalid_argument("g_cc: nu outside [-2pi, 2pi]");
  const double pt = p * theta;
  const double f = one_minus_cos_over_sq(nu);  // (1 - cos nu)/nu^2
  const double gs = nu_minus_sin_over_sq(nu);  // (nu - sin nu)/nu^2
  const double a = Q / (Q - 2.0);
  const double b = 2.0 * pt / (Q - 2.0);
  return 2.0 * a * a * f + b * b * gs * gs -
         4.0 * pt * Q / ((Q - 2.0) * (Q - 2.0)) * gs * (nu * f);
}

double b_norm_squared(const StepTwoGroup& g, const HVector& v) {
  return symplectic_norm_squared<double>(g, v);
}

ProfileMax koranyi_profile_max(double Q, double p, double theta) {
  require_q(Q);
  const double pt = p * theta;
  const double alpha = (Q / (Q - 2.0)) * (Q / (Q - 2.0));
  const double beta = pt * (pt - 2.0 * Q) / ((Q - 2.0) * (Q - 2.0));
  // d/ds [sqrt(1-s)(alpha + beta s)] vanishes at s* = (2 beta - alpha)/(3 beta),
  // a maximum only when beta > 0.
  if (beta > 0.0 && 2.0 * beta > alpha) {
    const double s = (2.0 * beta - alpha) / (3.0 * beta);
    return {std::sqrt(1.0 - s) * (alpha + beta * s), s};
  }
  return {alpha, 0.0};
}

namespace {

double profile_in_s(double Q, double p, double theta, double s) {
  const double pt = p * theta;
  const double alpha = (Q / (Q - 2.0)) * (Q / (Q - 2.0));
  const double beta = pt * (pt - 2.0 * Q) / ((Q - 2.0) * (Q - 2.0));
  return std::sqrt(1.0 - s) * (alpha + beta * s);
}

SupResult koranyi_type_sup(const ZFieldSpec& spec) {
  const double Q = spec.Q();
  const ProfileMax m = koranyi_profile_max(Q, spec.p, spec.theta);
  SupResult out;
  out.method = SupMethod::closed_form;
  out.arg_name = "lambda";
  out.arg = std::sqrt(m.s / (1.0 - m.s));
  const Extremum e = golden_section_maximize(
      [&](double s) { return profile_in_s(Q, spec.p, spec.theta, s); }, 0.0,
      1.0 - 1e-15, 1e-13);
  out.numeric_check = e.value;
  out.samples = 1;
  double scale = 1.0;
  if (spec.norm.kind() == NormKind::koranyi_B)
    scale = std::sqrt(4.0 / lambda_min(spec.group()));
  out.sup_value = scale * std::sqrt(m.value);
  return out;
}

SupResult cc_sup(const ZFieldSpec& spec, const SupOptions& opt) {
  const double Q = spec.Q();
  const double two_pi = 2.0 * std::numbers::pi;
  auto g = [&](double nu) { return g_cc(Q, spec.p, spec.theta, nu); };
  const Extremum coarse = dense_scan_maximize(g, -two_pi, two_pi, opt.scan_nodes);
  const double hstep = 2.0 * two_pi / (opt.scan_nodes - 1);
  const Extremum fine =
      golden_section_maximize(g, std::max(-two_pi, coarse.arg - hstep),
                              std::min(two_pi, coarse.arg + hstep), 1e-12);
  const Extremum best = fine.value > coarse.value ? fine : coarse;
  SupResult out;
  out.method = SupMethod::scan_golden;
  out.arg_name = "nu";
  out.arg = best.arg;
  out.sup_value = std::sqrt(best.value);
  out.samples = opt.scan_nodes;
  out.numeric_check = std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace

SupResult sup_z_norm(const ZFieldSpec& spec, const SupOptions& opt) {
  const StepTwoGroup& g = spec.group();
  const NormKind kind = spec.norm.kind();
  if (spec.variant == ZVariant::single &&
      ((kind == NormKind::koranyi && g.is_heisenberg()) ||
       kind == NormKind::koranyi_B))
    return koranyi_type_sup(spec);
  if (kind == NormKind::cc && spec.variant == ZVariant::single)
    return cc_sup(spec, opt);

  // Z is invariant under dilations, so search a box around the unit sphere
  // and report the maximizer rescaled to d = 1.
  const int dim = g.horizontal_dim() + g.vertical_dim();
  const DiffScheme scheme = DiffScheme::analytic();
  auto unpack = [&](const Eigen::VectorXd& v) {
    Point x{v.head(g.horizontal_dim()), v.tail(g.vertical_dim())};
    return x;
  };
  auto objective = [&](const Eigen::VectorXd& v) {
    const Point x = unpack(v);
    try {
      return z_field_at(spec, x, scheme).squaredNorm();
    } catch (const std::domain_error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(dim, -1.0);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(dim, 1.0);
  const MultistartResult r = multistart_maximize(objective, lo, hi, opt.samples, opt.refine);
  SupResult out;
  out.method = SupMethod::multistart;
  out.sup_value = std::sqrt(r.value);
  Point x = unpack(r.arg);
  const double d = norm_value(spec.norm, x);
  if (d > 0.0) x = dilate(1.0 / d, x);
  out.arg_point = x;
  out.arg_name = "point";
  out.samples = r.evaluations;
  out.numeric_check = std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace carnot
