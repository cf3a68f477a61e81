#include "carnot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "carnot/numerics.hpp"

namespace carnot {

double Report::value(const std::string& name) const {
  for (const auto& [k, v] : values)
    if (k == name) return v;
  throw std::out_of_range("report has no value '" + name + "'");
}

namespace {

double rel_diff(double a, double b, double scale) {
  return std::abs(a - b) / std::max(std::abs(scale), std::numeric_limits<double>::min());
}

// Jets of the test function and of the gauge at x; false outside supp u.
bool eval_jets(const NormModel& d, const TestFunction& u, const Point& x,
               NormJet& dj, FieldJet& uj) {
  uj = u.jet(x);
  if (uj.value == 0.0 && uj.hgrad.squaredNorm() == 0.0 && uj.dt.squaredNorm() == 0.0)
    return false;
  dj = norm_jet(d, x);
  return true;
}

}  // namespace

QuadratureSpec support_quadrature(const TestFunction& u, QuadratureSpec base) {
  const NormModel& d = u.norm();
  double kmin = 1.0, kmax = 1.0;
  if (d.kind() != NormKind::koranyi) {
    const NormModel rho(NormKind::koranyi, d.group());
    const RatioRange r = norm_ratio_range(d, rho, 20000, 11);
    kmin = 0.97 * r.min;
    kmax = 1.03 * r.max;
  }
  base.r_min = u.plateau().r2 / kmax;
  base.r_max = u.plateau().R2 / kmin;
  return base;
}

double w_weight_squared(double p, double f, double g) {
  if (!(p >= 2.0)) throw std::invalid_argument("w identity needs p >= 2");
  auto integrand = [&](double s) {
    return s * std::pow(std::abs(s * g + (1.0 - s) * f), p - 2.0);
  };
  // Split at the zero of s g + (1 - s) f, where the integrand has a kink.
  double total = 0.0;
  const double denom = f - g;
  double s0 = denom != 0.0 ? f / denom : -1.0;
  if (s0 > 0.0 && s0 < 1.0) {
    total += adaptive_gauss_kronrod(integrand, 0.0, s0, 0.0, 1e-14).value;
    total += adaptive_gauss_kronrod(integrand, s0, 1.0, 0.0, 1e-14).value;
  } else {
    total = adaptive_gauss_kronrod(integrand, 0.0, 1.0, 0.0, 1e-14).value;
  }
  return p * (p - 1.0) * total;
}

Report check_w_identity(double p, const std::vector<double>& f,
                        const std::vector<double>& g) {
  if (!(p >= 2.0)) throw std::invalid_argument("w identity needs p >= 2");
  if (f.size() != g.size()) throw std::invalid_argument("w identity: size mismatch");
  const std::size_t n = f.size();
  std::vector<double> lhs(n), fp(n), gp(n), mixed(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = f[i] - g[i];
    lhs[i] = w_weight_squared(p, f[i], g[i]) * diff * diff;
    fp[i] = std::pow(std::abs(f[i]), p);
    gp[i] = std::pow(std::abs(g[i]), p);
    mixed[i] = std::pow(std::abs(g[i]), p - 2.0) * g[i] * f[i];
  }
  const double left = pairwise_sum(lhs.data(), n);
  const double right = pairwise_sum(fp.data(), n) + (p - 1.0) * pairwise_sum(gp.data(), n) -
                       p * pairwise_sum(mixed.data(), n);
  Report r;
  r.check = "w_identity";
  r.values = {{"lhs", left}, {"rhs", right}, {"p", p}};
  // Relative to the size of the summands: when f = g both sides vanish and
  // only roundoff of the right-hand terms remains.
  double terms = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    terms += fp[i] + (p - 1.0) * gp[i] + p * std::abs(mixed[i]);
  const double scale = std::max({std::abs(left), std::abs(right), terms});
  r.tolerance = p == 2.0 ? 1e-14 : 1e-10;
  if (scale == 0.0) {
    r.tolerance_kind = "absolute";
    r.pass = true;
    r.diagnostics = {{"difference", 0.0}};
    return r;
  }
  const double err = std::abs(left - right) / scale;
  r.diagnostics = {{"relative_difference", err}};
  r.pass = err <= r.tolerance;
  return r;
}

namespace {

// Z splits as Z0 + (p theta) Z1.
struct ZParts {
  ZFieldSpec zero;
  ZFieldSpec unit;
};

ZParts z_parts(const NormModel& d, ZVariant variant) {
  return {ZFieldSpec{d, 2.0, 0.0, variant}, ZFieldSpec{d, 2.0, 0.5, variant}};
}

Report ibp_report(double p, double theta, double Q, double i1, double i2, double i3,
                  double e1, double e2, double e3, double rel_tol, double abs_tol,
                  const std::string& method) {
  Report r;
  r.check = "ibp_identity";
  r.values = {{"I1", i1}, {"I2", i2}, {"I3", i3}, {"p", p}, {"theta", theta}, {"Q", Q}};
  r.diagnostics = {{"err_I1", e1}, {"err_I2", e2}, {"err_I3", e3}};
  r.note = method;
  if (std::abs(Q - p * theta) <= 1e-12 * Q) {
    r.tolerance = abs_tol;
    r.tolerance_kind = "absolute";
    r.pass = std::abs(i1) <= abs_tol && std::abs(i2) <= abs_tol && std::abs(i3) <= abs_tol;
    return r;
  }
  const double d13 = rel_diff(i1, i3, i3), d23 = rel_diff(i2, i3, i3),
               d12 = rel_diff(i1, i2, i3);
  r.diagnostics.push_back({"rel_I1_I3", d13});
  r.diagnostics.push_back({"rel_I2_I3", d23});
  r.diagnostics.push_back({"rel_I1_I2", d12});
  r.tolerance = rel_tol;
  r.pass = d13 <= rel_tol && d23 <= rel_tol && d12 <= rel_tol;
  return r;
}

}  // namespace

std::vector<Report> check_ibp_identity_grid(
    const NormModel& d, const TestFunction& u,
    const std::vector<std::pair<double, double>>& p_theta,
    const QuadratureSpec& quad, double rel_tol, double abs_tol) {
  const StepTwoGroup& g = d.group();
  const double Q = g.homogeneous_dimension();
  const ZParts zp = z_parts(d, default_variant(g));
  const int m = static_cast<int>(p_theta.size());
  auto f = [&](const Point& x, double* out) {
    NormJet dj;
    FieldJet uj;
    if (!eval_jets(d, u, x, dj, uj)) {
      std::fill(out, out + 3 * m, 0.0);
      return;
    }
    const HVector z0 = z_field_from_jet(zp.zero, x, dj);
    const HVector z1 = z_field_from_jet(zp.unit, x, dj) - z0;
    const double pair0 = uj.hgrad.dot(z0), pair1 = uj.hgrad.dot(z1);
    const double e = euler_from_jet(g, x, uj.hgrad, uj.dt);
    const double au = std::abs(uj.value);
    const double ld = std::log(dj.value);
    for (int k = 0; k < m; ++k) {
      const auto [p, theta] = p_theta[k];
      const double pt = p * theta;
      const double a = std::pow(au, p - 2.0) * uj.value;
      const double dpt = std::exp(-pt * ld);  // d^{-p theta}
      out[3 * k] = a * (pair0 + pt * pair1) * dpt * dj.value;
      out[3 * k + 1] = a * e * dpt;
      out[3 * k + 2] = std::pow(au, p) * dpt;
    }
  };
  const QuadResult res = integrate_many(g, f, 3 * m, quad);
  std::vector<Report> reports;
  for (int k = 0; k < m; ++k) {
    const auto [p, theta] = p_theta[k];
    const double c = -(Q - p * theta) / p;
    Report r = ibp_report(p, theta, Q, res.values[3 * k], res.values[3 * k + 1],
                          c * res.values[3 * k + 2], res.errors[3 * k],
                          res.errors[3 * k + 1], std::abs(c) * res.errors[3 * k + 2],
                          rel_tol, abs_tol, res.method);
    r.diagnostics.push_back({"evaluations", static_cast<double>(res.evaluations)});
    reports.push_back(std::move(r));
  }
  return reports;
}

Report check_ibp_identity(const ZFieldSpec& spec, const TestFunction& u,
                          const QuadratureSpec& quad, double rel_tol, double abs_tol) {
  const StepTwoGroup& g = spec.group();
  const double Q = spec.Q();
  const double p = spec.p, pt = spec.p * spec.theta;
  auto f = [&](const Point& x, double* out) {
    NormJet dj;
    FieldJet uj;
    if (!eval_jets(spec.norm, u, x, dj, uj)) {
      out[0] = out[1] = out[2] = 0.0;
      return;
    }
    const HVector z = z_field_from_jet(spec, x, dj);
    const double au = std::abs(uj.value);
    const double a = std::pow(au, p - 2.0) * uj.value;
    const double dpt = std::pow(dj.value, -pt);
    out[0] = a * uj.hgrad.dot(z) * dpt * dj.value;
    out[1] = a * euler_from_jet(g, x, uj.hgrad, uj.dt) * dpt;
    out[2] = std::pow(au, p) * dpt;
  };
  const QuadResult res = integrate_many(g, f, 3, quad);
  const double c = -(Q - pt) / p;
  Report r = ibp_report(p, spec.theta, Q, res.values[0], res.values[1], c * res.values[2],
                        res.errors[0], res.errors[1], std::abs(c) * res.errors[2],
                        rel_tol, abs_tol, res.method);
  r.diagnostics.push_back({"evaluations", static_cast<double>(res.evaluations)});
  return r;
}

Quotients hardy_quotients(const ZFieldSpec& spec, const TestFunction& u,
                          const QuadratureSpec& quad) {
  const StepTwoGroup& g = spec.group();
  const double p = spec.p, theta = spec.theta;
  auto f = [&](const Point& x, double* out) {
    NormJet dj;
    FieldJet uj;
    if (!eval_jets(spec.norm, u, x, dj, uj)) {
      out[0] = out[1] = out[2] = 0.0;
      return;
    }
    const HVector z = z_field_from_jet(spec, x, dj);
    const double wnum = std::pow(dj.value, -p * (theta - 1.0));
    out[0] = std::pow(std::abs(uj.hgrad.dot(z)), p) * wnum;
    out[1] = std::pow(uj.hgrad.norm(), p) * wnum;
    out[2] = std::pow(std::abs(uj.value), p) * std::pow(dj.value, -p * theta);
  };
  const QuadResult res = integrate_many(g, f, 3, quad);
  Quotients q;
  q.projected_numerator = res.values[0];
  q.full_numerator = res.values[1];
  q.denominator = res.values[2];
  if (!(q.denominator > 0.0))
    throw std::domain_error("hardy quotient: vanishing denominator");
  q.projected = q.projected_numerator / q.denominator;
  q.full = q.full_numerator / q.denominator;
  q.errors = res.errors;
  return q;
}

double hardy_quotient(const ZFieldSpec& spec, const TestFunction& u,
                      const QuadratureSpec& quad, bool projected) {
  const Quotients q = hardy_quotients(spec, u, quad);
  return projected ? q.projected : q.full;
}

namespace {

void require_rotation_hypothesis(const NormModel& d) {
  const StepTwoGroup& g = d.group();
  if (g.vertical_dim() != 1)
    throw std::invalid_argument("rotation hypothesis needs one vertical direction");
  SplitMix64 rng(3);
  for (int i = 0; i < 32; ++i) {
    Point x = random_koranyi_sphere_point(g, rng);
    if (d.kind() == NormKind::cc) {
      // keep away from the ill-conditioned neighbourhood of the center
      if (x.z.norm() < 0.2) continue;
    }
    const double defect = rotation_defect(d, x);
    if (!(std::abs(defect) <= 1e-8))
      throw std::invalid_argument(
          "norm violates <z, B^{-1} grad_z d> = 0 (rotation hypothesis)");
  }
}

}  // namespace

QuadratureSpec sharpness_quadrature(const NormModel& d, double eps, QuadratureSpec base) {
  QuadratureSpec q = base;
  q.method = QuadMethod::tensor_grid;
  q.chart = Chart::phi_polar;
  q.lambda_map = LambdaMap::log_window;
  q.lambda_lo = eps;
  q.lambda_hi = 1.0 / eps;
  const double width = 2.0 * std::log(1.0 / eps);
  const int panels = static_cast<int>(std::ceil(width / 0.15));
  q.lambda_nodes = panels * q.per_panel;
  TestFunction probe = TestFunction::extremal_cutoff(d, 2.0, eps);
  const QuadratureSpec s = support_quadrature(probe, q);
  q.r_min = s.r_min;
  q.r_max = s.r_max;
  return q;
}

SharpnessResult sharpness_sequence(const ZFieldSpec& spec,
                                   const std::vector<double>& eps_list,
                                   const QuadratureSpec& base) {
  require_rotation_hypothesis(spec.norm);
  if (eps_list.size() < 2) throw std::invalid_argument("sharpness needs >= 2 eps values");
  for (std::size_t k = 1; k < eps_list.size(); ++k)
    if (!(eps_list[k] < eps_list[k - 1]))
      throw std::invalid_argument("sharpness: eps list must be strictly decreasing");

  SharpnessResult out;
  const double Q = spec.Q();
  out.target = std::pow(std::abs((Q - spec.p * spec.theta) / spec.p), spec.p);
  for (double eps : eps_list) {
    const TestFunction u = TestFunction::extremal_cutoff(spec.norm, spec.p, eps);
    const QuadratureSpec q = sharpness_quadrature(spec.norm, eps, base);
    const Quotients qt = hardy_quotients(spec, u, q);
    out.points.push_back({eps, qt.projected, qt.projected_numerator, qt.denominator,
                          std::max(qt.errors[0], qt.errors[2])});
  }

  const std::size_t n = out.points.size();
  std::vector<double> L(n), ex(n), D(n);
  for (std::size_t k = 0; k < n; ++k) {
    L[k] = std::log(1.0 / out.points[k].eps);
    ex[k] = out.points[k].quotient - out.target;
    D[k] = out.points[k].denominator;
  }
  out.decreasing = true;
  out.above_target = true;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && out.points[k].quotient > out.points[k - 1].quotient + 1e-3)
      out.decreasing = false;
    if (out.points[k].quotient < out.target - 1e-3) out.above_target = false;
  }
  // Least squares for excess = C / L.
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxy += ex[k] / L[k];
    sxx += 1.0 / (L[k] * L[k]);
  }
  out.fit_C = sxy / sxx;
  out.fit_residual = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    out.fit_residual = std::max(out.fit_residual,
                                std::abs(ex[k] - out.fit_C / L[k]) / std::abs(ex[k]));
  // Denominator = slope L + intercept.
  double ml = 0.0, md = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ml += L[k] / n;
    md += D[k] / n;
  }
  double cov = 0.0, var = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cov += (L[k] - ml) * (D[k] - md);
    var += (L[k] - ml) * (L[k] - ml);
  }
  out.growth_slope = cov / var;
  out.growth_intercept = md - out.growth_slope * ml;
  out.log_growth = out.growth_slope > 0.0;
  for (std::size_t k = 0; k < n; ++k)
    if (D[k] < 0.5 * out.growth_slope * std::log(1.0 / (2.0 * out.points[k].eps)))
      out.log_growth = false;

  Report& r = out.report;
  r.check = "sharpness";
  for (const auto& pt : out.points) {
    char name[64];
    std::snprintf(name, sizeof(name), "quotient(eps=%g)", pt.eps);
    r.values.push_back({name, pt.quotient});
    std::snprintf(name, sizeof(name), "denominator(eps=%g)", pt.eps);
    r.values.push_back({name, pt.denominator});
    std::snprintf(name, sizeof(name), "quad_error(eps=%g)", pt.eps);
    r.diagnostics.push_back({name, pt.quad_error});
  }
  r.values.push_back({"target", out.target});
  r.values.push_back({"fit_C", out.fit_C});
  r.values.push_back({"fit_residual", out.fit_residual});
  r.values.push_back({"growth_slope", out.growth_slope});
  r.bound = out.target;
  r.tolerance = 0.2;
  r.tolerance_kind = "fit_residual";
  r.pass = out.decreasing && out.above_target && out.fit_C > 0.0 &&
           out.fit_residual <= 0.2 && out.log_growth;
  if (!r.pass) {
    r.note = std::string("decreasing=") + (out.decreasing ? "yes" : "no") +
             " above_target=" + (out.above_target ? "yes" : "no") +
             " log_growth=" + (out.log_growth ? "yes" : "no");
  }
  return out;
}

double extremal_residual(const ZFieldSpec& spec, const Point& x, DiffScheme scheme) {
  const NormModel& d = spec.norm;
  const StepTwoGroup& g = d.group();
  if (g.vertical_dim() != 1)
    throw std::invalid_argument("extremal residual needs one vertical direction");
  if (x.z.squaredNorm() == 0.0 || x.t[0] == 0.0)
    throw std::domain_error("extremal residual: x must be off the center and off t = 0");
  if (!(std::abs(rotation_defect(d, x)) <= 1e-8 * std::max(1.0, norm_value(d, x))))
    throw std::invalid_argument("norm violates the rotation hypothesis");
  const double Q = spec.Q();
  const double a = (Q - 2.0) / (2.0 * spec.p);
  ScalarField u;
  u.value = [a](const Point& y) {
    return std::pow(std::abs(y.t[0] / y.z.squaredNorm()), a);
  };
  u.hgrad = [a, &g](const Point& y) {
    const double z2 = y.z.squaredNorm();
    const double lam = y.t[0] / z2;
    const Eigen::MatrixXd c = g.frame_vertical(y.z);
    HVector out(g.horizontal_dim());
    const double dphi = a * std::pow(std::abs(lam), a - 1.0) * (lam < 0 ? -1.0 : 1.0);
    for (int i = 0; i < g.horizontal_dim(); ++i)
      out[i] = dphi * (c(i, 0) - 2.0 * lam * y.z[i]) / z2;
    return out;
  };
  const HVector grad = horizontal_gradient(g, u, x, scheme);
  const NormJet dj = norm_jet(d, x);
  const HVector z = z_field_from_jet(spec, x, dj);
  const double dv = dj.value;
  return std::abs(grad.dot(z) * std::pow(dv, 1.0 - spec.theta) +
                  (Q - spec.p * spec.theta) / spec.p * u.value(x) *
                      std::pow(dv, -spec.theta));
}

Report counterexample_scan(double p_theta, bool isotropic_control, const ScanOptions& opt) {
  const StepTwoGroup g = isotropic_control
                             ? StepTwoGroup::heisenberg(2)
                             : StepTwoGroup::single_vertical(Eigen::Vector2d(0.5, 1.0));
  const NormModel d(isotropic_control ? NormKind::koranyi : NormKind::balogh_tyson, g);
  const ZFieldSpec spec = make_zfield_spec(d, 2.0, p_theta / 2.0);
  const int dim = g.horizontal_dim() + 1;
  auto b_value = [&](const Eigen::VectorXd& v) {
    Point x{v.head(g.horizontal_dim()), v.tail(1)};
    Point x0{x.z, VVector::Zero(1)};
    if (x.z.squaredNorm() == 0.0) return -std::numeric_limits<double>::infinity();
    return z_field_at(spec, x).squaredNorm() - z_field_at(spec, x0).squaredNorm();
  };
  const MultistartResult m = multistart_maximize(
      b_value, Eigen::VectorXd::Constant(dim, -1.0), Eigen::VectorXd::Constant(dim, 1.0),
      opt.samples, opt.refine);
  Point best{m.arg.head(g.horizontal_dim()), m.arg.tail(1)};
  best = dilate(1.0 / norm_value(d, best), best);

  Report r;
  r.check = isotropic_control ? "counterexample_control_H2" : "counterexample_scan";
  r.values.push_back({"max_B", m.value});
  for (int k = 0; k < g.horizontal_dim(); ++k)
    r.values.push_back({"arg_z" + std::to_string(k + 1), best.z[k]});
  r.values.push_back({"arg_t", best.t[0]});
  r.values.push_back({"Z_sq_at_arg", z_field_at(spec, best).squaredNorm()});
  r.values.push_back(
      {"Z_sq_at_arg_t0", z_field_at(spec, Point{best.z, VVector::Zero(1)}).squaredNorm()});
  r.diagnostics = {{"evaluations", static_cast<double>(m.evaluations)},
                   {"samples", static_cast<double>(opt.samples)},
                   {"p_theta", p_theta}};
  r.tolerance = opt.threshold;
  r.tolerance_kind = "absolute";
  if (isotropic_control) {
    r.pass = m.value <= opt.threshold;
    r.note = "pass means no point with B > threshold was found";
  } else {
    r.pass = m.value > opt.threshold;
    r.note = r.pass ? "found |Z| larger off the horizontal plane"
                    : "inconclusive: no positive B found";
  }
  return r;
}

std::vector<Report> product_check(int n, int N, double p, double theta,
                                  const ProductOptions& opt) {
  if (!(theta >= 0.0)) throw std::invalid_argument("product_check needs theta >= 0");
  const StepTwoGroup g = StepTwoGroup::heisenberg_product(n, N);
  const NormModel d(NormKind::koranyi, g);
  const ZFieldSpec spec = make_zfield_spec(d, p, theta, ZVariant::product);
  const bool hypothesis = (n + 1.0) >= p * theta / 4.0;
  const double cap = ((n + 1.0) / n) * ((n + 1.0) / n);

  SupOptions so;
  so.samples = opt.samples;
  so.refine = opt.refine;
  const SupResult sup = sup_z_norm(spec, so);
  const double sup_sq = sup.sup_value * sup.sup_value;
  const double tmax = sup.arg_point ? sup.arg_point->t.cwiseAbs().maxCoeff() : 0.0;

  std::vector<Report> out;
  Report r;
  r.check = "product_sup";
  r.values = {{"sup_Z_sq", sup_sq},
              {"cap_sq", cap},
              {"argmax_abs_t", tmax},
              {"hypothesis_holds", hypothesis ? 1.0 : 0.0}};
  r.diagnostics = {{"evaluations", static_cast<double>(sup.samples)}};
  try {
    r.bound = bound_product(n, N, p, theta);
  } catch (const ConditionError&) {
  }
  r.tolerance = 1e-9;
  r.tolerance_kind = "absolute";
  if (hypothesis) {
    r.pass = sup_sq <= cap + 1e-9 && tmax <= 1e-4;
  } else {
    r.pass = sup_sq > cap;
    r.note = "hypothesis n + 1 >= p theta / 4 fails; pass means the scan exceeds ((n+1)/n)^2";
  }
  out.push_back(std::move(r));

  if (opt.identity) {
    SplitMix64 rng(opt.seed);
    const TestFunction u = random_bump(d, rng);
    QuadratureSpec q;
    q.method = QuadMethod::monte_carlo;
    q.chart = Chart::ambient;
    q.samples = opt.mc_samples;
    q.seed = opt.seed;
    q.r_max = u.plateau().R2;
    Report ir = check_ibp_identity(spec, u, q, 5e-3, 1e-4);
    ir.check = "product_identity";
    out.push_back(std::move(ir));
  }
  return out;
}

std::vector<Report> check_divergence_identities(const NormModel& d, double p_theta,
                                                const TestFunction& phi,
                                                const QuadratureSpec& quad,
                                                double rel_tol) {
  const StepTwoGroup& g = d.group();
  if (g.vertical_dim() != 1)
    throw std::invalid_argument("divergence identities need one vertical direction");
  const double n = g.blocks();
  const double k = p_theta + 1.0;
  auto f = [&](const Point& x, double* out) {
    NormJet dj;
    FieldJet fj;
    if (!eval_jets(d, phi, x, dj, fj)) {
      std::fill(out, out + 8, 0.0);
      return;
    }
    const double dv = dj.value;
    const double t = x.t[0];
    const double zg = x.z.dot(dj.hgrad);
    const double dk = std::pow(dv, -k);
    const HVector v1 = (t * dk) * apply_B_inverse(g, dj.hgrad);
    out[0] = v1.dot(fj.hgrad);
    out[1] = (-0.5 * zg * dk + n * t * dk * dj.dt[0]) * fj.value;
    const double dpt = std::pow(dv, -p_theta);
    out[2] = dpt * x.z.dot(fj.hgrad);
    out[3] = (2.0 * n * dpt - p_theta * dpt / dv * zg) * fj.value;
    for (int c = 0; c < 4; ++c) out[4 + c] = std::abs(out[c]);
  };
  // Sides can vanish by symmetry, so the scale is the mass of the integrands.
  const QuadResult res = integrate_many(g, f, 8, quad);
  std::vector<Report> reports;
  const char* names[2] = {"divergence_identity_i", "divergence_identity_ii"};
  for (int c = 0; c < 2; ++c) {
    const double lhs = res.values[2 * c], rhs = -res.values[2 * c + 1];
    Report r;
    r.check = names[c];
    r.values = {{"int_V_grad_phi", lhs}, {"minus_int_rhs_phi", rhs}, {"p_theta", p_theta}};
    r.diagnostics = {{"err_lhs", res.errors[2 * c]}, {"err_rhs", res.errors[2 * c + 1]}};
    const double scale = std::max(res.values[4 + 2 * c], res.values[5 + 2 * c]);
    const double err = rel_diff(lhs, rhs, scale);
    r.diagnostics.push_back({"integrand_mass", scale});
    r.diagnostics.push_back({"relative_difference", err});
    r.tolerance = rel_tol;
    r.pass = err <= rel_tol;
    r.note = res.method;
    reports.push_back(std::move(r));
  }
  return reports;
}

Report check_euler_adjoint(const TestFunction& u, const TestFunction& v,
                           const QuadratureSpec& quad, double rel_tol) {
  const StepTwoGroup& g = u.norm().group();
  const double Q = g.homogeneous_dimension();
  auto f = [&](const Point& x, double* out) {
    const FieldJet a = u.jet(x), b = v.jet(x);
    out[0] = euler_from_jet(g, x, a.hgrad, a.dt) * b.value;
    out[1] = a.value * euler_from_jet(g, x, b.hgrad, b.dt);
    out[2] = a.value * b.value;
  };
  const QuadResult res = integrate_many(g, f, 3, quad);
  const double s = res.values[0] + res.values[1] + Q * res.values[2];
  const double scale = std::abs(res.values[0]) + std::abs(res.values[1]) +
                       Q * std::abs(res.values[2]);
  Report r;
  r.check = "euler_adjoint";
  r.values = {{"int_Eu_v", res.values[0]},
              {"int_u_Ev", res.values[1]},
              {"Q_int_uv", Q * res.values[2]},
              {"sum", s}};
  r.diagnostics = {{"relative_sum", std::abs(s) / scale}};
  r.tolerance = rel_tol;
  r.pass = std::abs(s) / scale <= rel_tol;
  r.note = res.method;
  return r;
}

}  // namespace carnot
