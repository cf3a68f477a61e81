#include "carnot/test_function.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace carnot {

double Plateau::value(double r) const {
  if (r <= r2 || r >= R2) return 0.0;
  if (r < r1) return smooth_step((r - r2) / (r1 - r2));
  if (r > R1) return smooth_step((R2 - r) / (R2 - R1));
  return 1.0;
}

double Plateau::derivative(double r) const {
  if (r <= r2 || r >= R2) return 0.0;
  if (r < r1) return smooth_step_derivative((r - r2) / (r1 - r2)) / (r1 - r2);
  if (r > R1) return -smooth_step_derivative((R2 - r) / (R2 - R1)) / (R2 - R1);
  return 0.0;
}

double LambdaCutoff::value(double lam) const {
  const double lo = eps, hi = 1.0 / eps;
  if (lam <= lo || lam >= hi) return 0.0;
  if (lam < 2.0 * lo) return smooth_step((lam - lo) / lo);
  if (lam > 0.5 * hi) return smooth_step((hi - lam) / (0.5 * hi));
  return 1.0;
}

double LambdaCutoff::derivative(double lam) const {
  const double lo = eps, hi = 1.0 / eps;
  if (lam <= lo || lam >= hi) return 0.0;
  if (lam < 2.0 * lo) return smooth_step_derivative((lam - lo) / lo) / lo;
  if (lam > 0.5 * hi) return -smooth_step_derivative((hi - lam) / (0.5 * hi)) / (0.5 * hi);
  return 0.0;
}

namespace {

void check_plateau(const Plateau& p) {
  if (!(0.0 < p.r2 && p.r2 < p.r1 && p.r1 <= p.R1 && p.R1 < p.R2))
    throw std::invalid_argument("plateau needs 0 < r2 < r1 <= R1 < R2");
}

FieldJet zero_jet(const StepTwoGroup& g) {
  return {0.0, HVector::Zero(g.horizontal_dim()), VVector::Zero(g.vertical_dim())};
}

}  // namespace

TestFunction TestFunction::bump(const NormModel& d, Plateau eta, Modulation m) {
  check_plateau(eta);
  const StepTwoGroup& g = d.group();
  if (m.a.size() == 0) m.a = Eigen::VectorXd::Zero(g.horizontal_dim());
  if (m.b.size() == 0) m.b = Eigen::VectorXd::Zero(g.vertical_dim());
  if (m.a.size() != g.horizontal_dim() || m.b.size() != g.vertical_dim())
    throw std::invalid_argument("bump: modulation size does not match the group");
  TestFunction u(Kind::bump, d);
  u.eta_ = eta;
  u.mod_ = std::move(m);
  return u;
}

TestFunction TestFunction::extremal_cutoff(const NormModel& d, double p, double eps,
                                           Plateau eta) {
  check_plateau(eta);
  if (d.group().vertical_dim() != 1)
    throw std::invalid_argument("extremal_cutoff needs one vertical direction");
  if (!(eps > 0.0 && eps < 0.25))
    throw std::invalid_argument("extremal_cutoff needs 0 < eps < 1/4");
  if (!(p >= 2.0)) throw std::invalid_argument("extremal_cutoff needs p >= 2");
  TestFunction u(Kind::extremal_cutoff, d);
  u.eta_ = eta;
  u.exponent_ = (d.group().homogeneous_dimension() - 2.0) / (2.0 * p);
  u.cutoff_.eps = eps;
  return u;
}

double TestFunction::value(const Point& x) const {
  const double dv = norm_value(norm_, x);
  const double e = eta_.value(dv);
  if (e == 0.0) return 0.0;
  if (kind_ == Kind::bump) {
    const double rho = koranyi_value(x);
    return e * (mod_.c0 + mod_.a.dot(x.z.cast<double>()) / rho +
                mod_.b.dot(x.t.cast<double>()) / (rho * rho));
  }
  const double z2 = x.z.squaredNorm();
  if (z2 == 0.0) return 0.0;
  const double lam = x.t[0] / z2;
  const double gv = cutoff_.value(lam);
  if (gv == 0.0) return 0.0;
  return std::pow(lam, exponent_) * gv * e;
}

FieldJet TestFunction::jet(const Point& x, DiffScheme scheme) const {
  const StepTwoGroup& g = norm_.group();
  if (kind_ == Kind::extremal_cutoff) {
    const double z2 = x.z.squaredNorm();
    if (z2 == 0.0 || cutoff_.value(x.t[0] / z2) == 0.0) return zero_jet(g);
  }
  if (norm_.kind() == NormKind::cc && scheme.kind == DiffScheme::Kind::analytic) {
    // One inversion serves both the value and the derivatives.
    if (x.z.squaredNorm() == 0.0) return zero_jet(g);
    const NormJet dj = norm_jet(norm_, x, scheme);
    if (dj.value <= eta_.r2 || dj.value >= eta_.R2) return zero_jet(g);
    return jet_from_norm(x, dj);
  }
  const double dv = norm_value(norm_, x);
  if (dv <= eta_.r2 || dv >= eta_.R2) return zero_jet(g);
  return jet_from_norm(x, norm_jet(norm_, x, scheme));
}

FieldJet TestFunction::jet_from_norm(const Point& x, const NormJet& dj) const {
  const StepTwoGroup& g = norm_.group();
  const double e = eta_.value(dj.value);
  const double de = eta_.derivative(dj.value);
  if (e == 0.0 && de == 0.0) return zero_jet(g);
  FieldJet out;
  if (kind_ == Kind::bump) {
    const auto k = koranyi_derivatives(g, x);
    const double rho = koranyi_value(x);
    const double rho2 = rho * rho;
    const double az = mod_.a.dot(x.z.cast<double>());
    const double bt = mod_.b.dot(x.t.cast<double>());
    const double m = mod_.c0 + az / rho + bt / rho2;
    const Eigen::MatrixXd c = g.frame_vertical(x.z);
    HVector a(g.horizontal_dim());
    for (int i = 0; i < g.horizontal_dim(); ++i) a[i] = mod_.a[i];
    HVector cb = HVector::Zero(g.horizontal_dim());
    for (int i = 0; i < g.horizontal_dim(); ++i)
      for (int j = 0; j < g.vertical_dim(); ++j) cb[i] += c(i, j) * mod_.b[j];
    VVector b(g.vertical_dim());
    for (int j = 0; j < g.vertical_dim(); ++j) b[j] = mod_.b[j];
    const HVector grad_m = a / rho - (az / rho2) * k.hgrad + cb / rho2 -
                           (2.0 * bt / (rho2 * rho)) * k.hgrad;
    const VVector dt_m = -(az / rho2) * k.dt + b / rho2 - (2.0 * bt / (rho2 * rho)) * k.dt;
    out.value = e * m;
    out.hgrad = (de * m) * dj.hgrad + e * grad_m;
    out.dt = (de * m) * dj.dt + e * dt_m;
    return out;
  }
  const double z2 = x.z.squaredNorm();
  const double lam = x.t[0] / z2;
  const double gv = cutoff_.value(lam);
  const double dg = cutoff_.derivative(lam);
  if (gv == 0.0 && dg == 0.0) return zero_jet(g);
  const double pw = std::pow(lam, exponent_);
  const double phi = pw * gv;
  const double dphi = exponent_ * pw / lam * gv + pw * dg;
  // X_i lambda = C_i(z)/|z|^2 - 2 lambda z_i/|z|^2, d_t lambda = 1/|z|^2.
  const Eigen::MatrixXd c = g.frame_vertical(x.z);
  HVector grad_l(g.horizontal_dim());
  for (int i = 0; i < g.horizontal_dim(); ++i)
    grad_l[i] = (c(i, 0) - 2.0 * lam * x.z[i]) / z2;
  out.value = phi * e;
  out.hgrad = (dphi * e) * grad_l + (phi * de) * dj.hgrad;
  out.dt = VVector::Constant(1, dphi * e / z2) + (phi * de) * dj.dt;
  return out;
}

ScalarField TestFunction::as_scalar_field() const {
  ScalarField f;
  const TestFunction self = *this;
  f.value = [self](const Point& x) { return self.value(x); };
  f.hgrad = [self](const Point& x) { return self.jet(x).hgrad; };
  f.dt = [self](const Point& x) { return self.jet(x).dt; };
  return f;
}

std::string TestFunction::describe() const {
  char buf[160];
  if (kind_ == Kind::bump) {
    std::snprintf(buf, sizeof(buf), "bump[%s] plateau=(%.4g,%.4g,%.4g,%.4g) c0=%.4g",
                  to_string(norm_.kind()), eta_.r2, eta_.r1, eta_.R1, eta_.R2, mod_.c0);
  } else {
    std::snprintf(buf, sizeof(buf), "extremal_cutoff[%s] a=%.6g eps=%.3g",
                  to_string(norm_.kind()), exponent_, cutoff_.eps);
  }
  return buf;
}

TestFunction random_bump(const NormModel& d, SplitMix64& rng) {
  const StepTwoGroup& g = d.group();
  Plateau eta;
  eta.r2 = rng.uniform(0.25, 0.35);
  eta.r1 = eta.r2 + rng.uniform(0.15, 0.35);
  eta.R2 = rng.uniform(1.8, 2.0);
  eta.R1 = eta.R2 - rng.uniform(0.2, 0.5);
  Modulation m;
  m.c0 = 1.0;
  m.a = Eigen::VectorXd(g.horizontal_dim());
  for (int k = 0; k < g.horizontal_dim(); ++k) m.a[k] = rng.uniform(-1.0, 1.0);
  m.a *= rng.uniform(0.0, 0.3) / std::max(1e-12, m.a.norm());
  m.b = Eigen::VectorXd(g.vertical_dim());
  for (int j = 0; j < g.vertical_dim(); ++j) m.b[j] = rng.uniform(-1.0, 1.0);
  m.b *= rng.uniform(0.0, 0.2) / std::max(1e-12, m.b.norm());
  return TestFunction::bump(d, eta, m);
}

}  // namespace carnot
