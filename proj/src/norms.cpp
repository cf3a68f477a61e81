#include "carnot/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "carnot/numerics.hpp"

namespace carnot {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

void require_heisenberg_point(const Point& x) {
  if (x.z.size() < 2 || x.z.size() % 2 != 0 || x.t.size() != 1)
    throw std::invalid_argument("cc: expects a point of H^n (2n horizontal, 1 vertical)");
}

void require_off_origin(const Point& x, const char* what) {
  if (x.z.squaredNorm() == 0.0 && x.t.squaredNorm() == 0.0)
    throw std::domain_error(std::string(what) + ": undefined at the origin");
}

}  // namespace

double one_minus_cos_over_sq(double nu) {
  const double s = sinc(0.5 * nu);
  return 0.5 * s * s;
}

double nu_minus_sin(double nu) {
  if (std::abs(nu) >= 1.0) return nu - std::sin(nu);
  // nu^3/3! - nu^5/5! + ...
  const double nu2 = nu * nu;
  double term = nu * nu2 / 6.0;
  double sum = 0.0;
  for (int k = 3; k < 40 && term != 0.0; k += 2) {
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    term *= -nu2 / ((k + 1.0) * (k + 2.0));
  }
  return sum;
}

double nu_minus_sin_over_sq(double nu) {
  if (nu == 0.0) return 0.0;
  return nu_minus_sin(nu) / (nu * nu);
}

double cc_mu(double nu) {
  if (std::abs(nu) < 1e-3) {
    const double nu2 = nu * nu;
    return nu * (1.0 / 3.0 + nu2 * (1.0 / 90.0 + nu2 / 2520.0));
  }
  const double s = std::sin(0.5 * nu);
  return nu_minus_sin(nu) / (2.0 * s * s);
}

double cc_mu_derivative(double nu) {
  if (std::abs(nu) < 1e-3) {
    const double nu2 = nu * nu;
    return 1.0 / 3.0 + nu2 * (1.0 / 30.0 + nu2 / 504.0);
  }
  return 1.0 - cc_mu(nu) * std::cos(0.5 * nu) / std::sin(0.5 * nu);
}

HGradDt koranyi_derivatives(const StepTwoGroup& g, const Point& x) {
  g.check_point(x);
  require_off_origin(x, "koranyi gradient");
  const double z2 = x.z.squaredNorm();
  const double rho = koranyi_value(x);
  const double rho3 = rho * rho * rho;
  const HVector grad_z = (z2 / rho3) * x.z;
  const VVector dt = x.t / (2.0 * rho3);
  return {assemble_hgrad(g, x.z, grad_z, dt), dt};
}

HVector koranyi_hgrad(const StepTwoGroup& g, const Point& x) {
  return koranyi_derivatives(g, x).hgrad;
}

HGradDt koranyi_B_derivatives(const StepTwoGroup& g, const Point& x) {
  g.check_point(x);
  require_off_origin(x, "koranyi_B gradient");
  const double s = symplectic_norm_squared<double>(g, x.z);
  const double rho = koranyi_B_value(g, x);
  const double rho3 = rho * rho * rho;
  HVector grad_z(x.z.size());
  for (int i = 0; i < g.blocks(); ++i) {
    const double c = s * g.couplings()(0, i) / (4.0 * rho3);
    grad_z[2 * i] = c * x.z[2 * i];
    grad_z[2 * i + 1] = c * x.z[2 * i + 1];
  }
  const VVector dt = x.t / (2.0 * rho3);
  return {assemble_hgrad(g, x.z, grad_z, dt), dt};
}

Point cc_from_polar(const CCPolar& p) {
  if (p.a.size() != p.b.size() || p.a.size() < 1 ||
      2 * p.a.size() > kMaxHorizontal)
    throw std::invalid_argument("cc_from_polar: a and b must have equal size n >= 1");
  const double unit = std::sqrt(p.a.squaredNorm() + p.b.squaredNorm());
  if (std::abs(unit - 1.0) > 1e-9)
    throw std::invalid_argument("cc_from_polar: |a + ib| must be 1");
  if (!(std::abs(p.nu) <= kTwoPi))
    throw std::invalid_argument("cc_from_polar: nu outside [-2pi, 2pi]");
  if (!(p.r >= 0.0)) throw std::invalid_argument("cc_from_polar: r must be >= 0");
  const Eigen::Index n = p.a.size();
  // (1 - cos nu)/nu = nu * f(nu) and sin(nu)/nu stay finite at nu = 0.
  const double k = p.nu * one_minus_cos_over_sq(p.nu);
  const double s = sinc(p.nu);
  Point x{HVector(2 * n), VVector(1)};
  for (Eigen::Index i = 0; i < n; ++i) {
    x.z[2 * i] = p.r * (p.b[i] * k + p.a[i] * s);
    x.z[2 * i + 1] = p.r * (-p.a[i] * k + p.b[i] * s);
  }
  x.t[0] = 2.0 * p.r * p.r * nu_minus_sin_over_sq(p.nu);
  return x;
}

CCPolar cc_invert(const Point& x) {
  require_heisenberg_point(x);
  require_off_origin(x, "cc_invert");
  const Eigen::Index n = x.z.size() / 2;
  const double z2 = x.z.squaredNorm();
  const double t = x.t[0];
  CCPolar p;
  p.a = Eigen::VectorXd::Zero(n);
  p.b = Eigen::VectorXd::Zero(n);

  if (z2 == 0.0) {
    p.nu = std::copysign(kTwoPi, t);
    p.r = std::sqrt(kPi * std::abs(t));
    p.a[0] = 1.0;
    return p;
  }

  double nu = 0.0;
  if (t != 0.0) {
    const double target = std::abs(t) / z2;
    const double hi = kTwoPi;
    if (cc_mu(hi) <= target) {
      nu = hi;  // z is below resolution relative to t
    } else {
      nu = bisect_increasing(cc_mu, target, 0.0, hi, 1e-13);
      for (int it = 0; it < 2; ++it) {
        const double step = (cc_mu(nu) - target) / cc_mu_derivative(nu);
        const double next = nu - step;
        if (!(next > 0.0 && next < hi)) break;
        if (std::abs(cc_mu(next) - target) > std::abs(cc_mu(nu) - target)) break;
        nu = next;
      }
    }
    nu = std::copysign(nu, t);
  }
  p.nu = nu;
  const double zn = std::sqrt(z2);
  p.r = zn / std::abs(sinc(0.5 * nu));

  // Undo the planar rotation in each block:
  //   (a, b) = [[c, -nu/2], [nu/2, c]] (z_{2i-1}, z_{2i}) / r,
  // with c = (nu/2) cot(nu/2).
  const double half = 0.5 * nu;
  const double c = half == 0.0 ? 1.0 : half * std::cos(half) / std::sin(half);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z1 = x.z[2 * i], w1 = x.z[2 * i + 1];
    p.a[i] = (c * z1 - half * w1) / p.r;
    p.b[i] = (half * z1 + c * w1) / p.r;
  }
  const double unit = std::sqrt(p.a.squaredNorm() + p.b.squaredNorm());
  if (unit > 0.0 && std::isfinite(unit)) {
    p.a /= unit;
    p.b /= unit;
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      p.a[i] = x.z[2 * i] / zn;
      p.b[i] = x.z[2 * i + 1] / zn;
    }
  }
  return p;
}

double cc_value(const Point& x) {
  require_heisenberg_point(x);
  if (x.z.squaredNorm() == 0.0) return std::sqrt(kPi * std::abs(x.t[0]));
  return cc_invert(x).r;
}

HVector cc_hgrad_from_polar(const CCPolar& p) {
  const Eigen::Index n = p.a.size();
  const double s = std::sin(p.nu), c = std::cos(p.nu);
  HVector out(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[2 * i] = p.b[i] * s + p.a[i] * c;
    out[2 * i + 1] = p.b[i] * c - p.a[i] * s;
  }
  return out;
}

namespace {

CCPolar cc_invert_off_center(const Point& x, const char* what) {
  require_heisenberg_point(x);
  if (x.z.squaredNorm() == 0.0)
    throw std::domain_error(std::string(what) + ": the CC distance is not smooth on the center");
  return cc_invert(x);
}

}  // namespace

HVector cc_hgrad(const Point& x) {
  return cc_hgrad_from_polar(cc_invert_off_center(x, "cc_hgrad"));
}

double cc_dt(const Point& x) {
  const CCPolar p = cc_invert_off_center(x, "cc_dt");
  return p.nu / (4.0 * p.r);
}

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::koranyi: return "koranyi";
    case NormKind::koranyi_B: return "koranyi_B";
    case NormKind::cc: return "cc";
    case NormKind::balogh_tyson: return "balogh_tyson";
  }
  return "unknown";
}

NormKind norm_kind_from_string(const std::string& name) {
  if (name == "koranyi") return NormKind::koranyi;
  if (name == "koranyi_B" || name == "koranyi-b" || name == "koranyiB")
    return NormKind::koranyi_B;
  if (name == "cc") return NormKind::cc;
  if (name == "balogh_tyson" || name == "balogh-tyson" || name == "bt")
    return NormKind::balogh_tyson;
  throw std::invalid_argument("unknown norm '" + name + "'");
}

NormModel::NormModel(NormKind kind, StepTwoGroup group)
    : kind_(kind), group_(std::move(group)) {
  switch (kind_) {
    case NormKind::koranyi:
      break;
    case NormKind::koranyi_B:
      if (group_.vertical_dim() != 1)
        throw std::invalid_argument("koranyi_B needs one vertical direction");
      break;
    case NormKind::cc:
      if (!group_.is_heisenberg())
        throw std::invalid_argument("cc distance is implemented on H^n only");
      break;
    case NormKind::balogh_tyson: {
      const bool ok = group_.vertical_dim() == 1 && group_.blocks() == 2 &&
                      group_.couplings()(0, 0) == 0.5 &&
                      group_.couplings()(0, 1) == 1.0;
      if (!ok)
        throw std::invalid_argument("balogh_tyson gauge needs the (1/2, 1) group");
      break;
    }
  }
}

double norm_value(const NormModel& d, const Point& x) {
  const StepTwoGroup& g = d.group();
  g.check_point(x);
  switch (d.kind()) {
    case NormKind::koranyi: return koranyi_value(x);
    case NormKind::koranyi_B: return koranyi_B_value(g, x);
    case NormKind::cc: return cc_value(x);
    case NormKind::balogh_tyson: return balogh_tyson_value(x);
  }
  return 0.0;
}

ScalarField as_scalar_field(const NormModel& d) {
  ScalarField f;
  f.value = [d](const Point& x) { return norm_value(d, x); };
  if (d.has_analytic_gradient()) {
    f.hgrad = [d](const Point& x) { return norm_jet(d, x).hgrad; };
    f.dt = [d](const Point& x) { return norm_jet(d, x).dt; };
  }
  return f;
}

NormJet norm_jet(const NormModel& d, const Point& x, DiffScheme scheme) {
  const StepTwoGroup& g = d.group();
  g.check_point(x);
  require_off_origin(x, "norm_jet");
  NormJet jet;
  const bool analytic =
      scheme.kind == DiffScheme::Kind::analytic && d.has_analytic_gradient();
  if (analytic && d.kind() == NormKind::cc) {
    const CCPolar p = cc_invert_off_center(x, "norm_jet");
    jet.value = p.r;
    jet.hgrad = cc_hgrad_from_polar(p);
    jet.dt = VVector::Constant(1, p.nu / (4.0 * p.r));
    return jet;
  }
  jet.value = norm_value(d, x);
  if (!analytic) {
    if (d.kind() == NormKind::cc && x.z.squaredNorm() == 0.0)
      throw std::domain_error("norm_jet: the CC distance is not smooth on the center");
    ScalarField f;
    f.value = [&d](const Point& y) { return norm_value(d, y); };
    const DiffScheme fd = scheme.kind == DiffScheme::Kind::central_fd
                              ? scheme
                              : DiffScheme::fd();
    jet.hgrad = horizontal_gradient(g, f, x, fd);
    jet.dt = vertical_derivative(g, f, x, fd);
    return jet;
  }
  switch (d.kind()) {
    case NormKind::koranyi: {
      auto k = koranyi_derivatives(g, x);
      jet.hgrad = k.hgrad;
      jet.dt = k.dt;
      break;
    }
    case NormKind::koranyi_B: {
      auto k = koranyi_B_derivatives(g, x);
      jet.hgrad = k.hgrad;
      jet.dt = k.dt;
      break;
    }
    case NormKind::cc:            // handled above
    case NormKind::balogh_tyson:  // no analytic gradient
      break;
  }
  return jet;
}

double rotation_defect(const NormModel& d, const Point& x) {
  const StepTwoGroup& g = d.group();
  const NormJet jet = norm_jet(d, x);
  const HVector grad_z = ambient_z_gradient(g, x.z, jet.hgrad, jet.dt);
  return x.z.dot(apply_B_inverse(g, grad_z));
}

Point random_koranyi_sphere_point(const StepTwoGroup& g, SplitMix64& rng,
                                  double radius) {
  Point x{HVector(g.horizontal_dim()), VVector(g.vertical_dim())};
  double rho = 0.0;
  do {
    for (int k = 0; k < g.horizontal_dim(); ++k) x.z[k] = rng.normal();
    for (int j = 0; j < g.vertical_dim(); ++j) x.t[j] = rng.normal();
    rho = koranyi_value(x);
  } while (rho == 0.0);
  return dilate(radius / rho, x);
}

RatioRange norm_ratio_range(const NormModel& num, const NormModel& den,
                            int samples, std::uint64_t seed) {
  if (num.group().horizontal_dim() != den.group().horizontal_dim() ||
      num.group().vertical_dim() != den.group().vertical_dim())
    throw std::invalid_argument("norm_ratio_range: norms live on different groups");
  if (samples < 1) throw std::invalid_argument("norm_ratio_range: samples >= 1");
  SplitMix64 rng(seed);
  RatioRange out{std::numeric_limits<double>::infinity(), 0.0};
  for (int s = 0; s < samples; ++s) {
    const Point x = random_koranyi_sphere_point(num.group(), rng);
    const double r = norm_value(num, x) / norm_value(den, x);
    out.min = std::min(out.min, r);
    out.max = std::max(out.max, r);
  }
  return out;
}

}  // namespace carnot
