#include "carnot/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "carnot/numerics.hpp"

namespace carnot {

const char* to_string(QuadMethod m) {
  return m == QuadMethod::tensor_grid ? "tensor_grid" : "monte_carlo";
}

const char* to_string(Chart c) {
  return c == Chart::phi_polar ? "phi_polar" : "ambient";
}

QuadMethod quad_method_from_string(const std::string& name) {
  if (name == "tensor_grid" || name == "tensor") return QuadMethod::tensor_grid;
  if (name == "monte_carlo" || name == "mc") return QuadMethod::monte_carlo;
  throw std::invalid_argument("unknown quadrature method '" + name + "'");
}

Point phi_chart(const HVector& omega, double lambda) {
  const double q = 1.0 + lambda * lambda;
  Point x{omega / std::pow(q, 0.25), VVector(1)};
  x.t[0] = lambda * omega.squaredNorm() / std::sqrt(q);
  return x;
}

namespace {

constexpr double kPi = std::numbers::pi;

void check_finite(const double* v, int count) {
  for (int k = 0; k < count; ++k)
    if (!std::isfinite(v[k]))
      throw std::runtime_error("integrate: non-finite integrand sample");
}

NodesWeights composite(int nodes, int per_panel, double a, double b) {
  const int pp = std::max(1, per_panel);
  const int panels = std::max(1, (nodes + pp - 1) / pp);
  return composite_gauss_legendre(panels, pp, a, b);
}

// Chart parameter rule: nodes in the auxiliary variable, the lambda value
// and the measure factor d lambda / (1+lambda^2)^{(n+1)/2} per unit of the
// auxiliary variable.
struct LambdaRule {
  std::vector<double> lambda_cos;  // cos(beta) or (1+lambda^2)^{-1/2}
  std::vector<double> lambda_sin;  // sin(beta) or lambda (1+lambda^2)^{-1/2}
  std::vector<double> weight;
};

LambdaRule lambda_rule(const QuadratureSpec& q, int nodes, int n) {
  LambdaRule r;
  if (q.lambda_map == LambdaMap::atan) {
    const auto nw = composite(nodes, q.per_panel, -0.5 * kPi, 0.5 * kPi);
    for (Eigen::Index i = 0; i < nw.nodes.size(); ++i) {
      const double b = nw.nodes[i];
      r.lambda_cos.push_back(std::cos(b));
      r.lambda_sin.push_back(std::sin(b));
      r.weight.push_back(nw.weights[i] * std::pow(std::cos(b), n - 1));
    }
  } else {
    if (!(q.lambda_lo > 0.0 && q.lambda_hi > q.lambda_lo))
      throw std::invalid_argument("log_window needs 0 < lambda_lo < lambda_hi");
    const auto nw =
        composite(nodes, q.per_panel, std::log(q.lambda_lo), std::log(q.lambda_hi));
    for (Eigen::Index i = 0; i < nw.nodes.size(); ++i) {
      const double lam = std::exp(nw.nodes[i]);
      const double c = 1.0 / std::sqrt(1.0 + lam * lam);
      r.lambda_cos.push_back(c);
      r.lambda_sin.push_back(lam * c);
      r.weight.push_back(nw.weights[i] * lam * std::pow(c, n + 1));
    }
  }
  return r;
}

Eigen::VectorXd tensor_phi(const StepTwoGroup& g, const Integrand& f, int count,
                           const QuadratureSpec& q, int nr, int na, int nl,
                           long& evals) {
  if (g.vertical_dim() != 1 || g.blocks() != 1)
    throw std::invalid_argument(
        "tensor grid in the polar chart needs n = 1, h = 1; use monte_carlo");
  const auto radial = composite(nr, q.per_panel, q.r_min, q.r_max);
  const auto angle = periodic_trapezoid(na);
  const LambdaRule lam = lambda_rule(q, nl, 1);
  const std::size_t inner = static_cast<std::size_t>(angle.nodes.size()) * lam.weight.size();
  std::vector<std::vector<double>> outer(count, std::vector<double>(radial.nodes.size()));
  std::vector<std::vector<double>> buf(count, std::vector<double>(inner));
  std::vector<double> out(count);
  Point x{HVector(2), VVector(1)};
  for (Eigen::Index i = 0; i < radial.nodes.size(); ++i) {
    const double rho = radial.nodes[i];
    const double wr = radial.weights[i] * rho * rho * rho;
    std::size_t k = 0;
    for (Eigen::Index a = 0; a < angle.nodes.size(); ++a) {
      const double ca = std::cos(angle.nodes[a]), sa = std::sin(angle.nodes[a]);
      for (std::size_t l = 0; l < lam.weight.size(); ++l, ++k) {
        const double sq = std::sqrt(lam.lambda_cos[l]);
        x.z[0] = rho * sq * ca;
        x.z[1] = rho * sq * sa;
        x.t[0] = rho * rho * lam.lambda_sin[l];
        f(x, out.data());
        ++evals;
        check_finite(out.data(), count);
        const double w = angle.weights[a] * lam.weight[l];
        for (int c = 0; c < count; ++c) buf[c][k] = w * out[c];
      }
    }
    for (int c = 0; c < count; ++c) outer[c][i] = wr * pairwise_sum(buf[c].data(), inner);
  }
  Eigen::VectorXd v(count);
  for (int c = 0; c < count; ++c) v[c] = pairwise_sum(outer[c].data(), outer[c].size());
  return v;
}

Eigen::VectorXd tensor_ambient(const StepTwoGroup& g, const Integrand& f, int count,
                               const QuadratureSpec& q, int nodes, long& evals) {
  const int m = g.horizontal_dim(), h = g.vertical_dim();
  const int dim = m + h;
  if (dim > 3)
    throw std::invalid_argument("ambient tensor grid supports dimension <= 3; use monte_carlo");
  const auto zr = composite(nodes, q.per_panel, -q.r_max, q.r_max);
  const auto tr = composite(nodes, q.per_panel, -q.r_max * q.r_max, q.r_max * q.r_max);
  const Eigen::Index nz = zr.nodes.size();
  const Eigen::Index nt = tr.nodes.size();
  // dim == 3 for every admissible group (m >= 2, h >= 1).
  std::vector<std::vector<double>> outer(count, std::vector<double>(nz));
  std::vector<std::vector<double>> buf(count, std::vector<double>(nz * nt));
  std::vector<double> out(count);
  Point x{HVector(m), VVector(h)};
  for (Eigen::Index i = 0; i < nz; ++i) {
    x.z[0] = zr.nodes[i];
    std::size_t k = 0;
    for (Eigen::Index j = 0; j < nz; ++j) {
      x.z[1] = zr.nodes[j];
      for (Eigen::Index l = 0; l < nt; ++l, ++k) {
        x.t[0] = tr.nodes[l];
        f(x, out.data());
        ++evals;
        check_finite(out.data(), count);
        const double w = zr.weights[j] * tr.weights[l];
        for (int c = 0; c < count; ++c) buf[c][k] = w * out[c];
      }
    }
    for (int c = 0; c < count; ++c)
      outer[c][i] = zr.weights[i] * pairwise_sum(buf[c].data(), k);
  }
  Eigen::VectorXd v(count);
  for (int c = 0; c < count; ++c) v[c] = pairwise_sum(outer[c].data(), outer[c].size());
  return v;
}

// Radical inverse in base `base` of i + 1.
double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  ++i;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

constexpr std::array<std::uint64_t, 16> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19,
                                                   23, 29, 31, 37, 41, 43, 47, 53};

QuadResult monte_carlo(const StepTwoGroup& g, const Integrand& f, int count,
                       const QuadratureSpec& q) {
  const int m = g.horizontal_dim(), h = g.vertical_dim(), n = g.blocks();
  const bool polar = q.chart == Chart::phi_polar;
  if (polar && h != 1)
    throw std::invalid_argument("polar chart needs one vertical direction");
  const int udim = polar ? 2 + m : m + h;
  if (udim > static_cast<int>(kPrimes.size()))
    throw std::invalid_argument("monte_carlo: dimension too large");
  const int shifts = std::max(2, q.shifts);
  const long per = std::max<long>(1, q.samples / shifts);

  double volume = 1.0;
  double s_lo = 0.0, s_hi = 0.0;
  if (polar) {
    const double sphere = 2.0 * std::pow(kPi, n) / std::tgamma(n);
    volume = (q.r_max - q.r_min) * sphere;
    if (q.lambda_map == LambdaMap::atan) {
      volume *= kPi;
    } else {
      s_lo = std::log(q.lambda_lo);
      s_hi = std::log(q.lambda_hi);
      volume *= s_hi - s_lo;
    }
  } else {
    volume = std::pow(2.0 * q.r_max, m) * std::pow(2.0 * q.r_max * q.r_max, h);
  }

  SplitMix64 rng(q.seed);
  std::vector<std::vector<double>> estimates(count, std::vector<double>(shifts));
  std::vector<std::vector<double>> buf(count, std::vector<double>(per));
  std::vector<double> out(count);
  std::vector<double> u(udim), shift(udim);
  Point x{HVector(m), VVector(h)};
  HVector sigma(m);
  long evals = 0;
  for (int s = 0; s < shifts; ++s) {
    for (int d = 0; d < udim; ++d) shift[d] = rng.uniform();
    for (long i = 0; i < per; ++i) {
      for (int d = 0; d < udim; ++d) {
        double v;
        if (q.quasi_random) {
          v = radical_inverse(static_cast<std::uint64_t>(i), kPrimes[d]) + shift[d];
          if (v >= 1.0) v -= 1.0;
        } else {
          v = rng.uniform();
        }
        u[d] = v;
      }
      double w = volume;
      if (polar) {
        const double rho = q.r_min + (q.r_max - q.r_min) * u[0];
        // Box-Muller pairs give a uniform direction on the sphere.
        for (int k = 0; k < n; ++k) {
          const double r = std::sqrt(-2.0 * std::log(1.0 - u[2 + 2 * k]));
          const double a = 2.0 * kPi * u[3 + 2 * k];
          sigma[2 * k] = r * std::cos(a);
          sigma[2 * k + 1] = r * std::sin(a);
        }
        const double sn = sigma.norm();
        if (sn == 0.0) {
          for (int c = 0; c < count; ++c) buf[c][i] = 0.0;
          continue;
        }
        sigma /= sn;
        double cb, sb, lw;
        if (q.lambda_map == LambdaMap::atan) {
          const double beta = kPi * (u[1] - 0.5);
          cb = std::cos(beta);
          sb = std::sin(beta);
          lw = std::pow(cb, n - 1);
        } else {
          const double lam = std::exp(s_lo + (s_hi - s_lo) * u[1]);
          cb = 1.0 / std::sqrt(1.0 + lam * lam);
          sb = lam * cb;
          lw = lam * std::pow(cb, n + 1);
        }
        x.z = rho * std::sqrt(cb) * sigma;
        x.t[0] = rho * rho * sb;
        w *= std::pow(rho, 2 * n + 1) * lw;
      } else {
        for (int k = 0; k < m; ++k) x.z[k] = q.r_max * (2.0 * u[k] - 1.0);
        for (int j = 0; j < h; ++j)
          x.t[j] = q.r_max * q.r_max * (2.0 * u[m + j] - 1.0);
      }
      f(x, out.data());
      ++evals;
      check_finite(out.data(), count);
      for (int c = 0; c < count; ++c) buf[c][i] = w * out[c];
    }
    for (int c = 0; c < count; ++c)
      estimates[c][s] = pairwise_sum(buf[c].data(), per) / static_cast<double>(per);
  }
  QuadResult r;
  r.values.resize(count);
  r.errors.resize(count);
  for (int c = 0; c < count; ++c) {
    const double mean = pairwise_sum(estimates[c].data(), shifts) / shifts;
    double var = 0.0;
    for (double e : estimates[c]) var += (e - mean) * (e - mean);
    var /= (shifts - 1);
    r.values[c] = mean;
    r.errors[c] = std::sqrt(var / shifts);
  }
  r.evaluations = evals;
  r.method = std::string("monte_carlo/") + to_string(q.chart) +
             (q.quasi_random ? "/shifted_halton" : "/splitmix64");
  return r;
}

}  // namespace

QuadResult integrate_many(const StepTwoGroup& g, const Integrand& f, int count,
                          const QuadratureSpec& q) {
  if (count < 1) throw std::invalid_argument("integrate: count must be >= 1");
  if (!(q.r_max > q.r_min && q.r_min >= 0.0))
    throw std::invalid_argument("integrate: need 0 <= r_min < r_max");
  if (q.method == QuadMethod::monte_carlo) return monte_carlo(g, f, count, q);

  QuadResult r;
  long evals = 0;
  auto run = [&](int scale) {
    if (q.chart == Chart::phi_polar)
      return tensor_phi(g, f, count, q, q.radial_nodes / scale,
                        std::max(4, q.angle_nodes / scale),
                        q.lambda_nodes / scale, evals);
    return tensor_ambient(g, f, count, q, q.radial_nodes / scale, evals);
  };
  r.values = run(1);
  if (q.error_estimate)
    r.errors = (r.values - run(2)).cwiseAbs();
  else
    r.errors = Eigen::VectorXd::Constant(count, std::numeric_limits<double>::quiet_NaN());
  r.evaluations = evals;
  r.method = std::string("tensor_grid/") + to_string(q.chart);
  return r;
}

QuadResult integrate(const StepTwoGroup& g,
                     const std::function<double(const Point&)>& f,
                     const QuadratureSpec& q) {
  return integrate_many(
      g, [&f](const Point& x, double* out) { out[0] = f(x); }, 1, q);
}

}  // namespace carnot
