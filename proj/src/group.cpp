#include "carnot/group.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/LU>

namespace carnot {

Point make_point(std::initializer_list<double> z, std::initializer_list<double> t) {
  Point x;
  x.z.resize(static_cast<Eigen::Index>(z.size()));
  x.t.resize(static_cast<Eigen::Index>(t.size()));
  Eigen::Index k = 0;
  for (double v : z) x.z[k++] = v;
  k = 0;
  for (double v : t) x.t[k++] = v;
  return x;
}

StepTwoGroup::StepTwoGroup(Eigen::MatrixXd couplings,
                           std::vector<int> selected_blocks, std::string label)
    : couplings_(std::move(couplings)),
      selected_(std::move(selected_blocks)),
      label_(std::move(label)) {
  const int h = vertical_dim();
  const int n = blocks();
  if (h < 1 || n < 1)
    throw std::invalid_argument("StepTwoGroup: empty eigenvalue list");
  if (2 * n > kMaxHorizontal || h > kMaxVertical)
    throw std::invalid_argument("StepTwoGroup: dimension exceeds supported size");
  if (!couplings_.allFinite() || (couplings_.array() < 0.0).any())
    throw std::invalid_argument("StepTwoGroup: couplings must be finite and >= 0");
  if (h == 1 && (couplings_.array() <= 0.0).any())
    throw std::invalid_argument("StepTwoGroup: block eigenvalues must be positive");
  for (int i = 0; i < n; ++i)
    if (couplings_.col(i).isZero())
      throw std::invalid_argument("StepTwoGroup: block " + std::to_string(i) +
                                  " is not coupled to any vertical direction");
  if (static_cast<int>(selected_.size()) != h)
    throw std::invalid_argument("StepTwoGroup: need one selected block per vertical direction");
  for (int i : selected_)
    if (i < 0 || i >= n)
      throw std::invalid_argument("StepTwoGroup: selected block out of range");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(selection_matrix());
  if (!lu.isInvertible())
    throw std::invalid_argument("StepTwoGroup: selection matrix A is singular");
}

StepTwoGroup StepTwoGroup::heisenberg(int n) {
  if (n < 1) throw std::invalid_argument("heisenberg: n must be >= 1");
  return StepTwoGroup(Eigen::MatrixXd::Constant(1, n, 4.0), {0},
                      "heisenberg(n=" + std::to_string(n) + ")");
}

StepTwoGroup StepTwoGroup::single_vertical(const Eigen::VectorXd& lambdas) {
  if (lambdas.size() == 0)
    throw std::invalid_argument("StepTwoGroup: empty eigenvalue list");
  std::string label = "nonisotropic(";
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    if (i) label += ",";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", lambdas[i]);
    label += buf;
  }
  label += ")";
  return StepTwoGroup(lambdas.transpose(), {0}, label);
}

StepTwoGroup StepTwoGroup::heisenberg_product(int n, int factors) {
  if (n < 1 || factors < 1)
    throw std::invalid_argument("heisenberg_product: n and N must be >= 1");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(factors, n * factors);
  std::vector<int> selected;
  for (int j = 0; j < factors; ++j) {
    c.block(j, j * n, 1, n).setConstant(4.0);
    selected.push_back(j * n);
  }
  return StepTwoGroup(c, selected,
                      "product(n=" + std::to_string(n) +
                          ",N=" + std::to_string(factors) + ")");
}

Eigen::MatrixXd StepTwoGroup::selection_matrix() const {
  const int h = vertical_dim();
  Eigen::MatrixXd a(h, h);
  for (int k = 0; k < h; ++k)
    for (int j = 0; j < h; ++j) a(k, j) = couplings_(j, selected_[k]);
  return a;
}

bool StepTwoGroup::is_heisenberg() const {
  return vertical_dim() == 1 && (couplings_.array() == 4.0).all();
}

Eigen::MatrixXd StepTwoGroup::frame_vertical(const HVector& z) const {
  Eigen::MatrixXd c(horizontal_dim(), vertical_dim());
  for (int i = 0; i < blocks(); ++i)
    for (int j = 0; j < vertical_dim(); ++j) {
      c(2 * i, j) = 0.5 * couplings_(j, i) * z[2 * i + 1];
      c(2 * i + 1, j) = -0.5 * couplings_(j, i) * z[2 * i];
    }
  return c;
}

void StepTwoGroup::check_point(const Point& x) const {
  if (x.z.size() != horizontal_dim() || x.t.size() != vertical_dim())
    throw std::invalid_argument("point dimension does not match the group");
}

double lambda_min(const StepTwoGroup& g) {
  if (g.vertical_dim() != 1)
    throw std::invalid_argument("lambda_min: defined for one vertical direction");
  const Eigen::VectorXd l = g.lambdas();
  if (l.size() == 0) throw std::invalid_argument("lambda_min: empty eigenvalue list");
  return l.minCoeff();
}

double default_fd_step(const Point& x) {
  const double norm = std::sqrt(x.z.squaredNorm() + x.t.squaredNorm());
  return 1e-5 * std::max(1.0, norm);
}

Point frame_vector(const StepTwoGroup& g, int k, const Point& x) {
  Point v{HVector::Zero(g.horizontal_dim()), VVector::Zero(g.vertical_dim())};
  v.z[k] = 1.0;
  const int i = k / 2;
  const double other = (k % 2 == 0) ? x.z[k + 1] : -x.z[k - 1];
  for (int j = 0; j < g.vertical_dim(); ++j)
    v.t[j] = 0.5 * g.couplings()(j, i) * other;
  return v;
}

double directional_fd(const std::function<double(const Point&)>& f,
                      const Point& x, const Point& v, double step) {
  const Point plus{x.z + step * v.z, x.t + step * v.t};
  const Point minus{x.z - step * v.z, x.t - step * v.t};
  return (f(plus) - f(minus)) / (2.0 * step);
}

namespace {

double resolve_step(const DiffScheme& scheme, const Point& x) {
  return scheme.step > 0.0 ? scheme.step : default_fd_step(x);
}

}  // namespace

HVector horizontal_gradient(const StepTwoGroup& g, const ScalarField& u,
                            const Point& x, DiffScheme scheme) {
  g.check_point(x);
  if (scheme.kind == DiffScheme::Kind::analytic) {
    if (!u.hgrad)
      throw std::invalid_argument("horizontal_gradient: no analytic gradient");
    return u.hgrad(x);
  }
  const double h = resolve_step(scheme, x);
  HVector out(g.horizontal_dim());
  for (int k = 0; k < g.horizontal_dim(); ++k)
    out[k] = directional_fd(u.value, x, frame_vector(g, k, x), h);
  return out;
}

VVector vertical_derivative(const StepTwoGroup& g, const ScalarField& u,
                            const Point& x, DiffScheme scheme) {
  g.check_point(x);
  if (scheme.kind == DiffScheme::Kind::analytic) {
    if (!u.dt)
      throw std::invalid_argument("vertical_derivative: no analytic derivative");
    return u.dt(x);
  }
  const double h = resolve_step(scheme, x);
  VVector out(g.vertical_dim());
  for (int j = 0; j < g.vertical_dim(); ++j) {
    Point e{HVector::Zero(g.horizontal_dim()), VVector::Zero(g.vertical_dim())};
    e.t[j] = 1.0;
    out[j] = directional_fd(u.value, x, e, h);
  }
  return out;
}

HVector assemble_hgrad(const StepTwoGroup& g, const HVector& z,
                       const HVector& grad_z, const VVector& grad_t) {
  HVector out = grad_z;
  const auto& c = g.couplings();
  for (int i = 0; i < g.blocks(); ++i) {
    double s = 0.0;
    for (int j = 0; j < g.vertical_dim(); ++j) s += c(j, i) * grad_t[j];
    out[2 * i] += 0.5 * s * z[2 * i + 1];
    out[2 * i + 1] -= 0.5 * s * z[2 * i];
  }
  return out;
}

HVector ambient_z_gradient(const StepTwoGroup& g, const HVector& z,
                           const HVector& hgrad, const VVector& grad_t) {
  return hgrad - (assemble_hgrad(g, z, HVector::Zero(z.size()), grad_t));
}

double euler_from_jet(const StepTwoGroup& g, const Point& x, const HVector& hgrad,
                      const VVector& grad_t) {
  // <z, C(z) d_t u> vanishes by skew-symmetry, so <z, grad_z u> = <z, hgrad>.
  (void)g;
  return x.z.dot(hgrad) + 2.0 * x.t.dot(grad_t);
}

double euler_apply(const StepTwoGroup& g, const ScalarField& u, const Point& x,
                   DiffScheme scheme) {
  if (scheme.kind == DiffScheme::Kind::analytic)
    return euler_from_jet(g, x, horizontal_gradient(g, u, x, scheme),
                          vertical_derivative(g, u, x, scheme));
  g.check_point(x);
  // Direct ambient partials, independent of the frame.
  const double h = resolve_step(scheme, x);
  double out = 0.0;
  for (int k = 0; k < g.horizontal_dim(); ++k) {
    Point e{HVector::Zero(g.horizontal_dim()), VVector::Zero(g.vertical_dim())};
    e.z[k] = 1.0;
    out += x.z[k] * directional_fd(u.value, x, e, h);
  }
  for (int j = 0; j < g.vertical_dim(); ++j) {
    Point e{HVector::Zero(g.horizontal_dim()), VVector::Zero(g.vertical_dim())};
    e.t[j] = 1.0;
    out += 2.0 * x.t[j] * directional_fd(u.value, x, e, h);
  }
  return out;
}

double horizontal_divergence(const StepTwoGroup& g,
                             const std::function<HVector(const Point&)>& field,
                             const Point& x, double step) {
  g.check_point(x);
  const double h = step > 0.0 ? step : default_fd_step(x);
  double out = 0.0;
  for (int k = 0; k < g.horizontal_dim(); ++k) {
    auto component = [&](const Point& y) { return field(y)[k]; };
    out += directional_fd(component, x, frame_vector(g, k, x), h);
  }
  return out;
}

double commutator_apply(const StepTwoGroup& g, const ScalarField& u, int a,
                        int b, const Point& x, double step) {
  g.check_point(x);
  auto xb_u = [&](const Point& y) {
    return directional_fd(u.value, y, frame_vector(g, b, y), step);
  };
  auto xa_u = [&](const Point& y) {
    return directional_fd(u.value, y, frame_vector(g, a, y), step);
  };
  return directional_fd(xb_u, x, frame_vector(g, a, x), step) -
         directional_fd(xa_u, x, frame_vector(g, b, x), step);
}

HVector block_perp(const HVector& v, int block) {
  HVector out = HVector::Zero(v.size());
  out[2 * block] = -v[2 * block + 1];
  out[2 * block + 1] = v[2 * block];
  return out;
}

HVector block_part(const HVector& v, int block) {
  HVector out = HVector::Zero(v.size());
  out[2 * block] = v[2 * block];
  out[2 * block + 1] = v[2 * block + 1];
  return out;
}

HVector apply_B_inverse(const StepTwoGroup& g, const HVector& v) {
  if (g.vertical_dim() != 1)
    throw std::invalid_argument("apply_B_inverse: needs one vertical direction");
  HVector out(v.size());
  for (int i = 0; i < g.blocks(); ++i) {
    const double l = g.couplings()(0, i);
    out[2 * i] = -v[2 * i + 1] / l;
    out[2 * i + 1] = v[2 * i] / l;
  }
  return out;
}

}  // namespace carnot
